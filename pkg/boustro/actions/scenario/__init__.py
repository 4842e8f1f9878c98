from boustro.actions.scenario.describe import describe_handler
from boustro.actions.scenario.generate import generate_handler

SCENARIO_ACTIONS = {
    "generate": generate_handler,
    "describe": describe_handler,
}
