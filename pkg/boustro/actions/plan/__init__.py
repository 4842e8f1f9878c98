from boustro.actions.plan.compare import compare_handler
from boustro.actions.plan.evaluate import evaluate_handler
from boustro.actions.plan.plan import plan_handler

PLAN_ACTIONS = {
    "plan": plan_handler,
    "evaluate": evaluate_handler,
    "compare": compare_handler,
}
