from typing import Literal

from boustro.actions.scenario import SCENARIO_ACTIONS
from boustro.app import mcp
from boustro.core.context import PlannerContext
from boustro.dependencies import CurrentPlannerContext


@mcp.tool()
async def survey_scenario(
    action: Literal["generate", "describe"],
    scenario: str | None = None,
    config: str | None = None,
    seed: int | None = None,
    out: str | None = None,
    plots: bool = True,
    context: PlannerContext = CurrentPlannerContext(),
) -> str:
    """Create and inspect a-priori leak maps.

    Actions:
    - generate: Generate a random leak map (config file optional) into `out`
    - describe: Summarize the scenario file `scenario`
    """
    handler = SCENARIO_ACTIONS.get(action)
    if not handler:
        raise ValueError(f"Unknown action: {action}")

    params = {
        "scenario": scenario,
        "config": config,
        "seed": seed,
        "out": out,
        "plots": plots,
    }

    return await handler(params, context)
