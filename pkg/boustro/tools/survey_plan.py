from typing import Literal

from boustro.actions.plan import PLAN_ACTIONS
from boustro.app import mcp
from boustro.core.context import PlannerContext
from boustro.dependencies import CurrentPlannerContext


@mcp.tool()
async def survey_plan(
    action: Literal["plan", "evaluate", "compare"],
    scenario: str,
    config: str | None = None,
    plan: str | None = None,
    report: str | None = None,
    seed: int | None = None,
    out: str | None = None,
    format: Literal["csv", "json"] = "csv",
    monte_carlo: int | None = None,
    auvs: int | None = None,
    plots: bool = True,
    context: PlannerContext = CurrentPlannerContext(),
) -> str:
    """Plan, evaluate and compare boustrophedon leak searches.

    Actions:
    - plan: Compute the Pareto front of (non-detection probability, duration) into `out`
    - evaluate: Evaluate the plan file `plan`, optionally with a Monte-Carlo cross-check
    - compare: Compare the optimized front (fresh run or `report`) with regular constant-speed paths
    """
    handler = PLAN_ACTIONS.get(action)
    if not handler:
        raise ValueError(f"Unknown action: {action}")

    params = {
        "scenario": scenario,
        "config": config,
        "plan": plan,
        "report": report,
        "seed": seed,
        "out": out,
        "format": format,
        "monte_carlo": monte_carlo,
        "auvs": auvs,
        "plots": plots,
    }

    return await handler(params, context)
