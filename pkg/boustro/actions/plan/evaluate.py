import asyncio
import json
from typing import Any

from boustro.actions.common import require, scenario_param
from boustro.core.context import PlannerContext
from boustro.export.report import load_plan
from boustro.search.objective import (
    build_effort_matrix,
    evaluate,
    monte_carlo_nondetection,
    posterior_update,
    validate_plan,
    wall_clock_duration,
)


async def evaluate_handler(params: dict[str, Any], context: PlannerContext) -> str:
    """Evaluate a stored plan; optionally cross-check p_nd with a Monte-Carlo estimate."""
    scenario = scenario_param(params, "evaluate").for_fleet(int(params.get("auvs") or 1))
    plan = load_plan(require(params, "plan", "evaluate"))
    effort = build_effort_matrix(scenario)
    validate_plan(plan, scenario.limits, effort.n_tracklines)

    result = evaluate(plan, effort, scenario.priors, scenario.limits.tau)
    posteriors = posterior_update(scenario.priors, result)
    output: dict[str, Any] = {
        "p_nd": result.p_nd,
        "duration_s": result.duration,
        "wall_clock_s": wall_clock_duration(plan, effort, scenario.tracklines, scenario.limits.v_max),
        "posteriors": [
            {"id": s.id, "prior": s.prior, "posterior": float(post), "exponent": float(e)}
            for s, post, e in zip(scenario.sources, posteriors, result.per_source_exponent, strict=True)
        ],
    }

    samples = params.get("monte_carlo")
    if samples:
        seed = params.get("seed") or 0
        estimate, std_error = await asyncio.to_thread(
            monte_carlo_nondetection, plan, scenario, int(samples), int(seed), effort
        )
        output["monte_carlo"] = {
            "samples": int(samples),
            "seed": int(seed),
            "estimate": estimate,
            "std_error": std_error,
            "z_score": (estimate - result.p_nd) / std_error if std_error > 0.0 else 0.0,
        }
    return json.dumps(output)
