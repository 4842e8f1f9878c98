import asyncio
import json
import math
from typing import Any

from boustro.actions.common import fleet_size, output_dir, planning_config, scenario_param
from boustro.core.context import PlannerContext
from boustro.core.errors import PlanMismatch
from boustro.export.plots import plot_comparison
from boustro.export.report import comparison_rows, load_report, write_comparison_csv
from boustro.search.baseline import baseline_front, scale_for_auvs, sweep_baseline
from boustro.search.moce import run
from boustro.search.pareto import ObjectivePair, interpolate_p_nd
from boustro.search.scenario import scenario_digest


async def compare_handler(params: dict[str, Any], context: PlannerContext) -> str:
    """
    Compare the optimized front against regularly spaced constant-speed paths.

    The optimized front comes from `report` when given, otherwise from a fresh run.
    With `auvs` vehicles both planners get the pooled budget auvs * T_max, and both
    curves are then scaled to elapsed time. A reused report must have been planned
    for the same fleet size.
    """
    scenario = scenario_param(params, "compare")
    config = planning_config(params)
    auvs = fleet_size(params, config)
    fleet = scenario.for_fleet(auvs)
    baseline_config = config.baseline.model_copy(update={"auv_count": auvs})
    out = output_dir(params)

    if params.get("report"):
        report = load_report(params["report"])
        if report.scenario_digest != scenario_digest(fleet):
            raise PlanMismatch(f"Report was produced for a different scenario or fleet size (expected {auvs} AUVs)")
        front = [ObjectivePair(e.p_nd, e.duration_s) for e in report.entries]
    else:
        result = await asyncio.to_thread(run, fleet, config.moce, config.solver, executor=context.executor)
        front = result.archive.objectives()

    points = await asyncio.to_thread(sweep_baseline, scenario, baseline_config, context.executor)
    points.sort(key=lambda p: (p.objectives.duration, p.k, p.speed))
    scaled = scale_for_auvs([p.objectives for p in points], auvs)
    optimized_at = [interpolate_p_nd(front, p.objectives.duration) for p in points]
    rows = comparison_rows(
        [(c.elapsed, p.k, p.speed, c.p_nd) for c, p in zip(scaled, points, strict=True)], optimized_at
    )
    write_comparison_csv(rows, out / "comparison.csv")

    figures = []
    if params.get("plots", True):
        curve = scale_for_auvs([p.objectives for p in baseline_front(points)], auvs)
        figures.append(str(plot_comparison(scale_for_auvs(front, auvs), curve, auvs, out / "comparison.svg")))

    gaps = [float(r["gap"]) for r in rows if math.isfinite(r["gap"])]
    summary = {
        "comparison": str(out / "comparison.csv"),
        "auvs": auvs,
        "baseline_points": len(rows),
        "front_size": len(front),
        "front_horizon_s": max(p.duration for p in front),
        "min_gap": min(gaps) if gaps else None,
        "optimized_dominates": all(g >= -1e-9 for g in gaps),
        "figures": figures,
    }
    return json.dumps(summary)
