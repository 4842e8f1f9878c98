import asyncio
import json
from typing import Any

from boustro.actions.common import fleet_size, output_dir, planning_config, scenario_param
from boustro.core.context import PlannerContext
from boustro.core.errors import InputError
from boustro.core.logger import get_logger
from boustro.export.plots import plot_front, plot_trajectory
from boustro.export.report import (
    PlanEntry,
    build_report,
    save_report,
    write_front_csv,
    write_front_json,
    write_plans,
)
from boustro.search.moce import run
from boustro.search.pareto import ObjectivePair

logger = get_logger(__name__)

FORMATS = ("csv", "json")


def trajectory_picks(entries: list[PlanEntry]) -> list[PlanEntry]:
    """Shortest non-empty, median and longest front plans, without repeats."""
    non_empty = [e for e in entries if any(e.counts)]
    if not non_empty:
        return []
    picks = [non_empty[0], non_empty[len(non_empty) // 2], non_empty[-1]]
    return list({e.plan_id: e for e in picks}.values())


async def plan_handler(params: dict[str, Any], context: PlannerContext) -> str:
    """
    Run the cross-entropy planner and write the report, front, plans and figures.

    With `auvs` greater than one the endurance T_max is pooled over the fleet.
    """
    fmt = params.get("format") or "csv"
    if fmt not in FORMATS:
        raise InputError(f"Unknown format: {fmt} (expected one of {', '.join(FORMATS)})")
    config = planning_config(params)
    scenario = scenario_param(params, "plan").for_fleet(fleet_size(params, config))
    out = output_dir(params)

    result = await asyncio.to_thread(run, scenario, config.moce, config.solver, executor=context.executor)
    report = build_report(scenario, result, config)

    save_report(report, out / "report.json")
    front_path = out / f"front.{fmt}"
    if fmt == "csv":
        write_front_csv(report.entries, front_path)
    else:
        write_front_json(report.entries, front_path)
    plans = write_plans(report, out / "plans")

    figures = []
    if params.get("plots", True):
        objectives = [ObjectivePair(e.p_nd, e.duration_s) for e in report.entries]
        figures.append(str(plot_front(objectives, out / "front.svg")))
        for entry in trajectory_picks(report.entries):
            number = entry.plan_id.removeprefix("plan-")
            figures.append(
                str(plot_trajectory(scenario, report.plan(entry.plan_id), entry.posteriors, out / f"trajectory-{number}.svg"))
            )

    logger.info("Plan written", {"out": str(out), "front": len(report.entries), "elapsed_s": result.elapsed_s})
    summary = {
        "report": str(out / "report.json"),
        "front": str(front_path),
        "front_size": len(report.entries),
        "best_p_nd": report.entries[-1].p_nd,
        "generations": result.generations,
        "evaluations": result.evaluations,
        "discarded": result.discarded,
        "seeded": result.seeded,
        "elapsed_s": result.elapsed_s,
        "plans": len(plans),
        "figures": figures,
    }
    return json.dumps(summary)
