"""
Run reports, plan files and CSV/JSON exports.

All data files are SI (meters, seconds, m/s). A report embeds its scenario so
every stored plan can be re-evaluated without the original input files.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from boustro import __version__
from boustro.core.config import PlanningConfig
from boustro.core.errors import ParseError
from boustro.search.moce import MoceResult
from boustro.search.objective import (
    EffortMatrix,
    PathPlan,
    build_effort_matrix,
    evaluate,
    posterior_update,
    wall_clock_duration,
)
from boustro.search.pareto import ArchiveEntry
from boustro.search.scenario import Scenario, ScenarioDocument, scenario_digest

PLAN_VERSION = 1
REPORT_VERSION = 1
FRONT_COLUMNS = ["p_nd", "duration_s", "plan_id"]
COMPARISON_COLUMNS = ["elapsed_s", "k", "speed_mps", "baseline_p_nd", "optimized_p_nd", "gap"]


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PlanDocument(_Document):
    version: int = PLAN_VERSION
    counts: list[int]
    speeds: list[float]

    @classmethod
    def from_plan(cls, plan: PathPlan) -> PlanDocument:
        return cls(counts=list(plan.counts), speeds=list(plan.speeds))

    def to_plan(self) -> PathPlan:
        return PathPlan(counts=tuple(self.counts), speeds=tuple(self.speeds))


class PlanEntry(_Document):
    plan_id: str
    p_nd: float
    duration_s: float
    budget_s: float
    wall_clock_s: float
    counts: list[int]
    speeds: list[float]
    posteriors: list[float]


class RunTiming(_Document):
    generations: int
    evaluations: int
    discarded: int
    elapsed_s: float


class RunReport(_Document):
    version: int = REPORT_VERSION
    tool_version: str = __version__
    scenario_digest: str
    scenario: ScenarioDocument
    config: dict[str, Any] = Field(default_factory=dict)
    entries: list[PlanEntry] = Field(default_factory=list)
    timing: RunTiming

    def plan(self, plan_id: str) -> PathPlan:
        for entry in self.entries:
            if entry.plan_id == plan_id:
                return PathPlan(counts=tuple(entry.counts), speeds=tuple(entry.speeds))
        raise KeyError(plan_id)


def plan_id(index: int) -> str:
    return f"plan-{index:03d}"


def plan_entry(
    index: int, entry: ArchiveEntry, scenario: Scenario, effort: EffortMatrix
) -> PlanEntry:
    result = evaluate(entry.plan, effort, scenario.priors, scenario.limits.tau)
    return PlanEntry(
        plan_id=plan_id(index),
        p_nd=entry.objectives.p_nd,
        duration_s=entry.objectives.duration,
        budget_s=entry.budget,
        wall_clock_s=wall_clock_duration(entry.plan, effort, scenario.tracklines, scenario.limits.v_max),
        counts=list(entry.plan.counts),
        speeds=list(entry.plan.speeds),
        posteriors=[float(p) for p in posterior_update(scenario.priors, result)],
    )


def build_report(scenario: Scenario, result: MoceResult, config: PlanningConfig) -> RunReport:
    effort = build_effort_matrix(scenario)
    return RunReport(
        scenario_digest=scenario_digest(scenario),
        scenario=ScenarioDocument.from_scenario(scenario),
        config=config.model_dump(mode="json"),
        entries=[plan_entry(i, e, scenario, effort) for i, e in enumerate(result.archive.entries)],
        timing=RunTiming(
            generations=result.generations,
            evaluations=result.evaluations,
            discarded=result.discarded,
            elapsed_s=result.elapsed_s,
        ),
    )


def verify_report(report: RunReport, tolerance: float = 1e-9) -> list[str]:
    """Plan ids whose stored objectives differ from a fresh evaluation against the stored scenario."""
    scenario = report.scenario.to_scenario()
    effort = build_effort_matrix(scenario)
    mismatched = []
    for entry in report.entries:
        plan = PathPlan(counts=tuple(entry.counts), speeds=tuple(entry.speeds))
        result = evaluate(plan, effort, scenario.priors, scenario.limits.tau)
        if abs(result.p_nd - entry.p_nd) > tolerance or abs(result.duration - entry.duration_s) > max(
            tolerance, tolerance * entry.duration_s
        ):
            mismatched.append(entry.plan_id)
    return mismatched


def _parse(model: type[_Document], text: str, source: str | None) -> Any:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, path=source, location=f"line {e.lineno} column {e.colno}") from e
    try:
        return model.model_validate(data)
    except PydanticValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise ParseError(first["msg"], path=source, location=f"field {field}") from e


def save_report(report: RunReport, path: str | Path) -> None:
    Path(path).write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")


def load_report(path: str | Path) -> RunReport:
    return _parse(RunReport, Path(path).read_text(encoding="utf-8"), str(path))


def save_plan(plan: PathPlan, path: str | Path) -> None:
    Path(path).write_text(PlanDocument.from_plan(plan).model_dump_json(indent=2) + "\n", encoding="utf-8")


def load_plan(path: str | Path) -> PathPlan:
    """
    Raises:
        ParseError: If the file is not a version-1 plan document.
    """
    doc: PlanDocument = _parse(PlanDocument, Path(path).read_text(encoding="utf-8"), str(path))
    if doc.version != PLAN_VERSION:
        raise ParseError(f"Unsupported plan version {doc.version}", path=str(path))
    if len(doc.counts) != len(doc.speeds):
        raise ParseError("counts and speeds must have the same length", path=str(path))
    return doc.to_plan()


def write_plans(report: RunReport, directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for entry in report.entries:
        path = directory / f"{entry.plan_id}.json"
        save_plan(PathPlan(counts=tuple(entry.counts), speeds=tuple(entry.speeds)), path)
        written.append(path)
    return written


def write_front_csv(entries: Sequence[PlanEntry], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=FRONT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for e in entries:
            writer.writerow({"p_nd": repr(e.p_nd), "duration_s": repr(e.duration_s), "plan_id": e.plan_id})


def write_front_json(entries: Sequence[PlanEntry], path: str | Path) -> None:
    rows = [{"p_nd": e.p_nd, "duration_s": e.duration_s, "plan_id": e.plan_id} for e in entries]
    Path(path).write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")


def comparison_rows(
    baseline: Sequence[tuple[float, int, float, float]], optimized_p_nd: Sequence[float]
) -> list[dict[str, float | int]]:
    """
    Joins baseline points (elapsed, k, speed, p_nd) with the optimized front read at
    the same elapsed time. `gap` is baseline minus optimized p_nd.
    """
    rows: list[dict[str, float | int]] = []
    for (elapsed, k, speed, p_nd), opt in zip(baseline, optimized_p_nd, strict=True):
        rows.append(
            {
                "elapsed_s": elapsed,
                "k": k,
                "speed_mps": speed,
                "baseline_p_nd": p_nd,
                "optimized_p_nd": opt,
                "gap": p_nd - opt if np.isfinite(opt) else float("nan"),
            }
        )
    return rows


def write_comparison_csv(rows: Sequence[dict[str, float | int]], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=COMPARISON_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
