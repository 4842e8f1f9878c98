"""
Comparison planner: k regularly spaced tracklines traveled once at one constant speed.

The sweep over (k, v) gives a baseline front. Several AUVs sharing a survey are
emulated by dividing path duration by the number of vehicles.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from boustro.core.config import BaselineConfig
from boustro.core.errors import ValidationError
from boustro.core.executor import CandidateExecutor, SerialExecutor
from boustro.core.logger import get_logger
from boustro.search.geometry import Bounds, Trackline
from boustro.search.objective import PathPlan, build_effort_matrix, evaluate
from boustro.search.pareto import ObjectivePair, non_dominated_sort
from boustro.search.scenario import Scenario

logger = get_logger(__name__)


@dataclass(frozen=True)
class BaselinePoint:
    k: int
    speed: float
    tracklines: tuple[Trackline, ...]
    plan: PathPlan
    objectives: ObjectivePair


@dataclass(frozen=True)
class CurvePoint:
    p_nd: float
    duration: float
    elapsed: float


def regular_tracklines(area: Bounds, k: int, offset: float = 0.5) -> list[Trackline]:
    """k full-width lines at y = y_min + (i + offset) * H / k."""
    if k < 1:
        raise ValidationError("baseline_count", "At least one regular trackline is required")
    step = area.height / k
    return [Trackline(y=area.y_min + (i + offset) * step, x_start=area.x_min, x_end=area.x_max) for i in range(k)]


def regular_plan(scenario: Scenario, k: int, v: float, offset: float = 0.5) -> BaselinePoint:
    limits = scenario.limits
    if not (limits.v_min * (1.0 - 1e-9) <= v <= limits.v_max * (1.0 + 1e-9)):
        raise ValidationError("baseline_speed", f"Speed {v} m/s outside [{limits.v_min}, {limits.v_max}]")
    regular = scenario.with_tracklines(regular_tracklines(scenario.area, k, offset))
    plan = PathPlan(counts=(1,) * k, speeds=(float(v),) * k)
    result = evaluate(plan, build_effort_matrix(regular), regular.priors, limits.tau)
    return BaselinePoint(
        k=k,
        speed=float(v),
        tracklines=regular.tracklines,
        plan=plan,
        objectives=ObjectivePair(result.p_nd, result.duration),
    )


def speed_grid(scenario: Scenario, config: BaselineConfig) -> list[float]:
    if config.speed_grid is not None:
        return [float(v) for v in config.speed_grid]
    return [float(v) for v in np.linspace(scenario.limits.v_min, scenario.limits.v_max, config.speed_steps)]


def sweep_baseline(
    scenario: Scenario, config: BaselineConfig, executor: CandidateExecutor | None = None
) -> list[BaselinePoint]:
    """
    Evaluates every (k, v) pair of the config.

    Points longer than auv_count * T_max are left out: no fleet of that size could
    fly them within its endurance.
    """
    executor = executor if executor is not None else SerialExecutor()
    pairs = list(itertools.product(config.trackline_counts, speed_grid(scenario, config)))
    points = executor.map(lambda kv: regular_plan(scenario, kv[0], kv[1], config.offset), pairs)
    horizon = config.auv_count * scenario.limits.t_max * (1.0 + 1e-9)
    kept = [p for p in points if p.objectives.duration <= horizon]
    logger.info("Baseline sweep complete", {"pairs": len(pairs), "kept": len(kept)})
    return kept


def baseline_front(points: Sequence[BaselinePoint]) -> list[BaselinePoint]:
    """Non-dominated baseline points sorted by duration."""
    if not points:
        return []
    first = non_dominated_sort([p.objectives for p in points])[0]
    return sorted((points[i] for i in first), key=lambda p: (p.objectives.duration, p.objectives.p_nd))


def scale_for_auvs(points: Sequence[ObjectivePair], n: int) -> list[CurvePoint]:
    """Each point's elapsed time is its duration divided by n; nothing is re-optimized."""
    if n < 1:
        raise ValidationError("auv_count", "At least one AUV is required")
    return [CurvePoint(p_nd=p.p_nd, duration=p.duration, elapsed=p.duration / n) for p in points]


def detection_curve(curve: Sequence[CurvePoint]) -> list[tuple[float, float]]:
    """(elapsed seconds, detection probability 1 - p_nd) pairs."""
    return [(c.elapsed, 1.0 - c.p_nd) for c in curve]


