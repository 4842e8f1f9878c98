"""Shared scenario builders for unit and integration tests."""

import json
from collections.abc import Sequence
from pathlib import Path

import pytest

from boustro.core.config import GeneratorConfig, LimitsConfig, PriorTier
from boustro.search.geometry import Bounds, ConvexPolygon, Point2, Trackline
from boustro.search.scenario import AuvLimits, LeakSource, Scenario, save_scenario

TEST_LIMITS = AuvLimits(v_min=1.0, v_max=2.0, t_max=10_000.0, z_max=1, tau=200.0)

# a few seconds of planning: enough to exercise every stage of a run
SMALL_PLANNING = {
    "moce": {"population": 20, "max_generations": 4, "stagnation_patience": 4, "rng_seed": 5},
    "baseline": {"trackline_counts": [1, 2, 4], "speed_steps": 2},
}


def square(x0: float, y0: float, size: float) -> ConvexPolygon:
    return ConvexPolygon.from_vertices([(x0, y0), (x0 + size, y0), (x0 + size, y0 + size), (x0, y0 + size)])


def make_scenario(
    spills: Sequence[ConvexPolygon],
    priors: Sequence[float],
    ys: Sequence[float],
    area: Bounds | None = None,
    limits: AuvLimits = TEST_LIMITS,
) -> Scenario:
    area = area or Bounds.square(1000.0)
    sources = tuple(
        LeakSource(
            id=i,
            origin=Point2(float(poly.as_array()[:, 0].mean()), float(poly.as_array()[:, 1].mean())),
            spill=poly,
            prior=p,
        )
        for i, (poly, p) in enumerate(zip(spills, priors, strict=True))
    )
    tracklines = tuple(Trackline(y=y, x_start=area.x_min, x_end=area.x_max) for y in sorted(ys))
    return Scenario(area=area, sources=sources, tracklines=tracklines, limits=limits)


def small_generator(seed: int, sources: int = 3) -> GeneratorConfig:
    """Random scenarios small enough for exhaustive checks: at most 2 * sources tracklines."""
    return GeneratorConfig(
        width_m=2000.0,
        height_m=2000.0,
        tiers=[PriorTier(count=sources, prior=0.3)],
        semi_axis_min_m=100.0,
        semi_axis_max_m=400.0,
        trackline_inset_m=5.0,
        limits=LimitsConfig(v_min_knots=2.0, v_max_knots=5.0, t_max_hours=1.0, tau_s=200.0),
        seed=seed,
    )


@pytest.fixture
def scenario_factory():
    return make_scenario


@pytest.fixture
def square_factory():
    return square


@pytest.fixture
def one_line_scenario() -> Scenario:
    """One source (prior 0.5) crossed over 100 m by a single 1000 m trackline."""
    return make_scenario([square(100.0, 100.0, 100.0)], [0.5], [150.0])


@pytest.fixture
def two_source_scenario() -> Scenario:
    """Two sources, four tracklines: two cross source 0, one crosses source 1, one crosses nothing."""
    return make_scenario(
        [square(100.0, 100.0, 200.0), square(500.0, 600.0, 100.0)],
        [0.6, 0.2],
        [150.0, 250.0, 650.0, 900.0],
    )


@pytest.fixture
def small_generator_factory():
    return small_generator


@pytest.fixture
def scenario_file(tmp_path, two_source_scenario) -> Path:
    path = tmp_path / "scenario.json"
    save_scenario(two_source_scenario, path)
    return path


@pytest.fixture
def planning_config_file(tmp_path) -> Path:
    path = tmp_path / "planning.json"
    path.write_text(json.dumps(SMALL_PLANNING))
    return path


@pytest.fixture
def uncrossed_scenario_file(tmp_path) -> Path:
    """A source no trackline reaches."""
    scenario = make_scenario([square(100.0, 100.0, 100.0)], [0.5], [600.0])
    path = tmp_path / "uncrossed.json"
    save_scenario(scenario, path)
    return path
