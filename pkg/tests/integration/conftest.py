"""
Acceptance-scale fixtures.

The full-size leak map and its front are expensive (minutes on a desktop), so
they are built once per module and shared by every test that reads them.
"""

import pytest

from boustro.core.config import GeneratorConfig, MoceConfig
from boustro.core.executor import create_executor
from boustro.search.moce import MoceResult, run
from boustro.search.scenario import Scenario, generate_random_scenario

# full-size map; a shortened run keeps the suite within a coffee break. The front is
# read by linear interpolation between neighbors, so it is kept dense.
FULL_SIZE_GENERATOR = GeneratorConfig(trackline_inset_m=1.0)
FULL_SIZE_MOCE = MoceConfig(population=200, max_generations=60, stagnation_patience=15, archive_capacity=256)


def full_size_run(seed: int) -> tuple[Scenario, MoceResult]:
    scenario = generate_random_scenario(FULL_SIZE_GENERATOR, seed=seed)
    executor = create_executor()
    try:
        result = run(scenario, FULL_SIZE_MOCE.model_copy(update={"rng_seed": seed}), executor=executor)
    finally:
        executor.shutdown()
    return scenario, result


@pytest.fixture(scope="module")
def full_size_front() -> tuple[Scenario, MoceResult]:
    return full_size_run(seed=2024)


@pytest.fixture
def full_size_run_factory():
    return full_size_run
