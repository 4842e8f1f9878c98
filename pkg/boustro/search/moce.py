"""
Multi-objective cross-entropy search over trackline selections and duration budgets.

Each candidate draws binary traversal variables delta_jk ~ Bernoulli(p_jk) and a
budget T from a truncated normal, gets its speeds from the convex inner solver,
and is offered to the Pareto archive. The sampling distribution is then refit to
the elite candidates (non-domination rank, then crowding distance).

Before the first generation the archive holds the empty plan and constant-speed
greedy chains, which keep the short end of the front populated.

Random streams are derived from (seed, generation, candidate index), and archive
insertion follows candidate order, so results do not depend on thread count.
"""

from __future__ import annotations

import dataclasses
import math
import threading
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.stats import truncnorm

from boustro.core.config import MoceConfig, SolverConfig
from boustro.core.errors import InfeasibleProblem, NoConvergence
from boustro.core.executor import CandidateExecutor, SerialExecutor
from boustro.core.logger import get_logger
from boustro.search.objective import EffortMatrix, PathPlan, build_effort_matrix, validate_plan
from boustro.search.pareto import ObjectivePair, ParetoArchive, crowding_distances, non_dominated_sort
from boustro.search.scenario import AuvLimits, Scenario
from boustro.search.speed_opt import DEFAULT_SOLVER, SpeedProblem, SpeedSolution, solve_speeds

logger = get_logger(__name__)

GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MoceState:
    """Sampling distribution: Bernoulli matrix (m x z) over delta_jk and a normal over T."""

    bernoulli_p: np.ndarray
    t_mean: float
    t_std: float
    generation: int = 0


@dataclass(frozen=True)
class CandidateSample:
    bits: np.ndarray
    delta: np.ndarray
    budget: float
    evaluation: ObjectivePair | None = None
    speeds: SpeedSolution | None = None

    @property
    def is_empty(self) -> bool:
        return not bool(self.delta.any())

    def plan(self, limits: AuvLimits) -> PathPlan:
        m = len(self.delta)
        if self.speeds is None:
            speeds = np.full(m, limits.v_max)
        else:
            speeds = self.speeds.speeds(m, fill=limits.v_max)
        return PathPlan.from_arrays(self.delta, speeds)


@dataclass(frozen=True)
class MoceProgress:
    generation: int
    archive_size: int
    best_p_nd: float
    evaluations: int
    elapsed_s: float


@dataclass
class MoceResult:
    archive: ParetoArchive
    generations: int
    evaluations: int
    discarded: int
    elapsed_s: float
    seeded: int = 0


class SolveCache:
    """Inner-solve results keyed by (delta, budget); shared across worker threads."""

    def __init__(self) -> None:
        self._store: dict[tuple[bytes, float], SpeedSolution] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._store)

    def get(self, key: tuple[bytes, float]) -> SpeedSolution | None:
        with self._lock:
            return self._store.get(key)

    def put(self, key: tuple[bytes, float], value: SpeedSolution) -> None:
        with self._lock:
            self._store[key] = value


def initial_state(m: int, z: int, t_max: float, config: MoceConfig) -> MoceState:
    p = np.full((m, z), min(max(config.p_init, config.p_floor), 1.0 - config.p_floor))
    return MoceState(bernoulli_p=p, t_mean=t_max / 2.0, t_std=max(t_max / 4.0, config.t_std_floor), generation=0)


def budget_grid(t_max: float, points: int) -> np.ndarray:
    """Budgets T_max * k / points for k = 1..points."""
    return t_max * np.arange(1, points + 1) / points


def _empty_candidate(m: int, z: int, prior_mass: float) -> CandidateSample:
    return CandidateSample(
        bits=np.zeros((m, z), dtype=bool),
        delta=np.zeros(m, dtype=int),
        budget=0.0,
        evaluation=ObjectivePair(prior_mass, 0.0),
    )


def _repair(
    bits: np.ndarray, lengths: np.ndarray, limits: AuvLimits, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Drops traversals, longest minimum travel time first, until the selection fits T_max."""
    delta = bits.sum(axis=1)
    min_time = lengths / limits.v_max
    while delta.any() and float(np.dot(delta, min_time)) > limits.t_max * (1.0 + GRID_TOLERANCE):
        selected = np.flatnonzero(delta > 0)
        longest = min_time[selected].max()
        ties = selected[min_time[selected] >= longest * (1.0 - 1e-12)]
        j = int(ties[0]) if ties.size == 1 else int(rng.choice(ties))
        k = int(np.flatnonzero(bits[j])[-1])
        bits[j, k] = False
        delta[j] -= 1
    return bits, delta


def _draw_budget(
    state: MoceState, t_lo: float, t_hi: float, rng: np.random.Generator, grid: np.ndarray | None
) -> float | None:
    if t_hi - t_lo <= GRID_TOLERANCE * max(t_hi, 1.0):
        budget = t_lo
    else:
        std = max(state.t_std, 1e-9)
        a, b = (t_lo - state.t_mean) / std, (t_hi - state.t_mean) / std
        budget = float(truncnorm.rvs(a, b, loc=state.t_mean, scale=std, random_state=rng))
        budget = min(max(budget, t_lo), t_hi)
    return _snap_budget(budget, t_lo, t_hi, grid)


def _snap_budget(budget: float, t_lo: float, t_hi: float, grid: np.ndarray | None) -> float | None:
    """Nearest grid budget inside [t_lo, t_hi]; None when the grid has none there."""
    if grid is None:
        return budget
    eps = GRID_TOLERANCE * float(grid[-1])
    feasible = grid[(grid >= t_lo - eps) & (grid <= t_hi + eps)]
    if feasible.size == 0:
        return None
    snapped = float(feasible[int(np.argmin(np.abs(feasible - budget)))])
    return min(max(snapped, t_lo), t_hi)


def sample_candidate(
    state: MoceState,
    scenario: Scenario,
    rng: np.random.Generator,
    *,
    max_resample: int = 100,
    t_grid: np.ndarray | None = None,
) -> CandidateSample:
    """
    Draws one feasible candidate (delta, T).

    Selections whose minimum travel time exceeds T_max are repaired by dropping
    traversals. Empty selections (or, with a budget grid, selections with no grid
    budget in their feasible interval) are redrawn up to `max_resample` times before
    falling back to the empty plan.
    """
    limits = scenario.limits
    lengths = np.asarray(scenario.trackline_lengths)
    m, z = state.bernoulli_p.shape
    for _ in range(max_resample + 1):
        bits = rng.random((m, z)) < state.bernoulli_p
        if not bits.any():
            continue
        bits, delta = _repair(bits, lengths, limits, rng)
        if not delta.any():
            continue
        total = float(np.dot(delta, lengths))
        t_lo = total / limits.v_max
        t_hi = min(total / limits.v_min, limits.t_max)
        budget = _draw_budget(state, t_lo, t_hi, rng, t_grid)
        if budget is None:
            continue
        return CandidateSample(bits=bits, delta=delta, budget=budget)
    return _empty_candidate(m, z, scenario.prior_mass)


def seed_speeds(limits: AuvLimits, count: int) -> list[float]:
    """`count` speeds from v_max down to v_min; a single speed is v_max."""
    return [float(v) for v in np.linspace(limits.v_max, limits.v_min, count)]


def greedy_seeds(
    effort: EffortMatrix,
    priors: np.ndarray,
    limits: AuvLimits,
    speeds: Sequence[float],
    grid: np.ndarray | None = None,
) -> list[CandidateSample]:
    """
    Constant-speed greedy chains for seeding the archive.

    At each speed, traversals are added one at a time, each time the one with the
    largest drop of P_ND per meter (lowest index on ties), until T_max is reached
    or no traversal lowers P_ND. Every prefix of every chain becomes one candidate
    whose budget is its constant-speed duration, snapped to `grid` when given.
    Candidates are returned unevaluated.
    """
    chords = effort.chord_lengths
    lengths = effort.trackline_lengths
    m, z = effort.n_tracklines, limits.z_max
    seeds: list[CandidateSample] = []
    for v in speeds:
        added = chords / (v * limits.tau)
        delta = np.zeros(m, dtype=int)
        exponent = np.zeros(effort.n_sources)
        while True:
            total = float(np.dot(delta, lengths))
            open_ = (delta < z) & ((total + lengths) / v <= limits.t_max * (1.0 + GRID_TOLERANCE))
            if not open_.any():
                break
            p_nd = float(priors @ np.exp(-exponent))
            drop = p_nd - priors @ np.exp(-(exponent[:, None] + added))
            rate = np.where(open_, drop / lengths, -np.inf)
            j = int(np.argmax(rate))
            if drop[j] <= 1e-12 * p_nd:
                break
            delta[j] += 1
            exponent += added[:, j]

            total += float(lengths[j])
            t_lo, t_hi = total / limits.v_max, min(total / limits.v_min, limits.t_max)
            budget = _snap_budget(min(max(total / v, t_lo), t_hi), t_lo, t_hi, grid)
            if budget is None:
                continue
            bits = np.arange(z)[None, :] < delta[:, None]
            seeds.append(CandidateSample(bits=bits, delta=delta.copy(), budget=budget))
    return seeds


def evaluate_candidate(
    c: CandidateSample,
    effort: EffortMatrix,
    priors: np.ndarray,
    limits: AuvLimits,
    solver: SolverConfig = DEFAULT_SOLVER,
    cache: SolveCache | None = None,
) -> CandidateSample:
    """
    Solves the speed problem for (delta, T) and attaches (P*_ND, duration).

    Raises:
        NoConvergence: Propagated from the inner solver.
    """
    if c.is_empty:
        return dataclasses.replace(c, evaluation=ObjectivePair(float(np.sum(priors)), 0.0), speeds=None)

    key = (c.delta.tobytes(), c.budget)
    solution = cache.get(key) if cache is not None else None
    if solution is None:
        problem = SpeedProblem.from_plan(effort, c.delta, c.budget, limits, priors)
        solution = solve_speeds(problem, solver)
        if cache is not None:
            cache.put(key, solution)
    return dataclasses.replace(
        c, evaluation=ObjectivePair(solution.p_nd_star, solution.duration), speeds=solution
    )


def select_elites(
    population: Sequence[CandidateSample], archive: ParetoArchive | None, rho: float
) -> list[CandidateSample]:
    """
    Top ceil(rho * N) candidates by non-domination rank, then crowding distance
    measured against the archive bounds; ties go to the lower index.
    """
    if not population:
        return []
    points = [c.evaluation for c in population]
    if any(p is None for p in points):
        raise ValueError("Elite selection needs evaluated candidates")
    objectives: list[ObjectivePair] = [p for p in points if p is not None]

    lower = ObjectivePair(min(p.p_nd for p in objectives), min(p.duration for p in objectives))
    upper = ObjectivePair(max(p.p_nd for p in objectives), max(p.duration for p in objectives))
    archive_bounds = archive.bounds() if archive is not None else None
    if archive_bounds is not None:
        lower = ObjectivePair(min(lower.p_nd, archive_bounds[0].p_nd), min(lower.duration, archive_bounds[0].duration))
        upper = ObjectivePair(max(upper.p_nd, archive_bounds[1].p_nd), max(upper.duration, archive_bounds[1].duration))

    ranked: list[tuple[int, float, int]] = []
    for rank, front in enumerate(non_dominated_sort(objectives)):
        distances = crowding_distances([objectives[i] for i in front], bounds=(lower, upper))
        ranked.extend((rank, -d, i) for i, d in zip(front, distances, strict=True))
    ranked.sort()

    count = max(1, math.ceil(rho * len(population) - 1e-9))
    return [population[i] for _, _, i in ranked[:count]]


def update_state(
    state: MoceState,
    elites: Sequence[CandidateSample],
    alpha: float,
    p_floor: float = 0.01,
    t_std_floor: float = 60.0,
) -> MoceState:
    """
    Smoothed refit of the sampling distribution to the elites.

    p <- (1 - alpha) p + alpha * mean(elite bits), clamped to [p_floor, 1 - p_floor].
    The budget normal follows the elites' budgets the same way (empty selections
    carry no budget information and are left out); its std never drops below t_std_floor.
    """
    if not elites:
        raise ValueError("update_state needs at least one elite")
    frequency = np.mean(np.stack([e.bits for e in elites]).astype(float), axis=0)
    p = np.clip((1.0 - alpha) * state.bernoulli_p + alpha * frequency, p_floor, 1.0 - p_floor)

    budgets = np.array([e.budget for e in elites if not e.is_empty], dtype=float)
    t_mean, t_std = state.t_mean, state.t_std
    if budgets.size:
        t_mean = (1.0 - alpha) * t_mean + alpha * float(budgets.mean())
        t_std = (1.0 - alpha) * t_std + alpha * float(budgets.std())
    return MoceState(bernoulli_p=p, t_mean=t_mean, t_std=max(t_std, t_std_floor), generation=state.generation + 1)


def _evaluate_index(
    index: int,
    *,
    state: MoceState,
    scenario: Scenario,
    effort: EffortMatrix,
    config: MoceConfig,
    solver: SolverConfig,
    grid: np.ndarray | None,
    cache: SolveCache,
) -> CandidateSample | None:
    rng = np.random.default_rng(np.random.SeedSequence([config.rng_seed, state.generation, index]))
    candidate = sample_candidate(state, scenario, rng, max_resample=config.max_resample, t_grid=grid)
    return _evaluate_or_discard(
        candidate, scenario, effort, solver, cache, {"generation": state.generation, "candidate": index}
    )


def _evaluate_or_discard(
    candidate: CandidateSample,
    scenario: Scenario,
    effort: EffortMatrix,
    solver: SolverConfig,
    cache: SolveCache,
    where: dict[str, int],
) -> CandidateSample | None:
    try:
        return evaluate_candidate(candidate, effort, scenario.priors, scenario.limits, solver, cache)
    except NoConvergence as e:
        logger.warning("Candidate discarded", {**where, "iterations": e.iterations, "error": str(e)})
        return None


def _offer(archive: ParetoArchive, candidates: Sequence[CandidateSample], limits: AuvLimits, m: int) -> None:
    """Inserts evaluated candidates in order; budgets beyond T_max never enter."""
    for candidate in candidates:
        assert candidate.evaluation is not None
        plan = candidate.plan(limits)
        validate_plan(plan, limits, m)
        if candidate.budget > limits.t_max * (1.0 + GRID_TOLERANCE):
            continue
        archive.insert(candidate.evaluation, plan, candidate.budget)


def run(
    scenario: Scenario,
    config: MoceConfig,
    solver: SolverConfig = DEFAULT_SOLVER,
    *,
    executor: CandidateExecutor | None = None,
    progress: Callable[[MoceProgress], None] | None = None,
    effort: EffortMatrix | None = None,
) -> MoceResult:
    """
    Runs the cross-entropy loop until max_generations or until the archive has not
    changed for stagnation_patience generations.

    Raises:
        InfeasibleProblem: If no candidate trackline crosses any spill.
    """
    effort = effort if effort is not None else build_effort_matrix(scenario)
    if not np.any(effort.chord_lengths > 0.0):
        raise InfeasibleProblem("No candidate trackline intersects any spill area")

    limits = scenario.limits
    m = effort.n_tracklines
    executor = executor if executor is not None else SerialExecutor()
    grid = budget_grid(limits.t_max, config.t_grid_points) if config.t_grid_points else None
    cache = SolveCache()

    state = initial_state(m, limits.z_max, limits.t_max, config)
    archive = ParetoArchive(config.archive_capacity)
    archive.insert(ObjectivePair(scenario.prior_mass, 0.0), PathPlan.empty(m, limits.v_max), 0.0)

    start = time.perf_counter()
    seeds = greedy_seeds(effort, scenario.priors, limits, seed_speeds(limits, config.seed_speeds), grid)
    solved = executor.map(
        lambda i: _evaluate_or_discard(seeds[i], scenario, effort, solver, cache, {"seed": i}), range(len(seeds))
    )
    seeded = [c for c in solved if c is not None]
    _offer(archive, seeded, limits, m)
    discarded = len(seeds) - len(seeded)
    logger.info("Archive seeded", {"seeds": len(seeds), "archive": len(archive)})

    evaluations = stagnant = generations = 0
    for generation in range(config.max_generations):
        state = dataclasses.replace(state, generation=generation)
        work = partial(
            _evaluate_index,
            state=state,
            scenario=scenario,
            effort=effort,
            config=config,
            solver=solver,
            grid=grid,
            cache=cache,
        )
        results = executor.map(work, range(config.population))
        population = [c for c in results if c is not None]
        evaluations += len(results)
        discarded += len(results) - len(population)

        before = archive.objectives()
        _offer(archive, population, limits, m)
        changed = archive.objectives() != before

        if population:
            elites = select_elites(population, archive, config.elite_fraction)
            state = update_state(state, elites, config.smoothing, config.p_floor, config.t_std_floor)

        generations = generation + 1
        stagnant = 0 if changed else stagnant + 1
        elapsed = time.perf_counter() - start
        best = archive.objectives()[-1].p_nd
        logger.info(
            "Generation complete",
            {"generation": generation, "archive": len(archive), "best_p_nd": best, "elapsed_s": round(elapsed, 3)},
        )
        if progress is not None:
            progress(MoceProgress(generation, len(archive), best, evaluations, elapsed))
        if stagnant >= config.stagnation_patience:
            logger.info("Archive stagnated", {"generation": generation, "patience": config.stagnation_patience})
            break

    return MoceResult(
        archive=archive,
        generations=generations,
        evaluations=evaluations,
        discarded=discarded,
        elapsed_s=time.perf_counter() - start,
        seeded=len(seeds),
    )
