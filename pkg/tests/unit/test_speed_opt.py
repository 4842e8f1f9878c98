import numpy as np
import pytest

from boustro.core.config import KNOT, SolverConfig
from boustro.core.errors import EmptySelection, InfeasibleBudget, NoConvergence
from boustro.search.objective import EffortMatrix, PathPlan, build_effort_matrix, evaluate
from boustro.search.scenario import AuvLimits
from boustro.search.speed_opt import SpeedProblem, feasible_budget_interval, solve_speeds

LIMITS = AuvLimits(v_min=1.0, v_max=2.0, t_max=10_000.0, z_max=2, tau=200.0)


def two_line_problem(chords, priors, budget):
    effort = EffortMatrix(chord_lengths=np.asarray(chords, dtype=float), trackline_lengths=np.array([1000.0, 1000.0]))
    return SpeedProblem.from_plan(effort, [1, 1], budget, LIMITS, np.asarray(priors, dtype=float))


def grid_oracle(problem, step=1e-3):
    """Best objective over mu_1 on a grid, mu_2 fixed by the budget."""
    c1, c2 = problem.lengths
    best = np.inf
    for mu1 in np.arange(problem.mu_lo[0], problem.mu_hi[0] + step / 2, step):
        mu2 = (problem.budget - c1 * mu1) / c2
        if problem.mu_lo[1] - 1e-12 <= mu2 <= problem.mu_hi[1] + 1e-12:
            best = min(best, problem.objective(np.array([mu1, mu2])))
    return best


def test_single_line_speed_is_forced_by_budget(one_line_scenario):
    em = build_effort_matrix(one_line_scenario)
    problem = SpeedProblem.from_plan(em, [1], 700.0, one_line_scenario.limits, one_line_scenario.priors)
    solution = solve_speeds(problem)
    assert solution.mu[0] == pytest.approx(0.7, rel=1e-9)
    assert solution.duration == pytest.approx(700.0, rel=1e-9)
    assert solution.p_nd_star == pytest.approx(0.5 * np.exp(-100.0 * 0.7 / 200.0), rel=1e-9)


def test_boundary_budgets_return_vertices(one_line_scenario):
    em = build_effort_matrix(one_line_scenario)
    lo = SpeedProblem.from_plan(em, [1], 500.0, one_line_scenario.limits, one_line_scenario.priors)
    hi = SpeedProblem.from_plan(em, [1], 1000.0, one_line_scenario.limits, one_line_scenario.priors)
    fast, slow = solve_speeds(lo), solve_speeds(hi)
    assert fast.iterations == 0 and fast.converged
    assert fast.speeds(1, fill=2.0)[0] == pytest.approx(2.0)
    assert slow.speeds(1, fill=2.0)[0] == pytest.approx(1.0)


def test_infeasible_budget(one_line_scenario):
    em = build_effort_matrix(one_line_scenario)
    problem = SpeedProblem.from_plan(em, [1], 400.0, one_line_scenario.limits, one_line_scenario.priors)
    with pytest.raises(InfeasibleBudget) as exc:
        solve_speeds(problem)
    assert (exc.value.t_lo, exc.value.t_hi) == pytest.approx((500.0, 1000.0))
    assert exc.value.exit_code == 3


def test_empty_selection(one_line_scenario):
    em = build_effort_matrix(one_line_scenario)
    with pytest.raises(EmptySelection):
        SpeedProblem.from_plan(em, [0], 500.0, one_line_scenario.limits, one_line_scenario.priors)
    with pytest.raises(EmptySelection):
        feasible_budget_interval([], np.array([1000.0]), 1.0, 2.0)


def test_feasible_interval_counts_traversals():
    lengths = np.array([1000.0, 500.0, 200.0])
    assert feasible_budget_interval([0, 1], lengths, 1.0, 2.0) == pytest.approx((750.0, 1500.0))
    counts = np.array([2, 1, 0])
    assert feasible_budget_interval([0, 1], lengths, 1.0, 2.0, counts) == pytest.approx((1250.0, 2500.0))


def test_feasible_interval_of_ten_km_line_at_two_to_five_knots():
    interval = feasible_budget_interval([0], np.array([10_000.0]), 2.0 * KNOT, 5.0 * KNOT)
    assert interval == pytest.approx((10_000.0 / (5.0 * KNOT), 10_000.0 / (2.0 * KNOT)))
    assert interval == pytest.approx((3887.8, 9719.4), abs=0.2)


def test_objective_is_convex_in_inverse_speeds():
    rng = np.random.default_rng(31)
    effort = EffortMatrix(chord_lengths=rng.uniform(0.0, 800.0, (5, 4)), trackline_lengths=np.full(4, 1000.0))
    problem = SpeedProblem.from_plan(effort, [1, 1, 1, 1], 3000.0, LIMITS, rng.uniform(0.05, 0.8, 5))
    for _ in range(200):
        mu_a = rng.uniform(problem.mu_lo, problem.mu_hi)
        mu_b = rng.uniform(problem.mu_lo, problem.mu_hi)
        theta = float(rng.uniform())
        mixed = problem.objective(theta * mu_a + (1.0 - theta) * mu_b)
        assert mixed <= theta * problem.objective(mu_a) + (1.0 - theta) * problem.objective(mu_b) + 1e-12


def test_solver_beats_grid_oracle():
    rng = np.random.default_rng(42)
    for _ in range(20):
        chords = rng.uniform(0.0, 400.0, size=(3, 2))
        priors = rng.uniform(0.05, 0.8, size=3)
        budget = float(rng.uniform(1000.0, 2000.0))
        problem = two_line_problem(chords, priors, budget)
        solution = solve_speeds(problem)
        assert solution.p_nd_star <= grid_oracle(problem) + 1e-5
        assert solution.duration == pytest.approx(budget, rel=1e-9)
        assert np.all(solution.mu >= problem.mu_lo - 1e-12)
        assert np.all(solution.mu <= problem.mu_hi + 1e-12)


def test_symmetric_lines_get_equal_speeds():
    problem = two_line_problem([[150.0, 150.0]], [0.5], 1500.0)
    solution = solve_speeds(problem)
    assert solution.mu[0] == pytest.approx(solution.mu[1], rel=1e-6)


def test_slow_down_where_the_leak_is():
    problem = two_line_problem([[300.0, 0.0], [0.0, 50.0]], [0.8, 0.05], 1500.0)
    solution = solve_speeds(problem)
    speeds = solution.speeds(2, fill=2.0)
    assert speeds[0] < speeds[1]


def test_larger_budget_never_hurts():
    values = [solve_speeds(two_line_problem([[200.0, 80.0]], [0.6], t)).p_nd_star for t in (1100.0, 1400.0, 1700.0)]
    assert values[0] > values[1] > values[2]


def test_untouched_sources_add_their_prior(two_source_scenario):
    em = build_effort_matrix(two_source_scenario)
    problem = SpeedProblem.from_plan(em, [1, 1, 0, 0], 1500.0, two_source_scenario.limits, two_source_scenario.priors)
    assert problem.constant == pytest.approx(0.2)
    solution = solve_speeds(problem)
    plan = PathPlan.from_arrays(np.array([1, 1, 0, 0]), solution.speeds(4, fill=2.0))
    check = evaluate(plan, em, two_source_scenario.priors, 200.0)
    assert check.p_nd == pytest.approx(solution.p_nd_star, rel=1e-12)
    assert check.duration == pytest.approx(solution.duration, rel=1e-12)


def test_repeated_traversals_fold_into_lengths():
    effort = EffortMatrix(chord_lengths=np.array([[100.0, 0.0]]), trackline_lengths=np.array([1000.0, 1000.0]))
    problem = SpeedProblem.from_plan(effort, [2, 0], 1500.0, LIMITS, np.array([0.5]))
    assert problem.t_lo == pytest.approx(1000.0)
    assert problem.t_hi == pytest.approx(2000.0)
    assert solve_speeds(problem).mu[0] == pytest.approx(0.75, rel=1e-9)


def test_step_limit_raises_no_convergence():
    problem = two_line_problem([[300.0, 50.0], [20.0, 250.0]], [0.6, 0.3], 1300.0)
    with pytest.raises(NoConvergence) as exc:
        solve_speeds(problem, SolverConfig(max_newton_steps=1))
    assert exc.value.best_mu is not None
    assert exc.value.exit_code == 4
