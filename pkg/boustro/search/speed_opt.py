"""
Inner problem: optimal per-trackline speeds for a fixed selection and duration budget.

In inverse speeds mu_j the problem

    min_mu  sum_i pi_i * exp(-(1/tau) * sum_j a_ij * mu_j)
    s.t.    lo_j <= mu_j <= hi_j,   sum_j c_j * mu_j = T

is convex (a_ij = delta_j * l_ij, c_j = delta_j * l_j). It is solved with a
logarithmic-barrier Newton method; the equality constraint is kept through the
KKT system of each Newton step.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from boustro.core.config import SolverConfig
from boustro.core.errors import EmptySelection, InfeasibleBudget, NoConvergence
from boustro.search.objective import EffortMatrix
from boustro.search.scenario import AuvLimits

DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True)
class SpeedProblem:
    """
    Reduced speed problem over the active tracklines.

    `chords` holds delta-weighted chord lengths of the active columns for the sources
    they touch; `constant` is the prior mass of sources no active trackline touches.
    """

    active: np.ndarray
    counts: np.ndarray
    chords: np.ndarray
    lengths: np.ndarray
    priors: np.ndarray
    constant: float
    tau: float
    budget: float
    mu_lo: np.ndarray
    mu_hi: np.ndarray

    @classmethod
    def from_plan(
        cls,
        effort: EffortMatrix,
        counts: Sequence[int] | np.ndarray,
        budget: float,
        limits: AuvLimits,
        priors: np.ndarray,
    ) -> SpeedProblem:
        counts = np.asarray(counts, dtype=int)
        active = np.flatnonzero(counts > 0)
        if active.size == 0:
            raise EmptySelection("No trackline is selected")
        mult = counts[active].astype(float)
        chords = effort.chord_lengths[:, active] * mult
        touched = np.any(chords > 0.0, axis=1)
        priors = np.asarray(priors, dtype=float)
        return cls(
            active=active,
            counts=counts[active],
            chords=chords[touched],
            lengths=effort.trackline_lengths[active] * mult,
            priors=priors[touched],
            constant=float(priors[~touched].sum()),
            tau=limits.tau,
            budget=float(budget),
            mu_lo=np.full(active.size, limits.mu_min),
            mu_hi=np.full(active.size, limits.mu_max),
        )

    @property
    def t_lo(self) -> float:
        return float(np.dot(self.lengths, self.mu_lo))

    @property
    def t_hi(self) -> float:
        return float(np.dot(self.lengths, self.mu_hi))

    def objective(self, mu: np.ndarray) -> float:
        return self.constant + float(np.dot(self.priors, np.exp(-(self.chords @ mu) / self.tau)))

    def gradient(self, mu: np.ndarray) -> np.ndarray:
        weights = self.priors * np.exp(-(self.chords @ mu) / self.tau)
        return -(weights @ self.chords) / self.tau

    def hessian(self, mu: np.ndarray) -> np.ndarray:
        weights = self.priors * np.exp(-(self.chords @ mu) / self.tau)
        return (self.chords.T * weights) @ self.chords / (self.tau * self.tau)


@dataclass(frozen=True)
class SpeedSolution:
    active: np.ndarray
    mu: np.ndarray
    p_nd_star: float
    duration: float
    iterations: int
    converged: bool

    def speeds(self, m: int, fill: float) -> np.ndarray:
        """Length-m speed vector (m/s); unselected tracklines get `fill`."""
        out = np.full(m, float(fill))
        out[self.active] = 1.0 / self.mu
        return out


def feasible_budget_interval(
    active: Sequence[int] | np.ndarray, lengths: np.ndarray, v_min: float, v_max: float, counts: np.ndarray | None = None
) -> tuple[float, float]:
    """
    Shortest and longest duration of a selection: [sum delta_j l_j / v_max, sum delta_j l_j / v_min].

    Raises:
        EmptySelection: If no trackline is active.
    """
    idx = np.asarray(active, dtype=int)
    if idx.size == 0:
        raise EmptySelection("No trackline is selected")
    mult = np.ones(idx.size) if counts is None else np.asarray(counts, dtype=float)[idx]
    total = float(np.dot(np.asarray(lengths, dtype=float)[idx], mult))
    return total / v_max, total / v_min


def _barrier_terms(mu: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    s_lo = mu - lo
    s_hi = hi - mu
    value = -float(np.sum(np.log(s_lo)) + np.sum(np.log(s_hi)))
    grad = -1.0 / s_lo + 1.0 / s_hi
    curv = 1.0 / (s_lo * s_lo) + 1.0 / (s_hi * s_hi)
    return value, grad, curv


def _max_step(mu: np.ndarray, step: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> float:
    """Largest t <= 1 keeping mu + t*step strictly inside the box."""
    t = 1.0
    down = step < 0.0
    up = step > 0.0
    if down.any():
        t = min(t, 0.99 * float(np.min((lo[down] - mu[down]) / step[down])))
    if up.any():
        t = min(t, 0.99 * float(np.min((hi[up] - mu[up]) / step[up])))
    return t


def _solution(problem: SpeedProblem, mu: np.ndarray, iterations: int, converged: bool) -> SpeedSolution:
    return SpeedSolution(
        active=problem.active,
        mu=mu,
        p_nd_star=problem.objective(mu),
        duration=float(np.dot(problem.lengths, mu)),
        iterations=iterations,
        converged=converged,
    )


def solve_speeds(problem: SpeedProblem, config: SolverConfig = DEFAULT_SOLVER) -> SpeedSolution:
    """
    Minimizes non-detection probability over inverse speeds for a fixed budget.

    Raises:
        InfeasibleBudget: If the budget lies outside [T_lo, T_hi].
        NoConvergence: If the Newton step limit is reached; carries the best iterate.
    """
    lo, hi, c, budget = problem.mu_lo, problem.mu_hi, problem.lengths, problem.budget
    t_lo, t_hi = problem.t_lo, problem.t_hi
    slack = config.boundary_rtol * max(t_hi, 1.0)
    if budget < t_lo - slack or budget > t_hi + slack:
        raise InfeasibleBudget(budget, t_lo, t_hi)

    # No interior point at a boundary budget: the vertex is forced.
    if budget <= t_lo + slack:
        return _solution(problem, lo.copy(), 0, True)
    if budget >= t_hi - slack:
        return _solution(problem, hi.copy(), 0, True)

    theta = (budget - t_lo) / (t_hi - t_lo)
    mu = lo + theta * (hi - lo)
    k = mu.size
    weight = config.barrier_init
    steps = 0
    # equality row scaled to unit magnitude
    scale = float(np.max(c))
    c_row = c / scale
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, k] = c_row
    kkt[k, :k] = c_row

    while True:
        # Newton centering on f(mu) + weight * barrier(mu)
        while True:
            _, b_grad, b_curv = _barrier_terms(mu, lo, hi)
            grad = problem.gradient(mu) + weight * b_grad
            kkt[:k, :k] = problem.hessian(mu)
            kkt[np.diag_indices(k)] += weight * b_curv
            rhs = np.concatenate([-grad, [(budget - float(np.dot(c, mu))) / scale]])
            try:
                sol = scipy.linalg.solve(kkt, rhs, assume_a="sym")
            except (scipy.linalg.LinAlgError, ValueError):
                sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
            step = sol[:k]
            decrement_sq = -float(np.dot(grad, step))
            if decrement_sq / 2.0 <= config.newton_tol:
                break
            if steps >= config.max_newton_steps:
                raise NoConvergence(
                    f"Speed solver did not converge in {config.max_newton_steps} Newton steps",
                    best_mu=mu,
                    iterations=steps,
                )

            t = _max_step(mu, step, lo, hi)
            b_val, _, _ = _barrier_terms(mu, lo, hi)
            current = problem.objective(mu) + weight * b_val
            slope = float(np.dot(grad, step))
            while t > 1e-14:
                trial = mu + t * step
                t_val, _, _ = _barrier_terms(trial, lo, hi)
                if problem.objective(trial) + weight * t_val <= current + config.armijo * t * slope:
                    break
                t *= config.backtrack
            mu = mu + t * step
            steps += 1

        if 2 * k * weight <= config.gap_tol:
            break
        weight *= config.barrier_decrease

    # Newton steps hold the equality to rounding; absorb what is left on the free coordinates.
    mu = np.clip(mu, lo, hi)
    residual = budget - float(np.dot(c, mu))
    free = (mu > lo) & (mu < hi)
    if residual and free.any():
        mu[free] += residual * c[free] / float(np.dot(c[free], c[free]))
        mu = np.clip(mu, lo, hi)
    return _solution(problem, mu, steps, True)
