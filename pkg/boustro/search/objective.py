"""
Search objectives: global non-detection probability, path duration, posterior
leak probabilities, and a Monte-Carlo oracle for the detection law.

With inverse speeds mu_j = 1/v_j and traversal counts delta_j, the effort credited
to source i is E_i = (1/tau) * sum_j l_ij * mu_j * delta_j and

    P_ND = sum_i pi_i * exp(-E_i)        T = sum_j l_j * mu_j * delta_j

Vertical connecting legs are excluded from both.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from boustro.core.errors import PlanMismatch, ValidationError
from boustro.search.geometry import ConvexPolygon, Trackline, clip_segment_length
from boustro.search.scenario import AuvLimits, Scenario

SPEED_TOLERANCE = 1e-9
MONTE_CARLO_CHUNK = 100_000


@dataclass(frozen=True)
class PathPlan:
    """Traversal counts delta_j and speeds v_j (m/s) per candidate trackline."""

    counts: tuple[int, ...]
    speeds: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.counts) != len(self.speeds):
            raise ValidationError("plan_shape", "counts and speeds must have the same length")

    @classmethod
    def empty(cls, m: int, speed: float) -> PathPlan:
        return cls(counts=(0,) * m, speeds=(float(speed),) * m)

    @classmethod
    def from_arrays(cls, counts: np.ndarray, speeds: np.ndarray) -> PathPlan:
        return cls(counts=tuple(int(c) for c in counts), speeds=tuple(float(v) for v in speeds))

    @property
    def size(self) -> int:
        return len(self.counts)

    @property
    def counts_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=int)

    @property
    def speeds_array(self) -> np.ndarray:
        return np.asarray(self.speeds, dtype=float)

    def effective_mu(self) -> np.ndarray:
        """delta_j / v_j, zero on unselected tracklines."""
        counts = self.counts_array
        out = np.zeros(len(counts))
        sel = counts > 0
        out[sel] = counts[sel] / self.speeds_array[sel]
        return out


@dataclass(frozen=True)
class EffortMatrix:
    """Chord lengths l_ij (n sources x m tracklines) and trackline lengths l_j, in meters."""

    chord_lengths: np.ndarray
    trackline_lengths: np.ndarray

    def __post_init__(self) -> None:
        if self.chord_lengths.ndim != 2 or self.chord_lengths.shape[1] != self.trackline_lengths.shape[0]:
            raise ValidationError("effort_shape", "Chord matrix columns must match trackline count")
        if np.any(self.chord_lengths < 0.0) or np.any(self.chord_lengths > self.trackline_lengths + 1e-9):
            raise ValidationError("effort_bounds", "Chord lengths must lie in [0, l_j]")
        self.chord_lengths.setflags(write=False)
        self.trackline_lengths.setflags(write=False)

    @property
    def n_sources(self) -> int:
        return int(self.chord_lengths.shape[0])

    @property
    def n_tracklines(self) -> int:
        return int(self.chord_lengths.shape[1])


@dataclass(frozen=True)
class PlanEvaluation:
    p_nd: float
    duration: float
    per_source_exponent: np.ndarray


def effort_matrix_for(spills: Sequence[ConvexPolygon], tracklines: Sequence[Trackline]) -> EffortMatrix:
    chords = np.array(
        [[clip_segment_length(poly, t.y, t.x_start, t.x_end) for t in tracklines] for poly in spills],
        dtype=float,
    ).reshape(len(spills), len(tracklines))
    return EffortMatrix(chord_lengths=chords, trackline_lengths=np.array([t.length for t in tracklines], dtype=float))


def build_effort_matrix(scenario: Scenario) -> EffortMatrix:
    """Chord of every candidate trackline inside every spill; built once per run and shared read-only."""
    return effort_matrix_for([s.spill for s in scenario.sources], scenario.tracklines)


def exponents(mu_effective: np.ndarray, chords: np.ndarray, tau: float) -> np.ndarray:
    return chords @ mu_effective / tau


def evaluate(plan: PathPlan, em: EffortMatrix, priors: np.ndarray, tau: float) -> PlanEvaluation:
    """Non-detection probability and duration of a plan."""
    if plan.size != em.n_tracklines:
        raise PlanMismatch(f"Plan has {plan.size} tracklines, effort matrix has {em.n_tracklines}")
    mu = plan.effective_mu()
    exponent = exponents(mu, em.chord_lengths, tau)
    p_nd = float(np.dot(priors, np.exp(-exponent)))
    duration = float(np.dot(em.trackline_lengths, mu))
    return PlanEvaluation(p_nd=p_nd, duration=duration, per_source_exponent=exponent)


def nondetection_gradient(mu_effective: np.ndarray, chords: np.ndarray, priors: np.ndarray, tau: float) -> np.ndarray:
    """Gradient of P_ND with respect to effective inverse speeds (delta folded into the chords)."""
    weights = priors * np.exp(-exponents(mu_effective, chords, tau))
    return -(weights @ chords) / tau


def posterior_update(priors: np.ndarray, evaluation: PlanEvaluation) -> np.ndarray:
    """pi'_i = pi_i * exp(-E_i), left unnormalized."""
    return np.asarray(priors, dtype=float) * np.exp(-evaluation.per_source_exponent)


def detection_probability(dwell: np.ndarray | float, tau: float) -> np.ndarray | float:
    """Probability of detecting a present pollutant after `dwell` seconds inside its spill."""
    return 1.0 - np.exp(-np.asarray(dwell, dtype=float) / tau)


def validate_plan(plan: PathPlan, limits: AuvLimits, m: int) -> None:
    """
    Checks plan invariants against the scenario limits.

    Raises:
        PlanMismatch: If the plan length differs from the trackline count.
        ValidationError: If a count or an active speed is out of range.
    """
    if plan.size != m:
        raise PlanMismatch(f"Plan has {plan.size} tracklines, scenario has {m}")
    counts = plan.counts_array
    if np.any(counts < 0) or np.any(counts > limits.z_max):
        raise ValidationError("plan_counts", f"Traversal counts must lie in [0, {limits.z_max}]")
    active = plan.speeds_array[counts > 0]
    lo = limits.v_min * (1.0 - SPEED_TOLERANCE)
    hi = limits.v_max * (1.0 + SPEED_TOLERANCE)
    if np.any(active < lo) or np.any(active > hi):
        raise ValidationError("plan_speeds", f"Speeds must lie in [{limits.v_min}, {limits.v_max}] m/s")


def vertical_leg_length(plan: PathPlan, tracklines: Sequence[Trackline]) -> float:
    """Total connector length when the selected lines are swept in order of y."""
    ys = [t.y for t, c in zip(tracklines, plan.counts, strict=True) if c > 0]
    return max(ys) - min(ys) if ys else 0.0


def wall_clock_duration(plan: PathPlan, em: EffortMatrix, tracklines: Sequence[Trackline], v_max: float) -> float:
    """Optimized duration plus vertical connectors traveled at v_max. Informational only."""
    return float(np.dot(em.trackline_lengths, plan.effective_mu())) + vertical_leg_length(plan, tracklines) / v_max


def monte_carlo_nondetection(
    plan: PathPlan, scenario: Scenario, samples: int, seed: int, em: EffortMatrix | None = None
) -> tuple[float, float]:
    """
    Sampling estimate of P_ND and its standard error.

    Each sample draws whether each source leaks (probability pi_i) and, for a present
    leak, whether the sensor detects it after the plan's dwell time in its spill.
    The per-sample statistic is the number of present-but-undetected leaks, whose
    expectation is exactly sum_i pi_i * exp(-E_i).
    """
    if samples < 1:
        raise ValidationError("samples", "Monte-Carlo needs at least one sample")
    em = em if em is not None else build_effort_matrix(scenario)
    if plan.size != em.n_tracklines:
        raise PlanMismatch(f"Plan has {plan.size} tracklines, scenario has {em.n_tracklines}")

    dwell = em.chord_lengths @ plan.effective_mu()
    p_detect = np.asarray(detection_probability(dwell, scenario.limits.tau))
    priors = scenario.priors
    rng = np.random.default_rng(seed)

    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        size = min(MONTE_CARLO_CHUNK, samples - done)
        present = rng.random((size, len(priors))) < priors
        detected = rng.random((size, len(priors))) < p_detect
        missed = np.count_nonzero(present & ~detected, axis=1).astype(float)
        total += float(missed.sum())
        total_sq += float(np.dot(missed, missed))
        done += size

    estimate = total / samples
    if samples == 1:
        return estimate, 0.0
    variance = max(0.0, (total_sq - samples * estimate * estimate) / (samples - 1))
    return estimate, float(np.sqrt(variance / samples))
