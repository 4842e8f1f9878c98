"""
Dominance, non-dominated sorting and the bounded Pareto archive.

Both objectives (non-detection probability, duration) are minimized. Objective
values closer than the tie tolerances are treated as equal.
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

from boustro.search.objective import PathPlan

P_ND_TOLERANCE = 1e-12
DURATION_TOLERANCE = 1e-6  # s
DEFAULT_CAPACITY = 64


@dataclass(frozen=True)
class ObjectivePair:
    p_nd: float
    duration: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p_nd) and math.isfinite(self.duration)):
            raise ValueError("Objectives must be finite")
        if self.p_nd < 0.0 or self.duration < 0.0:
            raise ValueError("Objectives must be non-negative")


def _ties(a: ObjectivePair, b: ObjectivePair) -> bool:
    return abs(a.p_nd - b.p_nd) <= P_ND_TOLERANCE and abs(a.duration - b.duration) <= DURATION_TOLERANCE


def dominates(a: ObjectivePair, b: ObjectivePair) -> bool:
    """True iff a is no worse than b in both objectives and strictly better in one."""
    no_worse = a.p_nd <= b.p_nd + P_ND_TOLERANCE and a.duration <= b.duration + DURATION_TOLERANCE
    better = a.p_nd < b.p_nd - P_ND_TOLERANCE or a.duration < b.duration - DURATION_TOLERANCE
    return no_worse and better


@dataclass(frozen=True)
class ArchiveEntry:
    objectives: ObjectivePair
    plan: PathPlan
    budget: float = 0.0


@dataclass(frozen=True)
class InsertOutcome:
    status: Literal["accepted", "dominated", "replaced"]
    replaced: int = 0

    @property
    def changed(self) -> bool:
        return self.status != "dominated"


def non_dominated_sort(points: Sequence[ObjectivePair]) -> list[list[int]]:
    """Indices grouped into successive non-dominated fronts (first front = rank 0)."""
    n = len(points)
    dominated_by_me: list[list[int]] = [[] for _ in range(n)]
    dominator_count = [0] * n
    for p in range(n):
        for q in range(p + 1, n):
            if dominates(points[p], points[q]):
                dominated_by_me[p].append(q)
                dominator_count[q] += 1
            elif dominates(points[q], points[p]):
                dominated_by_me[q].append(p)
                dominator_count[p] += 1

    fronts: list[list[int]] = [[i for i in range(n) if dominator_count[i] == 0]]
    while fronts[-1]:
        nxt: list[int] = []
        for p in fronts[-1]:
            for q in dominated_by_me[p]:
                dominator_count[q] -= 1
                if dominator_count[q] == 0:
                    nxt.append(q)
        fronts.append(sorted(nxt))
    return fronts[:-1]


def crowding_distances(
    points: Sequence[ObjectivePair],
    bounds: tuple[ObjectivePair, ObjectivePair] | None = None,
) -> list[float]:
    """
    Sum over both objectives of the normalized gap between each point's neighbors.

    Without `bounds` the extreme points of each objective get infinite distance. With
    `bounds` (lower, upper) the missing neighbor of an extreme point is the bound, so
    every distance is finite.
    """
    n = len(points)
    distances = [0.0] * n
    if n == 0:
        return distances
    for key in ("p_nd", "duration"):
        values = [getattr(p, key) for p in points]
        order = sorted(range(n), key=lambda i: (values[i], i))
        if bounds is None:
            low, high = values[order[0]], values[order[-1]]
        else:
            low = min(getattr(bounds[0], key), values[order[0]])
            high = max(getattr(bounds[1], key), values[order[-1]])
        span = high - low
        for pos, i in enumerate(order):
            if bounds is None and (pos == 0 or pos == n - 1):
                distances[i] = math.inf
                continue
            prev = values[order[pos - 1]] if pos > 0 else low
            nxt = values[order[pos + 1]] if pos < n - 1 else high
            if span > 0.0:
                distances[i] += (nxt - prev) / span
    return distances


class ParetoArchive:
    """
    Mutually non-dominated (objectives, plan) entries sorted by ascending duration,
    hence strictly decreasing non-detection probability. Owned by a single writer.
    """

    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        if capacity < 2:
            raise ValueError("Archive capacity must be at least 2")
        self.capacity = capacity
        self._entries: list[ArchiveEntry] = []

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    @property
    def entries(self) -> list[ArchiveEntry]:
        return list(self._entries)

    def objectives(self) -> list[ObjectivePair]:
        return [e.objectives for e in self._entries]

    def bounds(self) -> tuple[ObjectivePair, ObjectivePair] | None:
        if not self._entries:
            return None
        first, last = self._entries[0].objectives, self._entries[-1].objectives
        return ObjectivePair(last.p_nd, first.duration), ObjectivePair(first.p_nd, last.duration)

    def insert(self, objectives: ObjectivePair, plan: PathPlan, budget: float = 0.0) -> InsertOutcome:
        """
        Adds a candidate unless an entry dominates or ties it; removes entries it dominates.

        Ties on both objectives keep the incumbent.
        """
        for entry in self._entries:
            if dominates(entry.objectives, objectives) or _ties(entry.objectives, objectives):
                return InsertOutcome("dominated")

        survivors = [e for e in self._entries if not dominates(objectives, e.objectives)]
        replaced = len(self._entries) - len(survivors)
        keys = [e.objectives.duration for e in survivors]
        survivors.insert(bisect.bisect_right(keys, objectives.duration), ArchiveEntry(objectives, plan, budget))
        self._entries = survivors
        if len(self._entries) > self.capacity:
            crowding_prune(self)
        return InsertOutcome("replaced", replaced) if replaced else InsertOutcome("accepted")


def crowding_prune(archive: ParetoArchive) -> ParetoArchive:
    """
    Shrinks the archive to its capacity one entry at a time, each time dropping the
    interior entry with the smallest crowding distance (lowest index on ties).
    Distances are recomputed after every drop. The shortest and the most effective
    entries stay.
    """
    entries = archive.entries
    while len(entries) > archive.capacity:
        distances = crowding_distances([e.objectives for e in entries])
        del entries[min(range(1, len(entries) - 1), key=lambda i: (distances[i], i))]
    archive._entries = entries
    return archive


def find_dominated_pairs(entries: Sequence[ArchiveEntry]) -> list[tuple[int, int]]:
    """Every (i, j) where entry i dominates entry j; empty for a consistent archive."""
    return [
        (i, j)
        for i, a in enumerate(entries)
        for j, b in enumerate(entries)
        if i != j and dominates(a.objectives, b.objectives)
    ]


def interpolate_p_nd(points: Sequence[ObjectivePair], duration: float) -> float:
    """
    Front value at `duration`: linear between the two neighboring points, and the
    last point's value beyond the longest one. Points must be sorted by duration.
    Returns +inf before the first point.
    """
    if not points or duration < points[0].duration - DURATION_TOLERANCE:
        return math.inf
    durations = [p.duration for p in points]
    pos = bisect.bisect_right(durations, duration)
    if pos == 0:
        return points[0].p_nd
    if pos >= len(points):
        return points[-1].p_nd
    left, right = points[pos - 1], points[pos]
    span = right.duration - left.duration
    if span <= 0.0:
        return min(left.p_nd, right.p_nd)
    w = (duration - left.duration) / span
    return left.p_nd + w * (right.p_nd - left.p_nd)
