"""
Planar geometry for the search area.

Spill areas are convex polygons, candidate tracklines are horizontal segments,
and the effort terms of the objective are chord lengths of tracklines inside
spills. All values are in meters and immutable after construction.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from boustro.core.errors import DegenerateGeometry, ValidationError

DUPLICATE_TOLERANCE = 1e-9
DEFAULT_ELLIPSE_SAMPLES = 32
DEFAULT_DEDUP_TOLERANCE = 1.0


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError("finite_coordinates", f"Point ({self.x}, {self.y}) is not finite")


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned rectangle of the search area."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.x_min, self.y_min, self.x_max, self.y_max)):
            raise ValidationError("area", "Area bounds must be finite")
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise ValidationError("area", "Area must have positive width and height")

    @classmethod
    def square(cls, width: float, height: float | None = None) -> Bounds:
        return cls(0.0, 0.0, float(width), float(width if height is None else height))

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def contains_point(self, point: Point2, tol: float = DUPLICATE_TOLERANCE) -> bool:
        return (
            self.x_min - tol <= point.x <= self.x_max + tol
            and self.y_min - tol <= point.y <= self.y_max + tol
        )

    def contains_polygon(self, polygon: ConvexPolygon, tol: float = DUPLICATE_TOLERANCE) -> bool:
        return all(self.contains_point(v, tol) for v in polygon.vertices)


def _cross(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - (a[..., 1] - o[..., 1]) * (b[..., 0] - o[..., 0])


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counter-clockwise vertices."""

    vertices: tuple[Point2, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 3:
            raise ValidationError("polygon_vertices", "A polygon needs at least 3 vertices")
        pts = self.as_array()
        nxt = np.roll(pts, -1, axis=0)
        if np.any(np.hypot(*(nxt - pts).T) <= DUPLICATE_TOLERANCE):
            raise ValidationError("polygon_duplicates", "Polygon has duplicate vertices")
        turns = _cross(pts, nxt, np.roll(pts, -2, axis=0))
        if np.any(turns <= 0.0):
            raise ValidationError("polygon_convex", "Polygon must be strictly convex in counter-clockwise order")

    @classmethod
    def from_vertices(cls, vertices: Iterable[Point2 | tuple[float, float]]) -> ConvexPolygon:
        return cls(tuple(v if isinstance(v, Point2) else Point2(float(v[0]), float(v[1])) for v in vertices))

    @cached_property
    def _array(self) -> np.ndarray:
        arr = np.array([(v.x, v.y) for v in self.vertices], dtype=float)
        arr.setflags(write=False)
        return arr

    def as_array(self) -> np.ndarray:
        return self._array

    @property
    def min_x(self) -> float:
        return float(self._array[:, 0].min())

    @property
    def max_x(self) -> float:
        return float(self._array[:, 0].max())

    @property
    def min_y(self) -> float:
        return float(self._array[:, 1].min())

    @property
    def max_y(self) -> float:
        return float(self._array[:, 1].max())

    @property
    def area(self) -> float:
        x, y = self._array[:, 0], self._array[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    def contains(self, point: Point2, tol: float = DUPLICATE_TOLERANCE) -> bool:
        pts = self._array
        p = np.array([point.x, point.y])
        return bool(np.all(_cross(pts, np.roll(pts, -1, axis=0), np.broadcast_to(p, pts.shape)) >= -tol))

    def chord_interval(self, line_y: float) -> tuple[float, float] | None:
        """
        Returns the x-interval where the horizontal line y = line_y meets the closed polygon.

        Each CCW edge keeps the half-plane on its left; along the line that half-plane
        is a half-line in x, and the chord is the intersection of all of them.
        """
        if line_y < self.min_y or line_y > self.max_y:
            return None
        pts = self._array
        nxt = np.roll(pts, -1, axis=0)
        ex = nxt[:, 0] - pts[:, 0]
        ey = nxt[:, 1] - pts[:, 1]
        # left-of-edge test as slope * x + offset >= 0
        slope = -ey
        offset = ex * (line_y - pts[:, 1]) + ey * pts[:, 0]
        flat = slope == 0.0
        if np.any(offset[flat] < 0.0):
            return None
        rising = slope > 0.0
        falling = slope < 0.0
        lo = float(np.max(-offset[rising] / slope[rising])) if rising.any() else -math.inf
        hi = float(np.min(-offset[falling] / slope[falling])) if falling.any() else math.inf
        if hi < lo:
            return None
        return lo, hi


@dataclass(frozen=True)
class Trackline:
    """Horizontal survey line at ordinate y spanning [x_start, x_end]."""

    y: float
    x_start: float
    x_end: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.y, self.x_start, self.x_end)):
            raise ValidationError("trackline_finite", "Trackline coordinates must be finite")
        if not self.x_start < self.x_end:
            raise ValidationError("trackline_extent", f"Trackline at y={self.y} needs x_start < x_end")

    @property
    def length(self) -> float:
        return self.x_end - self.x_start


def convex_hull(points: Sequence[Point2]) -> ConvexPolygon:
    """Minimal convex polygon containing all points, vertices counter-clockwise."""
    if len(points) < 3:
        raise DegenerateGeometry("Convex hull needs at least 3 points")
    arr = np.array([(p.x, p.y) for p in points], dtype=float)
    try:
        hull = ConvexHull(arr)
    except QhullError as e:
        raise DegenerateGeometry(f"Points do not span a 2-D hull: {e}") from e

    # Qhull returns 2-D hull vertices in counter-clockwise order.
    ring = arr[hull.vertices]
    while len(ring) >= 3:
        turns = _cross(np.roll(ring, 1, axis=0), ring, np.roll(ring, -1, axis=0))
        keep = turns > 0.0
        if keep.all():
            break
        ring = ring[keep]
    if len(ring) < 3:
        raise DegenerateGeometry("Points are collinear")
    return ConvexPolygon.from_vertices(map(tuple, ring))


def ellipse_polygon(
    center: Point2,
    semi_major: float,
    semi_minor: float,
    rotation: float,
    samples: int = DEFAULT_ELLIPSE_SAMPLES,
) -> ConvexPolygon:
    """Convex hull of `samples` evenly spaced points on a rotated ellipse."""
    t = 2.0 * np.pi * np.arange(samples) / samples
    ct, st = np.cos(t), np.sin(t)
    cr, sr = math.cos(rotation), math.sin(rotation)
    x = center.x + semi_major * ct * cr - semi_minor * st * sr
    y = center.y + semi_major * ct * sr + semi_minor * st * cr
    return convex_hull([Point2(float(a), float(b)) for a, b in zip(x, y, strict=True)])


def clip_segment_length(poly: ConvexPolygon, line_y: float, x_start: float, x_end: float) -> float:
    """Length of the horizontal segment [x_start, x_end] at line_y inside the polygon (0 if disjoint)."""
    interval = poly.chord_interval(line_y)
    if interval is None:
        return 0.0
    lo, hi = interval
    return max(0.0, min(hi, x_end) - max(lo, x_start))


def generate_tracklines(
    sources: Sequence[ConvexPolygon],
    area: Bounds,
    inset: float = 0.0,
    tolerance: float = DEFAULT_DEDUP_TOLERANCE,
) -> list[Trackline]:
    """
    One trackline on the lowest and one on the highest ordinate of every spill polygon.

    Lines span the full area width. Ordinates closer than `tolerance` collapse onto the
    lowest one. A positive `inset` moves each line inside its own polygon by at most
    half the polygon height.
    """
    if not sources:
        raise ValidationError("sources", "At least one spill polygon is required to place tracklines")

    ordinates: list[float] = []
    for poly in sources:
        shift = min(inset, (poly.max_y - poly.min_y) / 2.0)
        ordinates.extend((poly.min_y + shift, poly.max_y - shift))

    kept: list[float] = []
    for y in sorted(ordinates):
        if not kept or y - kept[-1] >= tolerance:
            kept.append(y)

    return [Trackline(y=y, x_start=area.x_min, x_end=area.x_max) for y in kept]
