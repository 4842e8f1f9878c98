import math

import numpy as np
import pytest

from boustro.core.errors import DegenerateGeometry, ValidationError
from boustro.search.geometry import (
    Bounds,
    ConvexPolygon,
    Point2,
    Trackline,
    clip_segment_length,
    convex_hull,
    ellipse_polygon,
    generate_tracklines,
)


def test_square_area_and_extents(square_factory):
    poly = square_factory(0.0, 0.0, 10.0)
    assert poly.area == pytest.approx(100.0)
    assert (poly.min_x, poly.max_x, poly.min_y, poly.max_y) == (0.0, 10.0, 0.0, 10.0)


def test_polygon_rejects_clockwise_order():
    with pytest.raises(ValidationError) as exc:
        ConvexPolygon.from_vertices([(0, 0), (0, 10), (10, 10), (10, 0)])
    assert exc.value.invariant == "polygon_convex"


def test_polygon_rejects_too_few_and_duplicate_vertices():
    with pytest.raises(ValidationError):
        ConvexPolygon.from_vertices([(0, 0), (1, 0)])
    with pytest.raises(ValidationError) as exc:
        ConvexPolygon.from_vertices([(0, 0), (1, 0), (1, 0), (0, 1)])
    assert exc.value.invariant == "polygon_duplicates"


def test_point_rejects_nan():
    with pytest.raises(ValidationError):
        Point2(math.nan, 0.0)


def test_trackline_needs_positive_extent():
    with pytest.raises(ValidationError):
        Trackline(y=0.0, x_start=5.0, x_end=5.0)
    assert Trackline(y=0.0, x_start=-5.0, x_end=5.0).length == 10.0


def test_chord_through_square(square_factory):
    poly = square_factory(0.0, 0.0, 10.0)
    assert clip_segment_length(poly, 5.0, -100.0, 100.0) == pytest.approx(10.0)
    assert clip_segment_length(poly, 5.0, -5.0, 3.0) == pytest.approx(3.0)
    assert clip_segment_length(poly, 11.0, -100.0, 100.0) == 0.0


def test_segment_on_edge_counts_overlap(square_factory):
    poly = square_factory(0.0, 0.0, 10.0)
    assert clip_segment_length(poly, 10.0, -5.0, 20.0) == pytest.approx(10.0)
    assert clip_segment_length(poly, 0.0, 2.0, 4.0) == pytest.approx(2.0)


def test_vertex_touch_has_zero_length():
    diamond = ConvexPolygon.from_vertices([(5, 0), (10, 5), (5, 10), (0, 5)])
    assert clip_segment_length(diamond, 10.0, 0.0, 10.0) == pytest.approx(0.0)
    assert clip_segment_length(diamond, 5.0, 0.0, 10.0) == pytest.approx(10.0)
    assert clip_segment_length(diamond, 7.5, 0.0, 10.0) == pytest.approx(5.0)


def random_heptagon(rng: np.random.Generator) -> ConvexPolygon:
    """Seven points at sorted random angles on a circle: a convex counter-clockwise 7-gon."""
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, 7))
    radius = float(rng.uniform(2.0, 5.0))
    cx, cy = rng.uniform(-50.0, 50.0, 2)
    return ConvexPolygon.from_vertices((cx + radius * math.cos(a), cy + radius * math.sin(a)) for a in angles)


def sampled_length(poly: ConvexPolygon, y: float, x_start: float, x_end: float, step: float = 1e-4) -> float:
    """Cells of width <= step whose midpoint lies inside every edge half-plane."""
    n = max(1, math.ceil((x_end - x_start) / step))
    dx = (x_end - x_start) / n
    xs = x_start + (np.arange(n) + 0.5) * dx
    v = poly.as_array()
    edge = np.roll(v, -1, axis=0) - v
    cross = edge[:, :1] * (y - v[:, 1:]) - edge[:, 1:] * (xs[None, :] - v[:, :1])
    return float(np.count_nonzero((cross >= 0.0).all(axis=0))) * dx


def test_chord_matches_point_sampling():
    rng = np.random.default_rng(7)
    poly = random_heptagon(rng)
    for _ in range(100):
        y = float(rng.uniform(poly.min_y, poly.max_y))
        x_start, x_end = np.sort(rng.uniform(poly.min_x - 3.0, poly.max_x + 3.0, 2))
        expected = sampled_length(poly, y, float(x_start), float(x_end))
        assert clip_segment_length(poly, y, float(x_start), float(x_end)) == pytest.approx(expected, abs=1e-3)


def test_chord_is_additive_over_split_segments():
    rng = np.random.default_rng(11)
    for _ in range(50):
        poly = random_heptagon(rng)
        y = float(rng.uniform(poly.min_y, poly.max_y))
        a, b, c = (float(x) for x in np.sort(rng.uniform(poly.min_x - 2.0, poly.max_x + 2.0, 3)))
        whole = clip_segment_length(poly, y, a, c)
        assert abs(clip_segment_length(poly, y, a, b) + clip_segment_length(poly, y, b, c) - whole) <= 1e-9


def test_chord_is_translation_equivariant():
    rng = np.random.default_rng(12)
    for _ in range(50):
        poly = random_heptagon(rng)
        dx, dy = (float(d) for d in rng.uniform(-1000.0, 1000.0, 2))
        moved = ConvexPolygon.from_vertices((x + dx, y + dy) for x, y in poly.as_array())
        y = float(rng.uniform(poly.min_y, poly.max_y))
        a, b = (float(x) for x in np.sort(rng.uniform(poly.min_x - 2.0, poly.max_x + 2.0, 2)))
        assert clip_segment_length(moved, y + dy, a + dx, b + dx) == pytest.approx(
            clip_segment_length(poly, y, a, b), abs=1e-8
        )


def test_chord_grows_with_segment_extent():
    rng = np.random.default_rng(13)
    for _ in range(50):
        poly = random_heptagon(rng)
        y = float(rng.uniform(poly.min_y, poly.max_y))
        outer_a, a, b, outer_b = (float(x) for x in np.sort(rng.uniform(poly.min_x - 2.0, poly.max_x + 2.0, 4)))
        inner = clip_segment_length(poly, y, a, b)
        assert clip_segment_length(poly, y, outer_a, b) >= inner
        assert clip_segment_length(poly, y, a, outer_b) >= inner
        assert clip_segment_length(poly, y, outer_a, outer_b) >= inner


def test_ellipse_extent_matches_semi_axes():
    poly = ellipse_polygon(Point2(0.0, 0.0), 2.0, 1.0, 0.0)
    assert len(poly.vertices) == 32
    assert poly.min_x == pytest.approx(-2.0)
    assert poly.max_x == pytest.approx(2.0)
    assert poly.min_y == pytest.approx(-1.0)
    assert poly.max_y == pytest.approx(1.0)


def test_convex_hull_drops_interior_points():
    pts = [Point2(0, 0), Point2(10, 0), Point2(10, 10), Point2(0, 10), Point2(5, 5), Point2(5, 0)]
    hull = convex_hull(pts)
    assert len(hull.vertices) == 4
    assert hull.area == pytest.approx(100.0)


def test_convex_hull_degenerate_inputs():
    with pytest.raises(DegenerateGeometry):
        convex_hull([Point2(0, 0), Point2(1, 1)])
    with pytest.raises(DegenerateGeometry):
        convex_hull([Point2(0, 0), Point2(1, 1), Point2(2, 2), Point2(3, 3)])


def test_ellipse_polygon_is_inscribed():
    center = Point2(500.0, 500.0)
    poly = ellipse_polygon(center, 300.0, 100.0, math.pi / 6)
    assert len(poly.vertices) == 32
    assert poly.contains(center)
    assert 0.99 * math.pi * 300.0 * 100.0 <= poly.area <= math.pi * 300.0 * 100.0


def test_generate_tracklines_on_extrema(square_factory):
    area = Bounds.square(1000.0)
    lines = generate_tracklines([square_factory(100, 200, 100), square_factory(500, 50, 100)], area)
    assert [t.y for t in lines] == [50.0, 150.0, 200.0, 300.0]
    assert all(t.x_start == 0.0 and t.x_end == 1000.0 for t in lines)


def test_generate_tracklines_deduplicates(square_factory):
    area = Bounds.square(1000.0)
    lines = generate_tracklines([square_factory(100, 200, 100), square_factory(500, 200.5, 99.5)], area)
    assert [t.y for t in lines] == [200.0, 300.0]


def test_generate_tracklines_inset_crosses_own_polygon(square_factory):
    area = Bounds.square(1000.0)
    poly = square_factory(100, 200, 100)
    lines = generate_tracklines([poly], area, inset=5.0)
    assert [t.y for t in lines] == [205.0, 295.0]
    assert all(clip_segment_length(poly, t.y, t.x_start, t.x_end) == pytest.approx(100.0) for t in lines)


def test_generate_tracklines_requires_sources():
    with pytest.raises(ValidationError):
        generate_tracklines([], Bounds.square(10.0))
