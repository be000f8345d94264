import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kitemorph.geometry import (
    CrossKind,
    DegenerateGeometryError,
    Location,
    convex_margin_ok,
    cross,
    exact,
    half_disk_fit_radius,
    is_strictly_convex,
    orient,
    point,
    point_in_polygon,
    segments_cross,
    to_fraction,
)

coord = st.fractions(min_value=-50, max_value=50, max_denominator=40)
points = st.tuples(coord, coord).map(lambda p: point(*p))
SQUARE = [point(0, 0), point(3, 0), point(3, 3), point(0, 3)]


def P(*xy):
    return point(*xy)


# --- examples ------------------------------------------------------------------------

@pytest.mark.parametrize("a, b, c, expected", [
    ((0, 0), (1, 0), (0, 1), 1),
    ((0, 0), (1, 1), (2, 2), 0),
    ((0, 0), (0, 1), (1, 0), -1),
])
def test_orient_examples(a, b, c, expected):
    assert orient(P(*a), P(*b), P(*c)) == expected


def test_segments_cross_examples():
    c = segments_cross((P(0, 0), P(2, 2)), (P(0, 2), P(2, 0)))
    assert c.kind is CrossKind.PROPER and c.point == P(1, 1)
    assert segments_cross((P(0, 0), P(1, 0)), (P(1, 0), P(2, 0))).kind is CrossKind.SHARED_ENDPOINT
    assert segments_cross((P(0, 0), P(1, 0)), (P(0, 1), P(1, 1))).kind is CrossKind.DISJOINT


def test_segments_touching_or_overlapping_are_degenerate():
    assert segments_cross((P(0, 0), P(2, 0)), (P(1, 0), P(1, 1))).kind is CrossKind.DEGENERATE
    assert segments_cross((P(0, 0), P(2, 0)), (P(1, 0), P(3, 0))).kind is CrossKind.DEGENERATE
    # collinear, sharing an endpoint but folding back onto each other
    assert segments_cross((P(0, 0), P(2, 0)), (P(0, 0), P(1, 0))).kind is CrossKind.DEGENERATE


@pytest.mark.parametrize("p, where", [((1, 1), Location.INSIDE), ((0, 0), Location.ON_BOUNDARY),
                                      ((5, 5), Location.OUTSIDE), ((3, 1), Location.ON_BOUNDARY)])
def test_point_in_square(p, where):
    assert point_in_polygon(P(*p), SQUARE) is where


def test_point_in_polygon_rejects_bowtie():
    with pytest.raises(DegenerateGeometryError):
        point_in_polygon(P(1, 1), [P(0, 0), P(2, 2), P(2, 0), P(0, 2)])


def test_strict_convexity_examples():
    assert is_strictly_convex(SQUARE)
    assert not is_strictly_convex([P(0, 0), P(1, 0), P(2, 0), P(2, 2), P(0, 2)])
    assert not is_strictly_convex([P(0, 0), P(4, 0), P(2, 1), P(2, 4)])
    # a pentagram turns consistently but winds twice
    star = [P(round(10 * math.cos(2 * math.pi * k * 2 / 5)), round(10 * math.sin(2 * math.pi * k * 2 / 5)))
            for k in range(5)]
    assert not is_strictly_convex(star)


def test_half_disk_fit_radius_examples():
    r = half_disk_fit_radius(P(0, 0), P(2, 0), P(1, 2))
    assert r == pytest.approx(2 / math.sqrt(5), rel=1e-14) and r <= 2 / math.sqrt(5)
    r = half_disk_fit_radius(P(0, 0), P(2, 0), P(1, Fraction(1, 10 ** 6)))
    assert 0 < r < 1e-6
    r = half_disk_fit_radius(P(0, 0), P(2, 0), exact((1.0, math.sqrt(3))))
    assert r == pytest.approx(math.sqrt(3) / 2, rel=1e-12)
    with pytest.raises(DegenerateGeometryError):
        half_disk_fit_radius(P(0, 0), P(2, 0), P(4, 0))


def test_half_disk_radius_matches_dense_sampling():
    u, v, apex = (0.0, 0.0), (2.0, 0.0), (1.0, 2.0)
    w = (1.0, 0.0)
    best = math.inf
    for k in range(10001):
        s = k / 10000
        for a, b in ((u, apex), (v, apex)):
            q = (a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))
            best = min(best, math.dist(q, w))
    assert half_disk_fit_radius(P(0, 0), P(2, 0), P(1, 2)) == pytest.approx(best, rel=1e-6)


def test_coordinates_parse_exactly():
    assert to_fraction("0.1") == Fraction(1, 10)
    assert to_fraction("1/3") == Fraction(1, 3)
    assert to_fraction(0.5) == Fraction(1, 2)
    for bad in ("nan", "inf", float("inf")):
        with pytest.raises(ValueError):
            to_fraction(bad)
    with pytest.raises(TypeError):
        to_fraction(True)


def test_orient_falls_back_to_exact_for_huge_values():
    big = Fraction(10 ** 400)
    assert orient((big, 0), (0, 1), (1, 1)) == -1
    assert orient((0, 0), (big, big), (2 * big, 2 * big)) == 0


def test_margin_check_rejects_nearly_flat_corner():
    assert convex_margin_ok([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    assert not convex_margin_ok([(0.0, 0.0), (1.0, 0.0), (2.0, 1e-14), (1.0, 1.0)])
    assert not convex_margin_ok([(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)])   # clockwise


# --- properties -----------------------------------------------------------------------------

@given(points, points, points)
def test_orient_is_antisymmetric(a, b, c):
    o = orient(a, b, c)
    assert orient(b, a, c) == -o
    assert orient(a, c, b) == -o
    assert orient(c, b, a) == -o


@given(points, points, st.fractions(min_value=-3, max_value=3, max_denominator=50),
       st.fractions(min_value=-1, max_value=1, max_denominator=10 ** 12))
def test_filtered_orient_matches_exact_sign(a, b, t, eps):
    c = (a[0] + t * (b[0] - a[0]) + eps, a[1] + t * (b[1] - a[1]))
    v = cross(a, b, c)
    assert orient(a, b, c) == (v > 0) - (v < 0)


@given(points, points, points, points)
def test_segments_cross_is_symmetric(a, b, c, d):
    if a == b or c == d:
        return
    k1 = segments_cross((a, b), (c, d))
    k2 = segments_cross((c, d), (a, b))
    assert k1.kind is k2.kind
    if k1.kind is CrossKind.PROPER:
        assert k1.point == k2.point
        x = k1.point
        for p, q in ((a, b), (c, d)):
            assert orient(p, q, x) == 0
            axis = 0 if p[0] != q[0] else 1
            s = (x[axis] - p[axis]) / (q[axis] - p[axis])
            assert 0 < s < 1


@given(st.lists(points, min_size=3, max_size=7, unique=True))
def test_convexity_ignores_orientation(poly):
    assert is_strictly_convex(poly) == is_strictly_convex(list(reversed(poly)))


@settings(max_examples=12, deadline=None)
@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 20), st.integers(-30, 30), st.integers(1, 30))
def test_half_disk_lies_inside_triangle(ux, uy, length, ax, ay):
    u, v = P(ux, uy), P(ux + length, uy)
    apex = P(ux + Fraction(ax, 3), uy + ay)
    r = half_disk_fit_radius(u, v, apex)
    w = ((u[0] + v[0]) / 2, (u[1] + v[1]) / 2)
    tri = [u, v, apex]
    rf = Fraction(r)
    for k in range(10001):
        # arc points; the diameter lies on uv and is inside trivially
        ang = math.pi * k / 10000
        q = (w[0] + rf * Fraction(math.cos(ang)), w[1] + rf * Fraction(math.sin(ang)))
        assert point_in_polygon(q, tri, check_simple=False) is not Location.OUTSIDE
