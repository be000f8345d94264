"""Exact geometric primitives.

Every predicate here works on :class:`fractions.Fraction` coordinates so that
orientation, crossing and containment answers are exact.  Floats are accepted
too; callers that need exactness on floating frames convert with
:func:`exact` first (``Fraction(float)`` is lossless).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

Number = Union[int, float, Fraction]

# relative tolerance used for floating morph frames
EPS_REL = 1e-9
# margin on normalized cross products in floating convexity checks
CONVEX_MARGIN = 1e-12


class DegenerateGeometryError(ValueError):
    pass


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Point(self.x - other.x, self.y - other.y)

    def scale(self, k) -> "Point":
        return Point(self.x * k, self.y * k)


def to_fraction(value) -> Fraction:
    """Parse an int, float, Fraction or decimal string exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a coordinate")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coordinate {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        # Decimal keeps "0.1" exact, Fraction handles "1/3"
        if "/" in value:
            return Fraction(value)
        dec = Decimal(value)
        if not dec.is_finite():
            raise ValueError(f"non-finite coordinate {value!r}")
        return Fraction(dec)
    raise TypeError(f"cannot interpret {value!r} as a coordinate")


def point(x, y) -> Point:
    return Point(to_fraction(x), to_fraction(y))


def exact(p) -> Point:
    return Point(to_fraction(p[0]), to_fraction(p[1]))


def cross(o, a, b):
    """Twice the signed area of triangle (o, a, b)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


# float filter: each coordinate is rounded once (relative error 2**-53) and the
# determinant takes a handful of further roundings; 16 units is a safe cover
_FILTER = 16 * 2.0 ** -53


def orient(a, b, c) -> int:
    """Sign of the turn a -> b -> c: +1 counterclockwise, -1 clockwise, 0 collinear.

    Decided in floating point when the error bound allows it, exactly otherwise.
    """
    try:
        ax, ay, bx, by, cx, cy = (float(a[0]), float(a[1]), float(b[0]), float(b[1]), float(c[0]), float(c[1]))
    except OverflowError:
        ax = ay = bx = by = cx = cy = math.inf
    l = (bx - ax) * (cy - ay)
    r = (by - ay) * (cx - ax)
    scale = (abs(bx) + abs(ax)) * (abs(cy) + abs(ay)) + (abs(by) + abs(ay)) * (abs(cx) + abs(ax))
    if 1e-250 < scale < 1e250:  # inf and nan fail this test
        det = l - r
        if abs(det) > _FILTER * scale:
            return 1 if det > 0 else -1
    v = cross(a, b, c)
    return (v > 0) - (v < 0)


def _on_segment(p, a, b) -> bool:
    """p collinear with a, b and inside the closed bounding box of ab."""
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def point_on_segment(p, a, b) -> bool:
    return orient(a, b, p) == 0 and _on_segment(p, a, b)


def point_in_open_segment(p, a, b) -> bool:
    return point_on_segment(p, a, b) and p != a and p != b


class CrossKind(enum.Enum):
    DISJOINT = "disjoint"
    PROPER = "proper"
    SHARED_ENDPOINT = "shared_endpoint"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Crossing:
    kind: CrossKind
    point: Optional[Point] = None


def intersection_point(a, b, c, d) -> Point:
    """Intersection of lines ab and cd (assumed non-parallel), exact."""
    den = (b[0] - a[0]) * (d[1] - c[1]) - (b[1] - a[1]) * (d[0] - c[0])
    if den == 0:
        raise DegenerateGeometryError("parallel lines")
    s = ((c[0] - a[0]) * (d[1] - c[1]) - (c[1] - a[1]) * (d[0] - c[0])) / Fraction(den)
    return Point(a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))


def segments_cross(s1, s2) -> Crossing:
    """Classify how two closed segments meet.

    ``SHARED_ENDPOINT`` means the segments touch exactly at a common endpoint
    and nowhere else; any other touching (T-junction, overlap) is
    ``DEGENERATE``.
    """
    a, b = s1
    c, d = s2
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return Crossing(CrossKind.PROPER, intersection_point(a, b, c, d))
    if o1 and o2 and o3 and o4:
        return Crossing(CrossKind.DISJOINT)
    shared = {a, b} & {c, d}
    if o1 == o2 == 0:
        # collinear: overlap or touch
        if not (_on_segment(c, a, b) or _on_segment(d, a, b)
                or _on_segment(a, c, d) or _on_segment(b, c, d)):
            return Crossing(CrossKind.DISJOINT)
        if len(shared) == 1:
            p = next(iter(shared))
            other1 = b if p == a else a
            other2 = d if p == c else c
            # touching at the shared endpoint only if they extend in opposite directions
            v1 = (other1[0] - p[0], other1[1] - p[1])
            v2 = (other2[0] - p[0], other2[1] - p[1])
            if v1[0] * v2[0] + v1[1] * v2[1] < 0:
                return Crossing(CrossKind.SHARED_ENDPOINT, p)
        return Crossing(CrossKind.DEGENERATE)
    touches = []
    if o1 == 0 and _on_segment(c, a, b):
        touches.append(c)
    if o2 == 0 and _on_segment(d, a, b):
        touches.append(d)
    if o3 == 0 and _on_segment(a, c, d):
        touches.append(a)
    if o4 == 0 and _on_segment(b, c, d):
        touches.append(b)
    if not touches:
        return Crossing(CrossKind.DISJOINT)
    if len(shared) == 1 and all(t in shared for t in touches):
        return Crossing(CrossKind.SHARED_ENDPOINT, next(iter(shared)))
    return Crossing(CrossKind.DEGENERATE)


class Location(enum.Enum):
    INSIDE = "inside"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


def is_simple_polygon(poly: Sequence) -> bool:
    n = len(poly)
    if n < 3 or len(set(map(tuple, poly))) != n:
        return False
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = poly[j], poly[(j + 1) % n]
            kind = segments_cross((a, b), (c, d)).kind
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            if adjacent:
                if kind is CrossKind.DEGENERATE:
                    return False
            elif kind is not CrossKind.DISJOINT:
                return False
    return True


def point_in_polygon(p, poly: Sequence, check_simple: bool = True) -> Location:
    """Exact point location against a simple polygon (either orientation)."""
    if check_simple and not is_simple_polygon(poly):
        raise DegenerateGeometryError("polygon is not simple")
    return _locate(p, poly)


def _locate(p, poly) -> Location:
    n = len(poly)
    inside = False
    py = p[1]
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if point_on_segment(p, a, b):
            return Location.ON_BOUNDARY
        # half-open rule on y avoids double counting vertices
        if (a[1] > py) != (b[1] > py):
            o = orient(a, b, p)
            if (o > 0) == (b[1] > a[1]):
                inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE


def winding_contains(p, walk: Sequence) -> bool:
    """Crossing-number test for a possibly weakly simple closed walk.

    ``p`` must not lie on the walk.  Used for face containment where boundary
    walks may revisit vertices.
    """
    return _locate(p, walk) is Location.INSIDE


def signed_area2(poly: Sequence):
    s = 0
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        s += a[0] * b[1] - a[1] * b[0]
    return s


def _half(d) -> int:
    return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1


def angle_less(d1, d2) -> bool:
    """Exact comparison of direction angles in [0, 2*pi)."""
    h1, h2 = _half(d1), _half(d2)
    if h1 != h2:
        return h1 < h2
    return d1[0] * d2[1] - d1[1] * d2[0] > 0


def angle_key(d):
    """Sort key equivalent to :func:`angle_less` (exact for Fractions)."""
    return _AngleKey(d)


class _AngleKey:
    __slots__ = ("d",)

    def __init__(self, d):
        self.d = d

    def __lt__(self, other):
        return angle_less(self.d, other.d)

    def __eq__(self, other):
        return not angle_less(self.d, other.d) and not angle_less(other.d, self.d)


def is_strictly_convex(poly: Sequence) -> bool:
    n = len(poly)
    if n < 3:
        return False
    signs = {orient(poly[i - 1], poly[i], poly[(i + 1) % n]) for i in range(n)}
    if len(signs) != 1 or 0 in signs:
        return False
    sign = signs.pop()
    pts = poly if sign > 0 else list(reversed(poly))
    dirs = [(pts[(i + 1) % n][0] - pts[i][0], pts[(i + 1) % n][1] - pts[i][1]) for i in range(n)]
    wraps = sum(1 for i in range(n) if not angle_less(dirs[i], dirs[(i + 1) % n]))
    return wraps == 1


def convex_margin_ok(poly: Sequence, margin: float = CONVEX_MARGIN) -> bool:
    """Floating strict-convexity check for a counterclockwise polygon.

    Each corner's cross product is normalized by the lengths of its two edges
    and must exceed ``margin``.  Total turning must be one revolution.
    """
    n = len(poly)
    turning = 0.0
    for i in range(n):
        a, b, c = poly[i - 1], poly[i], poly[(i + 1) % n]
        ux, uy = b[0] - a[0], b[1] - a[1]
        vx, vy = c[0] - b[0], c[1] - b[1]
        lu, lv = math.hypot(ux, uy), math.hypot(vx, vy)
        if lu == 0 or lv == 0:
            return False
        cr = (ux * vy - uy * vx) / (lu * lv)
        if cr <= margin:
            return False
        turning += math.atan2(ux * vy - uy * vx, ux * vx + uy * vy)
    return abs(turning - 2 * math.pi) < 1e-6


def _dist2_point_segment(p, a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    px, py = p[0] - a[0], p[1] - a[1]
    ll = dx * dx + dy * dy
    t = (px * dx + py * dy) / ll
    if t <= 0:
        return px * px + py * py
    if t >= 1:
        qx, qy = p[0] - b[0], p[1] - b[1]
        return qx * qx + qy * qy
    cx, cy = px - t * dx, py - t * dy
    return cx * cx + cy * cy


def point_segment_distance(p, a, b) -> float:
    return math.sqrt(float(_dist2_point_segment(p, a, b)))


def half_disk_fit_radius(u, v, apex) -> float:
    """Radius of the largest half-disk centred at the midpoint of uv, on the
    apex side, that fits in triangle (u, v, apex).

    The squared distance is computed in the input arithmetic; the returned
    float is shrunk by a few ulps so it never overestimates.
    """
    if orient(u, v, apex) == 0:
        raise DegenerateGeometryError("degenerate triangle")
    w = ((u[0] + v[0]) / 2, (u[1] + v[1]) / 2)
    d2 = min(_dist2_point_segment(w, u, apex), _dist2_point_segment(w, v, apex))
    r = math.sqrt(float(d2))
    return r * (1.0 - 2.0 ** -50)
