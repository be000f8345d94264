"""Compatible triangulation of two topologically equivalent planar drawings.

Both drawings are augmented with the same Steiner vertices and edges until
every face is a triangle, except faces flagged as *marked* quadrilaterals,
which are left untouched.

Per face, a triangulation using only diagonals that are interior in both face
polygons is tried first; it adds no Steiner vertices.  Failing that, the two
polygons are each triangulated by ear clipping and mapped piecewise-linearly onto one common convex polygon.  The overlay of the
two image triangulations is a common refinement; its vertices are lifted back
into both faces through the affine pieces, so every refined triangle is
straight and correctly oriented in both drawings.  Faces with holes are first
made simply connected by relay paths that are identical as abstract paths in
both drawings.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .drawing import (
    Drawing,
    DrawingError,
    Edge,
    crossings,
    edge_key,
    planarize,
    topologically_equivalent,
)
from .geometry import (
    CrossKind,
    Point,
    angle_less,
    cross,
    intersection_point,
    orient,
    point_on_segment,
    segments_cross,
)
from .graphs import adjacency, is_triconnected


class CompatibilityError(RuntimeError):
    pass


@dataclass
class MarkedPlanarPair:
    a: Drawing
    b: Drawing
    marked: FrozenSet[FrozenSet[str]] = frozenset()
    # vertex pairs that must never become edges (e.g. removed crossing edges)
    forbidden: FrozenSet[Edge] = frozenset()


@dataclass
class CompatibleResult:
    a: Drawing
    b: Drawing
    steiner: List[str]
    marked: FrozenSet[FrozenSet[str]]
    outer: Tuple[str, str, str]
    faces: List[Tuple[str, ...]] = field(default_factory=list)


# --- polygon helpers ---------------------------------------------------------

def _ccw_strictly_between(d1, s, d2) -> bool:
    """Sweeping counterclockwise from direction d1, s is met strictly before d2.

    When d1 and d2 point the same way the sweep is a full turn.
    """
    def rel(x):
        return (x[0] * d1[0] + x[1] * d1[1], d1[0] * x[1] - d1[1] * x[0])
    rs, r2 = rel(s), rel(d2)
    if rs[1] == 0 and rs[0] > 0:
        return False
    if r2[1] == 0 and r2[0] > 0:
        return True
    return angle_less(rs, r2)


def _in_wedge(walk_pts: Sequence, i: int, target) -> bool:
    """Whether the direction from corner i of a face walk towards ``target``
    points into the face (face on the left of the walk)."""
    n = len(walk_pts)
    p = walk_pts[i]
    if n == 1:
        return True
    nxt, prv = walk_pts[(i + 1) % n], walk_pts[i - 1]
    dn = (nxt[0] - p[0], nxt[1] - p[1])
    dp = (prv[0] - p[0], prv[1] - p[1])
    s = (target[0] - p[0], target[1] - p[1])
    return _ccw_strictly_between(dn, s, dp)


def _segment_clear(p, q, positions: Dict[str, Point], edges: Iterable[Edge], ends: Tuple[str, str]) -> bool:
    """Open segment pq meets no vertex and no edge other than at p, q."""
    for v, x in positions.items():
        if v in ends:
            continue
        if point_on_segment(x, p, q):
            return False
    for e in edges:
        kind = segments_cross((p, q), (positions[e[0]], positions[e[1]])).kind
        if kind is CrossKind.DISJOINT:
            continue
        if kind is CrossKind.SHARED_ENDPOINT and set(e) & set(ends):
            continue
        return False
    return True


def _seg_hits_open_triangle(p, q, a, b, c) -> bool:
    lo, hi = Fraction(0), Fraction(1)
    for u, v in ((a, b), (b, c), (c, a)):
        f0, f1 = cross(u, v, p), cross(u, v, q)
        if f0 > 0 and f1 > 0:
            continue
        if f0 <= 0 and f1 <= 0:
            return False
        t = Fraction(f0) / (f0 - f1)
        if f0 > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
        if lo >= hi:
            return False
    return lo < hi


def _strictly_inside(x, a, b, c) -> bool:
    return cross(a, b, x) > 0 and cross(b, c, x) > 0 and cross(c, a, x) > 0


def ear_clip(pts: Sequence[Point]) -> List[Tuple[int, int, int]]:
    """Triangulate a counterclockwise, possibly weakly simple polygon.

    Corners may repeat positions (a walk that revisits a vertex).  Returns
    index triples into ``pts``, each positively oriented.
    """
    idx = list(range(len(pts)))
    tris: List[Tuple[int, int, int]] = []
    while len(idx) > 3:
        m = len(idx)
        for k in range(m):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % m]
            a, b, c = pts[i0], pts[i1], pts[i2]
            if orient(a, b, c) <= 0:
                continue
            if _is_ear(pts, idx, k, a, b, c):
                tris.append((i0, i1, i2))
                del idx[k]
                break
        else:
            raise CompatibilityError("no ear found; polygon is not weakly simple")
    i0, i1, i2 = idx
    if orient(pts[i0], pts[i1], pts[i2]) <= 0:
        raise CompatibilityError("final triangle is degenerate")
    tris.append((i0, i1, i2))
    return tris


def _is_ear(pts, idx, k, a, b, c) -> bool:
    m = len(idx)
    corners = {a, b, c}
    for j in range(m):
        if j in (k - 1 if k else m - 1, k, (k + 1) % m):
            continue
        x = pts[idx[j]]
        if x in corners:
            continue
        if _strictly_inside(x, a, b, c) or point_on_segment(x, c, a):
            return False
    for j in range(m):
        p, q = pts[idx[j]], pts[idx[(j + 1) % m]]
        if j == k or (j + 1) % m == k:
            continue
        if _seg_hits_open_triangle(p, q, a, b, c):
            return False
    return True


def _barycentric_map(q, src: Sequence[Point], dst: Sequence[Point]) -> Point:
    a, b, c = src
    den = Fraction(cross(a, b, c))
    la = cross(q, b, c) / den
    lb = cross(a, q, c) / den
    lc = 1 - la - lb
    return Point(la * dst[0][0] + lb * dst[1][0] + lc * dst[2][0],
                 la * dst[0][1] + lb * dst[1][1] + lc * dst[2][1])


def _in_closed_triangle(q, a, b, c) -> bool:
    return cross(a, b, q) >= 0 and cross(b, c, q) >= 0 and cross(c, a, q) >= 0


# --- the working state ----------------------------------------------------------

class _State:
    def __init__(self, pair: MarkedPlanarPair, prefix: str):
        self.pos_a: Dict[str, Point] = dict(pair.a.positions)
        self.pos_b: Dict[str, Point] = dict(pair.b.positions)
        self.edges: Set[Edge] = set(pair.a.edges)
        self.forbidden = set(pair.forbidden)
        self.marked = pair.marked
        self.steiner: List[str] = []
        self.prefix = prefix
        self._counter = itertools.count()

    def new_vertex(self, pa: Point, pb: Point) -> str:
        while True:
            v = f"{self.prefix}{next(self._counter)}"
            if v not in self.pos_a:
                break
        self.pos_a[v] = pa
        self.pos_b[v] = pb
        self.steiner.append(v)
        return v

    def edge_allowed(self, u: str, v: str) -> bool:
        if u == v:
            return False
        e = edge_key(u, v)
        return e not in self.edges and e not in self.forbidden

    def add_edge(self, u: str, v: str):
        e = edge_key(u, v)
        if e in self.edges or e in self.forbidden:
            raise CompatibilityError(f"edge {e} would duplicate an existing or forbidden pair")
        self.edges.add(e)

    def drawing_a(self) -> Drawing:
        return Drawing.build(self.pos_a, self.edges)

    def drawing_b(self) -> Drawing:
        return Drawing.build(self.pos_b, self.edges)


def _bbox_triangle(points: Iterable[Point]) -> List[Point]:
    pts = list(points)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    cx, cy = (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2
    s = max(max(xs) - min(xs), max(ys) - min(ys), Fraction(1))
    return [Point(cx - 3 * s, cy - 2 * s), Point(cx + 3 * s, cy - 2 * s), Point(cx, cy + 3 * s)]


# --- making every face simply connected ---------------------------------------------

def _cut_polygon(walks: List[tuple], pos: Dict[str, Point], edges: Set[Edge]):
    """Bridge hole walks into the first (enclosing) walk of a bounded cell.

    Returns the merged corner list as (walk index, occurrence index) pairs and
    the corresponding points.  Bridges are straight segments between corners
    that see each other inside the cell.
    """
    merged = [(0, i) for i in range(len(walks[0]))]
    bridges: List[Tuple[Point, Point]] = []
    pending = list(range(1, len(walks)))
    while pending:
        mpts = [pos[walks[w][i]] for w, i in merged]
        best = None
        for h in pending:
            hw = walks[h]
            hpts = [pos[v] for v in hw]
            for i in range(len(hw)):
                for mi, (w, j) in enumerate(merged):
                    p, q = hpts[i], mpts[mi]
                    if not (_in_wedge(hpts, i, q) and _in_wedge(mpts, mi, p)):
                        continue
                    if not _segment_clear(p, q, pos, edges, (hw[i], walks[w][j])):
                        continue
                    if any(segments_cross((p, q), br).kind in (CrossKind.PROPER, CrossKind.DEGENERATE)
                           for br in bridges):
                        continue
                    d2 = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
                    if best is None or d2 < best[0]:
                        best = (d2, h, i, mi)
            if best is not None:
                break
        if best is None:
            raise CompatibilityError("no bridge found for a hole")
        _, h, i, mi = best
        hw = walks[h]
        loop = [(h, (i + k) % len(hw)) for k in range(len(hw) + 1)] if len(hw) > 1 else [(h, 0)]
        bridges.append((pos[hw[i]], mpts[mi]))
        merged = merged[:mi + 1] + loop + [merged[mi]] + merged[mi + 1:]
        pending.remove(h)
    pts = [pos[walks[w][i]] for w, i in merged]
    return merged, pts


def _triangle_path(walks, pos, edges, start: Tuple[int, int], goal: Tuple[int, int]) -> List[Point]:
    """Relay points of a polyline from corner ``start`` to corner ``goal``
    through a triangulation of the cell bounded by ``walks``."""
    merged, pts = _cut_polygon(walks, pos, edges)
    tris = ear_clip(pts)
    by_edge: Dict[Tuple[int, int], List[int]] = {}
    for t, (i, j, k) in enumerate(tris):
        for a, b in ((i, j), (j, k), (k, i)):
            by_edge.setdefault((min(a, b), max(a, b)), []).append(t)
    starts = [t for t, tri in enumerate(tris) if any(merged[c] == start for c in tri)]
    goals = {t for t, tri in enumerate(tris) if any(merged[c] == goal for c in tri)}
    prev: Dict[int, Optional[Tuple[int, Tuple[int, int]]]] = {t: None for t in starts}
    queue = deque(starts)
    end = None
    while queue:
        t = queue.popleft()
        if t in goals:
            end = t
            break
        i, j, k = tris[t]
        for a, b in ((i, j), (j, k), (k, i)):
            key = (min(a, b), max(a, b))
            for u in by_edge[key]:
                if u not in prev:
                    prev[u] = (t, key)
                    queue.append(u)
    if end is None:
        raise CompatibilityError("cell triangulation is disconnected")
    chain = []
    t = end
    while True:
        chain.append(t)
        link = prev[t]
        if link is None:
            break
        chain.append(link[1])
        t = link[0]
    chain.reverse()
    out = []
    for item in chain:
        if isinstance(item, int):
            a, b, c = (pts[x] for x in tris[item])
            out.append(Point((a[0] + b[0] + c[0]) / 3, (a[1] + b[1] + c[1]) / 3))
        else:
            p, q = pts[item[0]], pts[item[1]]
            out.append(Point((p[0] + q[0]) / 2, (p[1] + q[1]) / 2))
    return out


def _pad(path: List[Point], start: Point, end: Point, length: int) -> List[Point]:
    """Insert points on the longest segments until the relay list has ``length`` points."""
    pts = [start] + list(path) + [end]
    while len(pts) - 2 < length:
        k = max(range(len(pts) - 1), key=lambda i: (pts[i + 1][0] - pts[i][0]) ** 2 + (pts[i + 1][1] - pts[i][1]) ** 2)
        p, q = pts[k], pts[k + 1]
        pts.insert(k + 1, Point((p[0] + q[0]) / 2, (p[1] + q[1]) / 2))
    return pts[1:-1]


def _connect_once(st: _State, cell: List[tuple], bounded: bool) -> None:
    """Join the first hole of a cell to another boundary walk of the same cell."""
    walks = cell
    h = 1 if bounded else 0
    others = [w for w in range(len(walks)) if w != h]
    pts_a = {w: [st.pos_a[v] for v in walks[w]] for w in range(len(walks))}
    pts_b = {w: [st.pos_b[v] for v in walks[w]] for w in range(len(walks))}
    edges = st.edges

    def visible(pos, ptsw, w1, i, w2, j):
        p, q = ptsw[w1][i], ptsw[w2][j]
        return (_in_wedge(ptsw[w1], i, q) and _in_wedge(ptsw[w2], j, p)
                and _segment_clear(p, q, pos, edges, (walks[w1][i], walks[w2][j])))

    cands = []
    for i in range(len(walks[h])):
        for w in others:
            for j in range(len(walks[w])):
                if not st.edge_allowed(walks[h][i], walks[w][j]):
                    continue
                pa, qa = pts_a[h][i], pts_a[w][j]
                pb, qb = pts_b[h][i], pts_b[w][j]
                d = float((pa[0] - qa[0]) ** 2 + (pa[1] - qa[1]) ** 2 + (pb[0] - qb[0]) ** 2 + (pb[1] - qb[1]) ** 2)
                cands.append((d, i, w, j))
    cands.sort()
    vis_a = vis_b = None
    for _, i, w, j in cands:
        va = visible(st.pos_a, pts_a, h, i, w, j)
        vb = visible(st.pos_b, pts_b, h, i, w, j)
        if va and vb:
            st.add_edge(walks[h][i], walks[w][j])
            return
        if va and vis_a is None:
            vis_a = (i, w, j)
        if vb and vis_b is None:
            vis_b = (i, w, j)
    choice = vis_a or vis_b
    if choice is None:
        raise CompatibilityError("no connector candidate between cell boundaries")
    i, w, j = choice

    def path_in(pos):
        if bounded:
            return _triangle_path(walks, pos, edges, (h, i), (w, j))
        # unbounded cell: enclose it in a temporary triangle to get a bounded region
        tri = _bbox_triangle(pos.values())
        names = ["~tmp0", "~tmp1", "~tmp2"]
        tpos = dict(pos)
        tpos.update(zip(names, tri))
        tedges = set(edges) | {edge_key(names[0], names[1]), edge_key(names[1], names[2]),
                               edge_key(names[0], names[2])}
        return _triangle_path([tuple(names)] + list(walks), tpos, tedges, (h + 1, i), (w + 1, j))

    if choice == vis_a:
        ra, rb = [], path_in(st.pos_b)
    else:
        ra, rb = path_in(st.pos_a), []
    k = max(len(ra), len(rb), 1)
    ra = _pad(ra, pts_a[h][i], pts_a[w][j], k)
    rb = _pad(rb, pts_b[h][i], pts_b[w][j], k)
    chain = [walks[h][i]] + [st.new_vertex(pa, pb) for pa, pb in zip(ra, rb)] + [walks[w][j]]
    for u, v in zip(chain, chain[1:]):
        st.add_edge(u, v)


def _connect_all(st: _State) -> None:
    while True:
        cc = planarize(st.drawing_a())
        target = next((cell for cell in cc.cells() if len(cell) > 1), None)
        if target is None:
            return
        bounded = cc.walk_area2[target[0]] > 0
        _connect_once(st, [cc.walks[i] for i in target], bounded)


def connect_components(pair: MarkedPlanarPair, prefix: str = "~s") -> Tuple[MarkedPlanarPair, List[str]]:
    """Add compatible edges (with relay vertices where needed) until both
    drawings are connected.  Returns the augmented pair and the new vertices."""
    st = _State(pair, prefix)
    _connect_all(st)
    return (MarkedPlanarPair(st.drawing_a(), st.drawing_b(), pair.marked, pair.forbidden), st.steiner)


# --- per-face compatible triangulation ----------------------------------------------

def _convex_image(k: int) -> List[Point]:
    # points on a parabola are in strictly convex position and rational
    return [Point(Fraction(i), Fraction(i * i)) for i in range(k)]


def _interleave(i, j, k, l) -> bool:
    a, b = sorted((i, j))
    return (a < k < b) != (a < l < b) and len({i, j, k, l}) == 4


def _diagonal_inside(pts: Sequence[Point], i: int, j: int) -> bool:
    """Open segment between corners i and j of a simple ccw polygon lies in its interior."""
    n = len(pts)
    p, q = pts[i], pts[j]
    if not (_in_wedge(pts, i, q) and _in_wedge(pts, j, p)):
        return False
    for k in range(n):
        if k not in (i, j) and point_on_segment(pts[k], p, q):
            return False
        k2 = (k + 1) % n
        if i in (k, k2) or j in (k, k2):
            continue
        if segments_cross((p, q), (pts[k], pts[k2])).kind is not CrossKind.DISJOINT:
            return False
    return True


def common_triangulation(pa: Sequence[Point], pb: Sequence[Point],
                         allowed=lambda i, j: True) -> Optional[List[Tuple[int, int, int]]]:
    """A triangulation without Steiner points valid in both simple polygons, or None.

    Interval dynamic programme over diagonals that are interior in both and
    accepted by ``allowed``.
    """
    n = len(pa)
    ok = {}
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            ok[i, j] = allowed(i, j) and _diagonal_inside(pa, i, j) and _diagonal_inside(pb, i, j)

    def side(i, j):
        return j == i + 1 or (i == 0 and j == n - 1) or ok[i, j]

    best: Dict[Tuple[int, int], Optional[int]] = {}
    for span in range(2, n):
        for i in range(n - span):
            j = i + span
            best[i, j] = None
            for k in range(i + 1, j):
                if side(i, k) and side(k, j) and (k == i + 1 or best[i, k] is not None) \
                        and (j == k + 1 or best[k, j] is not None):
                    best[i, j] = k
                    break
    if best[0, n - 1] is None:
        return None
    tris, stack = [], [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        k = best[i, j]
        tris.append((i, k, j))
        stack += [(i, k), (k, j)]
    return tris


# faces larger than this go straight to the overlay construction
_DP_LIMIT = 64


def _triangulate_face(st: _State, walk: tuple) -> None:
    n = len(walk)
    pa = [st.pos_a[v] for v in walk]
    pb = [st.pos_b[v] for v in walk]
    if n <= _DP_LIMIT and len(set(walk)) == n:
        tris = common_triangulation(pa, pb, lambda i, j: st.edge_allowed(walk[i], walk[j]))
        if tris is not None:
            for t in tris:
                for x, y in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
                    e = edge_key(walk[x], walk[y])
                    if e not in st.edges:
                        st.add_edge(*e)
            return
    ta = ear_clip(pa)
    tb = ear_clip(pb)
    img = _convex_image(n)

    def diagonals(tris):
        out = set()
        for t in tris:
            for x, y in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                if (x - y) % n not in (1, n - 1):
                    out.add((min(x, y), max(x, y)))
        return out

    da, db = diagonals(ta), diagonals(tb)
    # nodes of the overlay live in the convex image
    node_pos: Dict[str, Point] = {}
    node_vertex: Dict[str, str] = {}
    for i in range(n):
        node_pos[f"c{i}"] = img[i]
    splits: Dict[Tuple[int, int], List[Tuple[Fraction, str]]] = {d: [] for d in da | db}
    xc = itertools.count()
    for d1 in sorted(da):
        for d2 in sorted(db):
            if d1 != d2 and _interleave(d1[0], d1[1], d2[0], d2[1]):
                p = intersection_point(img[d1[0]], img[d1[1]], img[d2[0]], img[d2[1]])
                name = f"x{next(xc)}"
                node_pos[name] = p
                for d in (d1, d2):
                    a = img[d[0]]
                    splits[d].append(((p[0] - a[0]) ** 2 + (p[1] - a[1]) ** 2, name))
    for d in sorted(da & db):
        u, v = walk[d[0]], walk[d[1]]
        if not st.edge_allowed(u, v):
            a, b = img[d[0]], img[d[1]]
            p = Point((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            name = f"x{next(xc)}"
            node_pos[name] = p
            splits[d].append(((p[0] - a[0]) ** 2 + (p[1] - a[1]) ** 2, name))
    seg_edges = set()
    for i in range(n):
        seg_edges.add(edge_key(f"c{i}", f"c{(i + 1) % n}"))
    for d, items in splits.items():
        chain = [f"c{d[0]}"] + [nm for _, nm in sorted(items)] + [f"c{d[1]}"]
        for u, v in zip(chain, chain[1:]):
            seg_edges.add(edge_key(u, v))
    overlay = Drawing.build(node_pos, seg_edges)
    cc = planarize(overlay)
    cells = [w for i, w in enumerate(cc.walks) if cc.walk_area2[i] > 0]

    def lift(q, tris, poly):
        for t in tris:
            src = [img[x] for x in t]
            if _in_closed_triangle(q, *src):
                return _barycentric_map(q, src, [poly[x] for x in t])
        raise CompatibilityError("overlay point outside the convex image")

    for name, q in node_pos.items():
        if name.startswith("c"):
            node_vertex[name] = walk[int(name[1:])]
    for name in sorted(node_pos):
        if name.startswith("x"):
            q = node_pos[name]
            node_vertex[name] = st.new_vertex(lift(q, ta, pa), lift(q, tb, pb))
    new_edges = set()
    for u, v in seg_edges:
        x, y = node_vertex[u], node_vertex[v]
        e = edge_key(x, y)
        if e not in st.edges:
            new_edges.add(e)
    for cell in cells:
        if len(cell) == 3:
            continue
        q = Point(sum(node_pos[c][0] for c in cell) / len(cell), sum(node_pos[c][1] for c in cell) / len(cell))
        centre = st.new_vertex(lift(q, ta, pa), lift(q, tb, pb))
        for c in cell:
            new_edges.add(edge_key(centre, node_vertex[c]))
    for e in sorted(new_edges):
        st.add_edge(*e)


def _is_marked(st: _State, walk: tuple) -> bool:
    return len(walk) == 4 and frozenset(walk) in st.marked


def compatible_triangulate(pair: MarkedPlanarPair, prefix: str = "~s", verify: bool = True) -> CompatibleResult:
    if crossings(pair.a) or crossings(pair.b):
        raise DrawingError("compatible triangulation needs planar drawings")
    eq = topologically_equivalent(pair.a, pair.b)
    if not eq.equivalent:
        raise DrawingError(f"drawings are not equivalent: {eq.first_mismatch}")
    st = _State(pair, prefix)
    cc = planarize(pair.a)
    outer_cell = cc.outer_cell
    outer_walk = cc.walks[outer_cell[0]] if len(outer_cell) == 1 else ()
    if len(outer_walk) == 3 and len(set(outer_walk)) == 3:
        outer = tuple(reversed(outer_walk))
    else:
        tri_a = _bbox_triangle(list(st.pos_a.values()) + list(st.pos_b.values()))
        names = [st.new_vertex(p, p) for p in tri_a]
        for x, y in ((0, 1), (1, 2), (2, 0)):
            st.add_edge(names[x], names[y])
        outer = tuple(names)
    _connect_all(st)
    cc = planarize(st.drawing_a())
    for i, walk in enumerate(cc.walks):
        if cc.walk_area2[i] <= 0 or _is_marked(st, walk):
            continue
        if len(walk) == 3 and len(set(walk)) == 3:
            continue
        _triangulate_face(st, walk)
    a2, b2 = st.drawing_a(), st.drawing_b()
    faces = [w for i, w in enumerate(planarize(a2).walks)]
    res = CompatibleResult(a2, b2, list(st.steiner), pair.marked, outer, faces)
    if verify:
        check_result(pair, res)
    return res


def check_almost_triangulated(d: Drawing, marked: Iterable[FrozenSet[str]]) -> bool:
    if crossings(d):
        return False
    marked = set(marked)
    cc = planarize(d)
    if len(cc.component_outer) != 1:
        return False
    for i, w in enumerate(cc.walks):
        if len(w) == 3 and len(set(w)) == 3:
            continue
        if len(w) == 4 and len(set(w)) == 4 and frozenset(w) in marked and cc.walk_area2[i] > 0:
            continue
        return False
    return True


def check_triconnected(g) -> bool:
    return is_triconnected(adjacency(g.vertices, g.edges))


def check_result(pair: MarkedPlanarPair, res: CompatibleResult) -> None:
    for v in pair.a.vertices:
        if res.a.positions[v] != pair.a.positions[v] or res.b.positions[v] != pair.b.positions[v]:
            raise CompatibilityError(f"original vertex {v} moved")
    if not pair.a.edges <= res.a.edges:
        raise CompatibilityError("original edges lost")
    if res.a.edges & pair.forbidden:
        raise CompatibilityError("forbidden pair became an edge")
    eq = topologically_equivalent(res.a, res.b)
    if not eq.equivalent:
        raise CompatibilityError(f"results are not equivalent: {eq.first_mismatch}")
    for d in (res.a, res.b):
        if not check_almost_triangulated(d, pair.marked):
            raise CompatibilityError("result is not almost triangulated")
    for quad in pair.marked:
        cc = planarize(res.a)
        if not any(len(w) == 4 and frozenset(w) == quad and cc.walk_area2[i] > 0 for i, w in enumerate(cc.walks)):
            raise CompatibilityError(f"marked face {sorted(quad)} was modified")
