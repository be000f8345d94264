"""The recursive morphing algorithm.

Base case: every kite is empty.  Crossing edges are dropped, the kite
quadrilaterals are marked, both drawings are compatibly triangulated and a
convex morph is run; crossing edges simply follow their endpoints.

Recursive case: the deepest vertices (level l) are removed, giving Q.  Each
kite of Q that contained them is cut by its crossing edges into four pieces.
The graph H inside a piece is first squeezed into a thin "skinny" drawing
that hugs the perpendicular radius of the piece's base edge (u, v).  While Q
morphs recursively, every skinny drawing rides rigidly on its base edge, and
at the end it is unsqueezed into its target shape.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .compat import CompatibleResult, MarkedPlanarPair, compatible_triangulate
from .convex import ConvexInstance, build_convex_morph, fit_weights, _solve
from .drawing import (
    Drawing,
    DrawingError,
    Edge,
    EquivalenceReport,
    edge_key,
    planarize,
    remove_edges,
    subdrawing,
    topologically_equivalent,
)
from .geometry import (
    Location,
    Point,
    exact,
    half_disk_fit_radius,
    intersection_point,
    is_strictly_convex,
    orient,
    point_in_polygon,
)
from .kites import (
    InternalInvariantError,
    Kite,
    KitePlanarityError,
    LevelAssignment,
    assign_levels,
    complete_partial_kites,
    detect_kites,
    validate_kite_planarity,
)
from .morph import (
    ConstantStage,
    Frame,
    Morph,
    ParallelStage,
    RestrictStage,
    RigidFollowStage,
    SequenceStage,
    Stage,
    edge_frame,
    from_local,
    sample_times,
)

LAMBDA_SAFETY = 0.95
RADIUS_SAFETY = 0.9
HALF_DISK_SAMPLES = 48
# share of the timeline given to each skinnify phase
SKINNY_SHARE = 0.1


class NotEquivalentError(DrawingError):
    def __init__(self, report: EquivalenceReport):
        super().__init__(f"drawings are not topologically equivalent: {report.first_mismatch}")
        self.report = report


class HalfDiskError(RuntimeError):
    pass


# --- data records -----------------------------------------------------------------------

@dataclass(frozen=True)
class PieceOfKite:
    kite: Kite
    base: Tuple[str, str]
    apex: Point
    h: FrozenSet[str]
    binding: FrozenSet[Edge]
    side: int                     # +1 when the apex is left of u -> v


@dataclass(frozen=True)
class HalfDiskParams:
    lam: float
    radius: float
    phi: float
    t_star: float
    samples: int


@dataclass
class HPrime:
    u: str
    v: str
    d: str
    a: Drawing                    # crossing edges removed, triangulated
    b: Drawing
    marked: FrozenSet[FrozenSet[str]]
    apex_a: Point
    apex_b: Point
    side: int

    @property
    def riders(self) -> FrozenSet[str]:
        return self.a.vertices - {self.u, self.v}


@dataclass
class ChainOfCycles:
    nodes: List[str]              # d', cutvertices..., d, bottom to top
    blocks: List[FrozenSet[str]]  # blocks[i] spans nodes[i] .. nodes[i+1]
    block_edges: List[FrozenSet[Edge]]
    sides: List[Dict[str, List[str]]]  # per block: "u"/"v" -> internal path, bottom to top
    tags: Dict[str, str]          # "u", "v" or "both"
    d: str
    d_prime: str

    @property
    def cutvertices(self) -> List[str]:
        return self.nodes[1:-1]


@dataclass
class SkinnyDrawing:
    local: Dict[str, Tuple[float, float]]   # riders in the (w, r) frame
    cycles: List[List[str]]                 # each cycle block, counterclockwise in local coordinates


@dataclass
class PieceRecord:
    piece: PieceOfKite
    hp: HPrime
    chain: ChainOfCycles
    params: HalfDiskParams
    skinny: SkinnyDrawing
    checks: Dict[str, bool] = field(default_factory=dict)


@dataclass
class Trace:
    """What the construction did: one record per piece and every compatible
    triangulation it computed, as (input pair, result)."""
    pieces: List[PieceRecord] = field(default_factory=list)
    triangulations: List[Tuple[MarkedPlanarPair, CompatibleResult]] = field(default_factory=list)


@dataclass
class _Context:
    counter: itertools.count = field(default_factory=itertools.count)
    trace: Trace = field(default_factory=Trace)
    rider_groups: List[Tuple[str, ...]] = field(default_factory=list)

    def prefix(self, tag: str) -> str:
        return f"~{tag}{next(self.counter)}."


# --- entry points -------------------------------------------------------------------------

def morph(a: Drawing, b: Drawing) -> Morph:
    """Morph between two topologically equivalent kite-planar 1-planar drawings."""
    for d in (a, b):
        rep = validate_kite_planarity(d)
        if not rep.ok:
            raise KitePlanarityError(f"{rep.violations[0].kind}: {rep.violations[0].message}")
    if a.graph != b.graph:
        raise DrawingError("drawings of different graphs")
    eq = topologically_equivalent(a, b)
    if not eq.equivalent:
        raise NotEquivalentError(eq)
    a2, b2, _ = complete_partial_kites(a, b)
    ctx = _Context()
    stage = _morph_stage(a2, b2, ctx)
    return Morph(a.graph, a, b, stage, riders=tuple(ctx.rider_groups), trace=ctx.trace)


def base_case_morph(a: Drawing, b: Drawing) -> Morph:
    if assign_levels(a).max_level != 0:
        raise ValueError("base case needs every kite to be empty")
    ctx = _Context()
    return Morph(a.graph, a, b, _base_stage(a, b, ctx), trace=ctx.trace)


def recursive_morph(a: Drawing, b: Drawing, levels: LevelAssignment) -> Morph:
    if levels.max_level < 1:
        raise ValueError("recursive case needs a non-empty kite")
    ctx = _Context()
    stage = _recursive_stage(a, b, levels, ctx)
    return Morph(a.graph, a, b, stage, riders=tuple(ctx.rider_groups), trace=ctx.trace)


def _morph_stage(a: Drawing, b: Drawing, ctx: _Context) -> Stage:
    if a.positions == b.positions:
        return ConstantStage(a.positions)
    levels = assign_levels(a)
    if levels.max_level == 0:
        return _base_stage(a, b, ctx)
    return _recursive_stage(a, b, levels, ctx)


# --- base case ------------------------------------------------------------------------------

def _strip_kites(d: Drawing, kites: Sequence[Kite]):
    crossing = {e for k in kites for e in k.crossing_edges}
    return remove_edges(d, crossing), frozenset(frozenset(k.corners) for k in kites), frozenset(crossing)


def _base_stage(a: Drawing, b: Drawing, ctx: _Context) -> Stage:
    if a.positions == b.positions:
        return ConstantStage(a.positions)
    kites = detect_kites(a)
    pa, marked, crossing = _strip_kites(a, kites)
    pb, _, _ = _strip_kites(b, kites)
    pair = MarkedPlanarPair(pa, pb, marked, crossing)
    res = compatible_triangulate(pair, prefix=ctx.prefix("t"))
    ctx.trace.triangulations.append((pair, res))
    inst = ConvexInstance.from_drawings(res.a, res.b)
    stages = build_convex_morph(inst, fixed_boundary=False)
    stage = stages[0] if len(stages) == 1 else SequenceStage([(s, 1.0) for s in stages])
    return RestrictStage(stage, a.vertices)


# --- pieces ---------------------------------------------------------------------------------

def _inside_triangle(p, tri) -> bool:
    s = orient(*tri)
    return s != 0 and all(orient(tri[i], tri[(i + 1) % 3], p) == s for i in range(3))


def extract_pieces(q: Drawing, g: Drawing, levels: LevelAssignment) -> List[PieceOfKite]:
    ell = levels.max_level
    top = {v for v, lv in levels.level.items() if lv == ell}
    adj = g.graph.adjacency()
    pieces, owner = [], {}
    for k in detect_kites(q):
        if any(levels.level[c] != ell - 1 for c in k.corners):
            continue
        for i in range(4):
            u, v = k.corners[i], k.corners[(i + 1) % 4]
            tri = (g.positions[u], g.positions[v], k.crossing_point)
            h = frozenset(x for x in top if _inside_triangle(g.positions[x], tri))
            if not h:
                continue
            for x in h:
                if x in owner:
                    raise InternalInvariantError(f"vertex {x} lies in two pieces")
                owner[x] = (u, v)
                stray = adj[x] - h - {u, v}
                if stray:
                    raise InternalInvariantError(f"edge from {x} to {sorted(stray)[0]} leaves its piece")
            binding = frozenset(edge_key(x, c) for x in h for c in (u, v) if c in adj[x])
            pieces.append(PieceOfKite(k, (u, v), k.crossing_point, h, binding, orient(*tri)))
    missing = top - set(owner)
    if missing:
        raise InternalInvariantError(f"level-{ell} vertices outside every piece: {sorted(missing)[:3]}")
    return pieces


def _kite_apex(frame, kite: Kite) -> Point:
    (p, q), (r, s) = kite.crossing_edges
    return intersection_point(exact(frame[p]), exact(frame[q]), exact(frame[r]), exact(frame[s]))


class _FrameCache:
    def __init__(self, stage: Stage):
        self.stage = stage
        self.frames: Dict[float, Frame] = {}

    def __call__(self, t: float) -> Frame:
        if t not in self.frames:
            self.frames[t] = self.stage.evaluate(t)
        return self.frames[t]


def _base_measures(piece: PieceOfKite, frames, times):
    u, v = piece.base
    out = []
    for t in times:
        fr = frames(t)
        pu, pv = exact(fr[u]), exact(fr[v])
        length = math.hypot(float(pv[0] - pu[0]), float(pv[1] - pu[1]))
        out.append((t, length, half_disk_fit_radius(pu, pv, _kite_apex(fr, piece.kite))))
    return out


def compute_half_disk(piece: PieceOfKite, underlying, samples: int = HALF_DISK_SAMPLES,
                      lam_safety: float = LAMBDA_SAFETY, radius_safety: float = RADIUS_SAFETY) -> HalfDiskParams:
    """``underlying`` is a Stage (or frame function) moving the base edge."""
    frames = underlying if callable(underlying) and not isinstance(underlying, Stage) else _FrameCache(underlying)
    meas = _base_measures(piece, frames, sample_times(samples))
    t_star, lmin, _ = min(meas, key=lambda m: m[1])
    lam = lmin * lam_safety
    radius = min(m[2] for m in meas) * radius_safety
    if not (lam > 0 and radius > 0):
        raise HalfDiskError("base edge or half-disk collapsed")
    return HalfDiskParams(lam, radius, math.atan2(lam / 2, radius), t_star, samples)


def certify_half_disk(piece: PieceOfKite, frames, params: HalfDiskParams, samples: int) -> bool:
    return all(length >= params.lam and fit >= params.radius
               for _, length, fit in _base_measures(piece, frames, sample_times(samples)))


def _half_disk_protocol(piece: PieceOfKite, frames) -> HalfDiskParams:
    params = compute_half_disk(piece, frames)
    # odd counts interleave with the fitting samples
    if certify_half_disk(piece, frames, params, 2 * HALF_DISK_SAMPLES + 1):
        return params
    params = compute_half_disk(piece, frames, 2 * HALF_DISK_SAMPLES, LAMBDA_SAFETY - 0.05, RADIUS_SAFETY - 0.1)
    if certify_half_disk(piece, frames, params, 4 * HALF_DISK_SAMPLES + 1):
        return params
    raise HalfDiskError(f"no certified half-disk for piece on {piece.base}")


# --- H' ---------------------------------------------------------------------------------------

def _dummy_position(pu, pv, apex, inner_pts, start=Fraction(1, 2)) -> Point:
    """Point on the segment from the apex towards the midpoint of uv, close
    enough to the apex that triangle (u, v, d) strictly contains ``inner_pts``."""
    w = Point((pu[0] + pv[0]) / 2, (pu[1] + pv[1]) / 2)
    s = start
    for _ in range(200):
        d = Point(apex[0] + s * (w[0] - apex[0]), apex[1] + s * (w[1] - apex[1]))
        if all(_inside_triangle(p, (pu, pv, d)) for p in inner_pts):
            return d
        s /= 2
    raise InternalInvariantError("no dummy position contains the piece")


def _piece_drawing(g: Drawing, piece: PieceOfKite, d: str, pd: Point) -> Drawing:
    u, v = piece.base
    keep = set(piece.h) | {u, v}
    edges = [e for e in g.edges if e[0] in keep and e[1] in keep]
    edges += [edge_key(u, d), edge_key(v, d)]
    pos = {x: g.positions[x] for x in keep}
    pos[d] = pd
    return Drawing.build(pos, edges)


def build_H_prime(piece: PieceOfKite, a: Drawing, b: Drawing, prefix: str = "~h",
                  log: Optional[list] = None) -> HPrime:
    u, v = piece.base
    d = prefix + "d"
    kite_b = next(k for k in detect_kites(b) if set(k.corners) == set(piece.kite.corners))
    draws = []
    for g, apex in ((a, piece.apex), (b, kite_b.crossing_point)):
        pd = _dummy_position(g.positions[u], g.positions[v], apex, [g.positions[x] for x in piece.h])
        draws.append(_piece_drawing(g, piece, d, pd))
    ha, hb = draws
    kites = detect_kites(ha)
    pa, marked, crossing = _strip_kites(ha, kites)
    pb, _, _ = _strip_kites(hb, kites)
    pair = MarkedPlanarPair(pa, pb, marked, crossing)
    res = compatible_triangulate(pair, prefix=prefix + "s")
    if log is not None:
        log.append((pair, res))
    hp = HPrime(u, v, d, res.a, res.b, marked, piece.apex, kite_b.crossing_point, piece.side)
    _check_d_prime_face(hp)
    return hp


def _check_d_prime_face(hp: HPrime) -> None:
    for dr in (hp.a, hp.b):
        for w in planarize(dr).walks:
            if (hp.u in w or hp.v in w) and len(w) != 3:
                raise InternalInvariantError(f"face {w} at the base edge is not a triangle")


# --- chain of cycles -----------------------------------------------------------------------

def _inner_face_vertex(hp: HPrime) -> str:
    cc = planarize(hp.a)
    for i, w in enumerate(cc.walks):
        if cc.walk_area2[i] > 0 and len(w) == 3 and hp.u in w and hp.v in w:
            return next(x for x in w if x not in (hp.u, hp.v))
    raise InternalInvariantError("no inner face at the base edge")


def extract_chain_of_cycles(hp: HPrime) -> ChainOfCycles:
    u, v = hp.u, hp.v
    rest = subdrawing(hp.a, hp.riders)
    cc = planarize(rest)
    if len(cc.component_outer) != 1:
        raise InternalInvariantError("chain property (a): H' minus u, v is disconnected")
    outer = cc.walks[next(iter(cc.component_outer.values()))]
    c_edges = {edge_key(outer[i], outer[(i + 1) % len(outer)]) for i in range(len(outer))} if len(outer) > 1 else set()
    gc = nx.Graph()
    gc.add_nodes_from(outer)
    gc.add_edges_from(c_edges)
    # (a) outerplane: every vertex of C lies on C's own outer walk
    ccc = planarize(Drawing.build({x: hp.a.positions[x] for x in gc.nodes}, c_edges))
    if set(ccc.walks[next(iter(ccc.component_outer.values()))]) != set(gc.nodes):
        raise InternalInvariantError("chain property (a): C is not outerplane")

    adj = hp.a.graph.adjacency()
    tags = {}
    for x in gc.nodes:
        nu, nv = u in adj[x], v in adj[x]
        tags[x] = "both" if nu and nv else "u" if nu else "v" if nv else "none"
    d, d_prime = hp.d, _inner_face_vertex(hp)

    if gc.number_of_edges() == 0:
        raise InternalInvariantError("chain has no edges")
    blocks = [frozenset(map(lambda e: edge_key(*e), b)) for b in nx.biconnected_component_edges(gc)]
    block_vs = [frozenset(x for e in b for x in e) for b in blocks]
    cuts = set(nx.articulation_points(gc))
    # (b) blocks are cycles or single edges
    for bv, be in zip(block_vs, blocks):
        if not (len(be) == 1 or len(be) == len(bv)):
            raise InternalInvariantError(f"chain property (b): block {sorted(bv)} is neither an edge nor a cycle")
    # (c) cutvertices see both u and v
    for c in cuts:
        if tags[c] != "both":
            raise InternalInvariantError(f"chain property (c): cutvertex {c} is not adjacent to both u and v")
    # (d) the block-cut tree is a path
    for bv in block_vs:
        if len(bv & cuts) > 2:
            raise InternalInvariantError("chain property (d): a block holds three cutvertices")
    for c in cuts:
        if sum(c in bv for bv in block_vs) != 2:
            raise InternalInvariantError(f"chain property (d): cutvertex {c} is in more than two blocks")
    # (e) tags of non-cutvertices
    ends = [i for i, bv in enumerate(block_vs) if len(bv & cuts) <= 1]
    for x in gc.nodes:
        if x in cuts:
            continue
        if x in (d, d_prime):
            if tags[x] != "both" or not any(x in block_vs[i] for i in ends):
                raise InternalInvariantError(f"chain property (e): {x} is misplaced")
        elif tags[x] not in ("u", "v"):
            raise InternalInvariantError(f"chain property (e): {x} is adjacent to {tags[x]} of u, v")

    # walk the block path from d' up to d
    order, nodes = [], [d_prime]
    current = d_prime
    used = set()
    while current != d:
        nxt = [i for i, bv in enumerate(block_vs) if current in bv and i not in used]
        if len(nxt) != 1:
            raise InternalInvariantError("chain property (d): block path is ambiguous")
        i = nxt[0]
        used.add(i)
        exits = [x for x in block_vs[i] if x != current and (x in cuts or x == d)]
        if len(exits) != 1:
            raise InternalInvariantError("chain property (d): block has no unique exit")
        order.append(i)
        current = exits[0]
        nodes.append(current)
    if len(used) != len(blocks):
        raise InternalInvariantError("chain property (d): blocks off the d'-d path")

    sides = []
    for k, i in enumerate(order):
        lo, hi = nodes[k], nodes[k + 1]
        sides.append(_cycle_sides(blocks[i], lo, hi, tags))
    return ChainOfCycles(nodes, [block_vs[i] for i in order], [blocks[i] for i in order], sides, tags, d, d_prime)


def _cycle_sides(edges: FrozenSet[Edge], lo: str, hi: str, tags) -> Dict[str, List[str]]:
    if len(edges) == 1:
        return {"u": [], "v": []}
    nbr: Dict[str, List[str]] = {}
    for x, y in edges:
        nbr.setdefault(x, []).append(y)
        nbr.setdefault(y, []).append(x)
    out = {"u": [], "v": []}
    for first in nbr[lo]:
        path, prev, cur = [], lo, first
        while cur != hi:
            path.append(cur)
            prev, cur = cur, next(y for y in nbr[cur] if y != prev)
        if not path:
            continue
        kinds = {tags[x] for x in path}
        if len(kinds) != 1 or not kinds <= {"u", "v"}:
            raise InternalInvariantError(f"cycle side {path} mixes u- and v-neighbours")
        out[kinds.pop()] = path
    return out


# --- skinny drawings ----------------------------------------------------------------------------

def _arc_points(y_lo: float, y_hi: float, k: int, sign: int, theta: float) -> List[Tuple[float, float]]:
    """k points on a circular arc from (0, y_lo) to (0, y_hi), bulging towards
    ``sign`` * x, whose tangents at the ends make angle ``theta`` with the y axis."""
    chord = y_hi - y_lo
    rho = chord / (2 * math.sin(theta))
    cx, cy = -sign * rho * math.cos(theta), (y_lo + y_hi) / 2
    pts = []
    for j in range(1, k + 1):
        alpha = -theta + 2 * theta * j / (k + 1)
        pts.append((cx + sign * rho * math.cos(alpha), cy + rho * math.sin(alpha)))
    return pts


def build_skinny_drawing(chain: ChainOfCycles, hp: HPrime, params: HalfDiskParams) -> SkinnyDrawing:
    radius, theta = params.radius, params.phi / 2
    m = len(chain.blocks)
    local: Dict[str, Tuple[float, float]] = {}
    ys = [radius * (0.15 + 0.7 * i / m) for i in range(m + 1)]
    for y, x in zip(ys, chain.nodes):
        local[x] = (0.0, y)
    cycles = []
    for i, sides in enumerate(chain.sides):
        lo, hi = chain.nodes[i], chain.nodes[i + 1]
        for tag, sign in (("u", -1), ("v", 1)):
            for x, p in zip(sides[tag], _arc_points(ys[i], ys[i + 1], len(sides[tag]), sign, theta)):
                local[x] = p
        if len(chain.block_edges[i]) > 1:
            # counterclockwise: up the v side, down the u side
            cycles.append([lo] + sides["v"] + [hi] + sides["u"][::-1])
    inner = hp.riders - set(local)
    for cyc in cycles:
        poly = [hp.a.positions[x] for x in cyc]
        inside = {x for x in inner if point_in_polygon(hp.a.positions[x], poly, check_simple=False)
                  is Location.INSIDE}
        if not inside:
            continue
        inner -= inside
        keep = set(cyc) | inside
        sub = subdrawing(hp.a, keep)
        ws = fit_weights(sub, boundary=cyc)
        xy = _solve(ws, ws.vals, np.array([local[x] for x in cyc]))
        for j, x in enumerate(ws.names):
            local[x] = (float(xy[j, 0]), float(xy[j, 1]))
    if inner:
        raise InternalInvariantError(f"vertices outside every cycle of the chain: {sorted(inner)[:3]}")
    return SkinnyDrawing(local, cycles)


def skinny_world(hp: HPrime, skinny: SkinnyDrawing, which: str) -> Drawing:
    base = hp.a if which == "a" else hp.b
    w, ex, ey = edge_frame([float(c) for c in base.positions[hp.u]],
                           [float(c) for c in base.positions[hp.v]], hp.side)
    pos = {x: from_local(c, w, ex, ey) for x, c in skinny.local.items()}
    pos[hp.u] = base.positions[hp.u]
    pos[hp.v] = base.positions[hp.v]
    return base.with_positions(pos)


def check_skinny(chain: ChainOfCycles, skinny: SkinnyDrawing, params: HalfDiskParams) -> Dict[str, bool]:
    loc = skinny.local
    cyc_vs = {x for c in skinny.cycles for x in c} | set(chain.nodes)
    r1 = all(math.hypot(*loc[x]) < params.radius and loc[x][1] > 0 for x in cyc_vs)
    r2 = all(is_strictly_convex([exact(loc[x]) for x in c]) for c in skinny.cycles)
    r3 = all(loc[x][0] == 0.0 and loc[x][1] > 0 for x in chain.nodes)
    tan_phi = math.tan(params.phi)
    r4 = True
    for c in skinny.cycles:
        for i in range(len(c)):
            p, q = loc[c[i]], loc[c[(i + 1) % len(c)]]
            if not abs(q[0] - p[0]) < tan_phi * abs(q[1] - p[1]):
                r4 = False
    return {"R.1": r1, "R.2": r2, "R.3": r3, "R.4": r4}


# --- skinnify stages -------------------------------------------------------------------------------

def skinnify_stage(hp: HPrime, source: Drawing, target: Drawing, apex: Point) -> Stage:
    """Fixed-boundary convex morph of H' from ``source`` to ``target`` inside
    the piece, using an extra apex d* so the outer triangle (u, v, d*) stays put."""
    if source.positions == target.positions:
        return ConstantStage(source.positions)
    u, v = hp.u, hp.v
    pts = [p for dr in (source, target) for x, p in dr.positions.items() if x not in (u, v)]
    pd = _dummy_position(source.positions[u], source.positions[v], apex, pts, start=Fraction(1, 16))
    star = hp.d + "*"
    extra = [edge_key(u, star), edge_key(v, star), edge_key(hp.d, star)]
    sa = source.add({star: pd}, extra)
    sb = target.add({star: pd}, extra)
    inst = ConvexInstance.from_drawings(sa, sb)
    stages = build_convex_morph(inst, fixed_boundary=True)
    return RestrictStage(stages[0], source.vertices)


# --- recursive case ----------------------------------------------------------------------------------

def _recursive_stage(a: Drawing, b: Drawing, levels: LevelAssignment, ctx: _Context) -> Stage:
    ell = levels.max_level
    keep = {x for x, lv in levels.level.items() if lv < ell}
    qa, qb = subdrawing(a, keep), subdrawing(b, keep)
    q_stage = _morph_stage(qa, qb, ctx)
    frames = _FrameCache(q_stage)
    pieces = extract_pieces(qa, a, levels)

    pre, post, global_stage = [], [], q_stage
    for piece in pieces:
        hp = build_H_prime(piece, a, b, prefix=ctx.prefix("h"), log=ctx.trace.triangulations)
        chain = extract_chain_of_cycles(hp)
        params = _half_disk_protocol(piece, frames)
        skinny = build_skinny_drawing(chain, hp, params)
        checks = check_skinny(chain, skinny, params)
        sk_a, sk_b = skinny_world(hp, skinny, "a"), skinny_world(hp, skinny, "b")
        checks["equivalent_a"] = topologically_equivalent(hp.a, sk_a).equivalent
        checks["equivalent_b"] = topologically_equivalent(hp.b, sk_b).equivalent
        if not all(checks.values()):
            bad = sorted(k for k, ok in checks.items() if not ok)
            raise InternalInvariantError(f"skinny drawing for piece {piece.base} fails {bad}")
        pre.append(skinnify_stage(hp, hp.a, sk_a, hp.apex_a))
        post.append(skinnify_stage(hp, sk_b, hp.b, hp.apex_b))
        global_stage = RigidFollowStage(global_stage, hp.u, hp.v, hp.side,
                                        {x: skinny.local[x] for x in sorted(hp.riders)})
        ctx.trace.pieces.append(PieceRecord(piece, hp, chain, params, skinny, checks))
        ctx.rider_groups.append(tuple(sorted(hp.riders)))

    q_vertices = sorted(q_stage.vertices)
    phase1 = ParallelStage([ConstantStage({x: a.positions[x] for x in q_vertices})] + pre)
    phase3 = ParallelStage([ConstantStage({x: b.positions[x] for x in q_vertices})] + post)
    seq = SequenceStage([(phase1, SKINNY_SHARE), (global_stage, 1 - 2 * SKINNY_SHARE), (phase3, SKINNY_SHARE)])
    return RestrictStage(seq, a.vertices)
