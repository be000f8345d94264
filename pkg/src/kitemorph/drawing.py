"""Graphs, straight-line drawings, planarization and topological equivalence."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .geometry import (
    CrossKind,
    Point,
    angle_key,
    exact,
    orient,
    point_in_open_segment,
    segments_cross,
    signed_area2,
    winding_contains,
)

Edge = Tuple[str, str]


class DrawingError(ValueError):
    pass


class GraphMismatchError(DrawingError):
    pass


def edge_key(u: str, v: str) -> Edge:
    if u == v:
        raise DrawingError(f"loop at {u!r}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertices: frozenset
    edges: frozenset

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Tuple[str, str]]) -> "Graph":
        vs = frozenset(vertices)
        es = set()
        for u, v in edges:
            e = edge_key(u, v)
            if u not in vs or v not in vs:
                raise DrawingError(f"edge {e} references an unknown vertex")
            if e in es:
                raise DrawingError(f"duplicate edge {e}")
            es.add(e)
        return cls(vs, frozenset(es))

    def adjacency(self) -> Dict[str, set]:
        adj: Dict[str, set] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


class Drawing:
    """A graph together with an injective map from vertices to points.

    Positions are stored as exact :class:`~kitemorph.geometry.Point` values.
    Instances are treated as immutable.
    """

    __slots__ = ("graph", "positions")

    def __init__(self, graph: Graph, positions: Mapping[str, object]):
        missing = graph.vertices - set(positions)
        if missing:
            raise DrawingError(f"no position for vertices {sorted(missing)}")
        self.graph = graph
        self.positions: Dict[str, Point] = {v: exact(positions[v]) for v in graph.vertices}

    @classmethod
    def build(cls, positions: Mapping[str, object], edges: Iterable[Tuple[str, str]]) -> "Drawing":
        return cls(Graph.build(positions.keys(), edges), positions)

    @property
    def vertices(self) -> frozenset:
        return self.graph.vertices

    @property
    def edges(self) -> frozenset:
        return self.graph.edges

    def segment(self, e: Edge) -> Tuple[Point, Point]:
        return self.positions[e[0]], self.positions[e[1]]

    def with_positions(self, positions: Mapping[str, object]) -> "Drawing":
        return Drawing(self.graph, positions)

    def add(self, positions: Mapping[str, object] = (), edges: Iterable[Edge] = ()) -> "Drawing":
        pos = dict(self.positions)
        pos.update(dict(positions))
        return Drawing(Graph.build(pos.keys(), list(self.edges) + list(edges)), pos)

    def __eq__(self, other):
        return (isinstance(other, Drawing) and self.graph == other.graph
                and self.positions == other.positions)

    def __repr__(self):
        return f"Drawing(n={len(self.vertices)}, m={len(self.edges)})"


def subdrawing(d: Drawing, keep: Iterable[str]) -> Drawing:
    keep = set(keep)
    unknown = keep - d.vertices
    if unknown:
        raise DrawingError(f"unknown vertices {sorted(unknown)}")
    edges = [e for e in d.edges if e[0] in keep and e[1] in keep]
    return Drawing(Graph.build(keep, edges), {v: d.positions[v] for v in keep})


def remove_edges(d: Drawing, edges: Iterable[Edge]) -> Drawing:
    drop = {edge_key(*e) for e in edges}
    unknown = drop - d.edges
    if unknown:
        raise DrawingError(f"unknown edges {sorted(unknown)}")
    return Drawing(Graph(d.vertices, d.edges - drop), d.positions)


# --- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    items: tuple
    message: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "items": [list(i) if isinstance(i, tuple) else i for i in self.items],
                "message": self.message}


def _down(x) -> float:
    try:
        f = float(x)
    except OverflowError:
        return -math.inf
    return f - abs(f) * 1e-15 - 1e-300 if math.isfinite(f) else -math.inf


def _up(x) -> float:
    try:
        f = float(x)
    except OverflowError:
        return math.inf
    return f + abs(f) * 1e-15 + 1e-300 if math.isfinite(f) else math.inf


def _float_bbox(a, b):
    """Float box containing the exact box of segment ab (rounded outwards)."""
    return (_down(min(a[0], b[0])), _down(min(a[1], b[1])), _up(max(a[0], b[0])), _up(max(a[1], b[1])))


def _boxes_meet(p, q) -> bool:
    return not (p[2] < q[0] or q[2] < p[0] or p[3] < q[1] or q[3] < p[1])


def edge_pairs(d: Drawing):
    """Yield pairs of edges whose bounding boxes meet (plus a few near misses)."""
    edges = sorted(d.edges)
    boxes = [_float_bbox(*d.segment(e)) for e in edges]
    order = sorted(range(len(edges)), key=lambda i: boxes[i][0])
    active: List[int] = []
    for i in order:
        bx = boxes[i]
        active = [j for j in active if boxes[j][2] >= bx[0]]
        for j in active:
            if _boxes_meet(bx, boxes[j]):
                e1, e2 = edges[i], edges[j]
                yield (e1, e2) if e1 < e2 else (e2, e1)
        active.append(i)


def crossings(d: Drawing) -> Dict[Tuple[Edge, Edge], Point]:
    """All proper crossings, keyed by the sorted edge pair."""
    out = {}
    for e1, e2 in edge_pairs(d):
        c = segments_cross(d.segment(e1), d.segment(e2))
        if c.kind is CrossKind.PROPER:
            out[(e1, e2)] = c.point
    return out


def _collinear_overlap(s1, s2) -> bool:
    a, b = s1
    c, d = s2
    return orient(a, b, c) == 0 and orient(a, b, d) == 0 and \
        segments_cross(s1, s2).kind is CrossKind.DEGENERATE


def validate_drawing(d: Drawing) -> List[Violation]:
    out: List[Violation] = []
    seen: Dict[Point, str] = {}
    for v in sorted(d.vertices):
        p = d.positions[v]
        if p in seen:
            out.append(Violation("CoincidentVertices", (seen[p], v), "two vertices share a point"))
        else:
            seen[p] = v
    overlaps = []
    for e1, e2 in edge_pairs(d):
        s1, s2 = d.segment(e1), d.segment(e2)
        if segments_cross(s1, s2).kind is CrossKind.DEGENERATE and _collinear_overlap(s1, s2):
            overlaps.append((e1, e2))
    explained = {(v, e) for e1, e2 in overlaps for e, other in ((e1, e2), (e2, e1)) for v in other}
    fpos = {v: (float(p[0]), float(p[1])) for v, p in d.positions.items()}
    for e in sorted(d.edges):
        a, b = d.segment(e)
        box = _float_bbox(a, b)
        for v in sorted(d.vertices):
            if v in e or (v, e) in explained:
                continue
            p, fp = d.positions[v], fpos[v]
            if box[0] <= fp[0] <= box[2] and box[1] <= fp[1] <= box[3] and point_in_open_segment(p, a, b):
                out.append(Violation("VertexOnEdge", (v, e), f"vertex {v} lies on edge {e}"))
    for e1, e2 in overlaps:
        out.append(Violation("Degenerate", (e1, e2), "edges overlap along a segment"))
    return out


# --- planarization ----------------------------------------------------------

Node = object  # vertex id (str) or crossing node ("X", e1, e2)


def node_key(n) -> tuple:
    return (0, n) if isinstance(n, str) else (1,) + tuple(n[1:])


def crossing_node(e1: Edge, e2: Edge) -> tuple:
    return ("X",) + ((e1, e2) if e1 < e2 else (e2, e1))


def canonical_cycle(seq: tuple) -> tuple:
    """Rotate a cyclic sequence of nodes so it starts at its smallest key."""
    if not seq:
        return seq
    keys = [node_key(n) for n in seq]
    n = len(seq)
    best = min(range(n), key=lambda i: [keys[(i + k) % n] for k in range(n)])
    return tuple(seq[best:] + seq[:best])


@dataclass
class CellComplex:
    positions: Dict[object, Point]
    rotation: Dict[object, tuple]
    crossing_pairs: frozenset
    edge_nodes: Dict[Edge, tuple]          # nodes along each edge, in order from e[0]
    walks: List[tuple]                     # every boundary walk; dart i is walk[i] -> walk[i+1]
    walk_area2: List[object]
    component: Dict[object, int]
    component_outer: Dict[int, int]        # component -> index of its outer walk
    component_container: Dict[int, Optional[int]] = field(default_factory=dict)

    @property
    def nodes(self):
        return self.positions.keys()

    @property
    def outer_cell(self) -> List[int]:
        return [self.component_outer[c] for c, w in self.component_container.items() if w is None]

    def walk_points(self, i: int) -> List[Point]:
        return [self.positions[n] for n in self.walks[i]]

    def cells(self) -> List[List[int]]:
        """Each cell as a list of walk indices: bounded cells first (the
        enclosing walk, then holes), the unbounded cell last."""
        holes: Dict[Optional[int], List[int]] = {}
        for c, w in self.component_container.items():
            holes.setdefault(w, []).append(self.component_outer[c])
        outers = set(self.component_outer.values())
        cells = []
        for i in range(len(self.walks)):
            if i in outers:
                continue
            cells.append([i] + sorted(holes.get(i, [])))
        cells.append(sorted(holes.get(None, [])))
        return cells

    def euler_ok(self) -> bool:
        comps: Dict[int, List[int]] = {}
        for n, c in self.component.items():
            comps.setdefault(c, [0, 0, 0])
            comps[c][0] += 1
            comps[c][1] += len(self.rotation[n])
        for i, w in enumerate(self.walks):
            if w:
                comps[self.component[w[0]]][2] += 1
        return all(v - deg // 2 + f == 2 for v, deg, f in comps.values())

    def canonical_walk(self, i: int) -> tuple:
        return tuple(node_key(n) for n in canonical_cycle(self.walks[i]))


def planarize(d: Drawing) -> CellComplex:
    cross = crossings(d)
    positions: Dict[object, Point] = dict(d.positions)
    along: Dict[Edge, List[Tuple[object, object]]] = {e: [] for e in d.edges}
    for (e1, e2), p in cross.items():
        x = crossing_node(e1, e2)
        positions[x] = p
        for e in (e1, e2):
            a = d.positions[e[0]]
            # squared distance from e[0] orders crossings along the edge
            along[e].append(((p[0] - a[0]) ** 2 + (p[1] - a[1]) ** 2, x))
    nbrs: Dict[object, List[object]] = {n: [] for n in positions}
    edge_nodes = {}
    for e, items in along.items():
        chain = (e[0],) + tuple(x for _, x in sorted(items, key=lambda t: t[0])) + (e[1],)
        edge_nodes[e] = chain
        for a, b in zip(chain, chain[1:]):
            nbrs[a].append(b)
            nbrs[b].append(a)
    rotation = {}
    for n, ns in nbrs.items():
        p = positions[n]
        rotation[n] = tuple(sorted(ns, key=lambda m: angle_key((positions[m][0] - p[0], positions[m][1] - p[1]))))
    index = {n: {m: i for i, m in enumerate(r)} for n, r in rotation.items()}

    walks: List[tuple] = []
    used = set()
    for n in sorted(rotation, key=node_key):
        for m in rotation[n]:
            if (n, m) in used:
                continue
            walk = []
            a, b = n, m
            while (a, b) not in used:
                used.add((a, b))
                walk.append(a)
                rb = rotation[b]
                c = rb[(index[b][a] - 1) % len(rb)]
                a, b = b, c
            walks.append(tuple(walk))
    # components on the planarized graph
    component: Dict[object, int] = {}
    for s in sorted(positions, key=node_key):
        if s in component:
            continue
        cid = len(set(component.values()))
        stack = [s]
        component[s] = cid
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y not in component:
                    component[y] = cid
                    stack.append(y)
    for n in positions:
        if not nbrs[n]:
            walks.append((n,))
    areas = [signed_area2([positions[n] for n in w]) if len(w) > 1 else 0 for w in walks]
    comp_outer: Dict[int, int] = {}
    for i, w in enumerate(walks):
        # the outer walk of a component is the only one with non-positive area
        if areas[i] <= 0:
            comp_outer[component[w[0]]] = i
    cc = CellComplex(positions, rotation, frozenset(cross), edge_nodes, walks, areas, component, comp_outer)
    cc.component_container = _containment(cc)
    return cc


def _containment(cc: CellComplex) -> Dict[int, Optional[int]]:
    out: Dict[int, Optional[int]] = {}
    comps = sorted(cc.component_outer)
    if len(comps) == 1:
        return {comps[0]: None}
    bounded = [i for i, a in enumerate(cc.walk_area2) if a > 0]
    for c in comps:
        rep = cc.positions[cc.walks[cc.component_outer[c]][0]]
        best, best_area = None, None
        for i in bounded:
            if cc.component[cc.walks[i][0]] == c:
                continue
            if winding_contains(rep, cc.walk_points(i)):
                if best is None or cc.walk_area2[i] < best_area:
                    best, best_area = i, cc.walk_area2[i]
        out[c] = best
    return out


# --- equivalence ------------------------------------------------------------

@dataclass
class EquivalenceReport:
    equivalent: bool
    first_mismatch: Optional[str] = None

    def __bool__(self):
        return self.equivalent

    def to_json(self) -> dict:
        return {"equivalent": self.equivalent, "first_mismatch": self.first_mismatch}


def signature(cc: CellComplex) -> dict:
    """Labeling-invariant description of a cell complex, used for comparison."""
    rot = {node_key(n): tuple(node_key(m) for m in canonical_cycle(r)) for n, r in cc.rotation.items()}
    comp_key = {}
    for c in cc.component_outer:
        members = [n for n, k in cc.component.items() if k == c]
        comp_key[c] = min(node_key(n) for n in members)
    outer = {comp_key[c]: cc.canonical_walk(i) for c, i in cc.component_outer.items()}
    container = {comp_key[c]: (cc.canonical_walk(i) if i is not None else None)
                 for c, i in cc.component_container.items()}
    return {"crossings": cc.crossing_pairs, "rotation": rot, "outer": outer, "container": container}


def compare_complexes(ca: CellComplex, cb: CellComplex) -> EquivalenceReport:
    sa, sb = signature(ca), signature(cb)
    if sa["crossings"] != sb["crossings"]:
        diff = sorted(sa["crossings"] ^ sb["crossings"])
        return EquivalenceReport(False, f"crossing pairs differ: {diff[0]}")
    for n in sorted(sa["rotation"]):
        if sa["rotation"][n] != sb["rotation"][n]:
            return EquivalenceReport(
                False, f"rotation at {n[1:]}: expected {sa['rotation'][n]}, found {sb['rotation'][n]}")
    if sa["outer"] != sb["outer"]:
        return EquivalenceReport(False, "outer walk of a component differs")
    if sa["container"] != sb["container"]:
        return EquivalenceReport(False, "component nesting differs")
    return EquivalenceReport(True)


def topologically_equivalent(a: Drawing, b: Drawing) -> EquivalenceReport:
    if a.graph != b.graph:
        raise GraphMismatchError("drawings are of different graphs")
    return compare_complexes(planarize(a), planarize(b))
