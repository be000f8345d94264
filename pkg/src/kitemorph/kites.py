"""Kite detection, the kite-planarity conditions, vertex levels and the
optimal / IC-planar classifiers."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .drawing import (
    Drawing,
    Edge,
    Violation,
    crossings,
    edge_key,
    planarize,
    topologically_equivalent,
    validate_drawing,
)
from .geometry import CrossKind, Location, Point, angle_key, point_in_polygon, point_on_segment, segments_cross
from .graphs import adjacency, is_triconnected


class KitePlanarityError(ValueError):
    pass


class AugmentationIncompatible(ValueError):
    pass


class InternalInvariantError(RuntimeError):
    pass


@dataclass(frozen=True)
class Kite:
    corners: Tuple[str, str, str, str]          # counterclockwise around the crossing
    kite_edges: Tuple[Edge, Edge, Edge, Edge]   # corners[i] -- corners[i+1]
    crossing_edges: Tuple[Edge, Edge]
    crossing_point: Point
    contained: FrozenSet[str] = frozenset()

    @property
    def empty(self) -> bool:
        return not self.contained

    def quad(self, positions) -> List:
        return [positions[c] for c in self.corners]


def _kite(d: Drawing, e1: Edge, e2: Edge, x: Point) -> Kite:
    ends = list(e1) + list(e2)
    corners = tuple(sorted(ends, key=lambda v: angle_key((d.positions[v][0] - x[0], d.positions[v][1] - x[1]))))
    kedges = tuple(edge_key(corners[i], corners[(i + 1) % 4]) for i in range(4))
    quad = [d.positions[c] for c in corners]
    inside = frozenset(v for v in d.vertices if v not in ends
                       and point_in_polygon(d.positions[v], quad, check_simple=False) is Location.INSIDE)
    return Kite(corners, kedges, (e1, e2), x, inside)


def _crossed_count(cross) -> Dict[Edge, List[Edge]]:
    by_edge: Dict[Edge, List[Edge]] = defaultdict(list)
    for e1, e2 in cross:
        by_edge[e1].append(e2)
        by_edge[e2].append(e1)
    return by_edge


def detect_kites(d: Drawing) -> List[Kite]:
    cross = crossings(d)
    for e, others in _crossed_count(cross).items():
        if len(others) > 1:
            raise KitePlanarityError(f"P.1: edge {e} is crossed {len(others)} times")
    return [_kite(d, e1, e2, x) for (e1, e2), x in sorted(cross.items())]


@dataclass
class KitePlanarityReport:
    ok: bool
    violations: List[Violation] = field(default_factory=list)
    missing_kite_edges: List[Edge] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations],
                "missing_kite_edges": [list(e) for e in self.missing_kite_edges]}


def segment_drawable(d: Drawing, u: str, v: str) -> bool:
    """Whether the straight segment uv can be added without crossing any edge
    or passing through a vertex."""
    a, b = d.positions[u], d.positions[v]
    for w, p in d.positions.items():
        if w in (u, v):
            continue
        if point_on_segment(p, a, b):
            return False
    for e in d.edges:
        kind = segments_cross((a, b), d.segment(e)).kind
        if kind is CrossKind.PROPER or kind is CrossKind.DEGENERATE:
            return False
    return True


def validate_kite_planarity(d: Drawing) -> KitePlanarityReport:
    violations: List[Violation] = list(validate_drawing(d))
    if violations:
        return KitePlanarityReport(False, violations)
    cross = crossings(d)
    by_edge = _crossed_count(cross)
    for e in sorted(by_edge):
        if len(by_edge[e]) > 1:
            violations.append(Violation("P.1", (e,) + tuple(sorted(by_edge[e])),
                                        f"edge {e} crossed {len(by_edge[e])} times"))
    kites = [_kite(d, e1, e2, x) for (e1, e2), x in sorted(cross.items())]
    missing = []
    checked = set()
    for k in kites:
        for ke in k.kite_edges:
            if ke in checked:
                continue
            checked.add(ke)
            if ke in d.edges:
                if ke in by_edge:
                    violations.append(Violation("P.2", (ke,) + tuple(by_edge[ke]), f"kite edge {ke} is crossed"))
            elif segment_drawable(d, *ke):
                missing.append(ke)
            else:
                violations.append(Violation("P.2", (ke,), f"kite edge {ke} cannot be drawn uncrossed"))
    adj = d.graph.adjacency()
    for k in kites:
        for c in k.corners:
            for x in sorted(adj[c] & k.contained):
                e = edge_key(c, x)
                if e in by_edge:
                    violations.append(Violation("P.3", (e,) + tuple(by_edge[e]),
                                                f"binding edge {e} is crossed"))
    # one violation per offending binding edge
    uniq, seen = [], set()
    for v in violations:
        key = (v.kind, v.items)
        if key not in seen:
            seen.add(key)
            uniq.append(v)
    return KitePlanarityReport(not uniq, uniq, sorted(missing))


def complete_partial_kites(a: Drawing, b: Drawing) -> Tuple[Drawing, Drawing, List[Edge]]:
    ra, rb = validate_kite_planarity(a), validate_kite_planarity(b)
    if not ra.ok or not rb.ok:
        raise KitePlanarityError(f"input is not kite-planar: {(ra.violations or rb.violations)[0]}")
    missing = sorted(set(ra.missing_kite_edges) | set(rb.missing_kite_edges))
    if not missing:
        return a, b, []
    for e in missing:
        for d, r in ((a, ra), (b, rb)):
            if e not in r.missing_kite_edges:
                raise AugmentationIncompatible(f"kite edge {e} is not drawable in both drawings")
    a2, b2 = a.add(edges=missing), b.add(edges=missing)
    for d in (a2, b2):
        rep = validate_kite_planarity(d)
        if not rep.ok or rep.missing_kite_edges:
            raise AugmentationIncompatible(f"completed drawing is not kite-planar: {rep.violations[:1]}")
    eq = topologically_equivalent(a2, b2)
    if not eq.equivalent:
        raise AugmentationIncompatible(f"completions are not equivalent: {eq.first_mismatch}")
    return a2, b2, missing


@dataclass(frozen=True)
class LevelAssignment:
    level: Dict[str, int]
    max_level: int


def assign_levels(d: Drawing, kites: Optional[List[Kite]] = None) -> LevelAssignment:
    kites = detect_kites(d) if kites is None else kites
    containers: Dict[str, List[Kite]] = defaultdict(list)
    for k in kites:
        for v in k.contained:
            containers[v].append(k)
    level = {v: 0 for v in d.vertices}
    work = sorted(containers)
    rounds = 0
    while work:
        rounds += 1
        if rounds > len(d.vertices) + 2:
            raise InternalInvariantError("level recurrence did not converge")
        changed = []
        for v in work:
            new = 1 + max(level[c] for k in containers[v] for c in k.corners)
            if new != level[v]:
                level[v] = new
                changed.append(v)
        # only vertices inside kites whose corners changed need revisiting
        touched = set(changed)
        work = sorted(v for v in containers if any(set(k.corners) & touched for k in containers[v]))
    for k in kites:
        if len({level[c] for c in k.corners}) != 1:
            raise InternalInvariantError(f"kite {k.corners} has corners on different levels")
    return LevelAssignment(level, max(level.values(), default=0))


def classify_drawing(d: Drawing) -> Dict[str, bool]:
    cross = crossings(d)
    by_edge = _crossed_count(cross)
    one_planar = all(len(v) == 1 for v in by_edge.values())
    n, m = len(d.vertices), len(d.edges)
    kites = [_kite(d, e1, e2, x) for (e1, e2), x in sorted(cross.items())] if one_planar else []
    all_kite_edges = all(ke in d.edges and ke not in by_edge for k in kites for ke in k.kite_edges)

    ends = [v for e in by_edge for v in e]
    matching = len(ends) == len(set(ends))
    ic = one_planar and bool(cross) and matching and all_kite_edges

    optimal = False
    if one_planar and cross and m == 4 * n - 9 and all_kite_edges:
        skel = Drawing.build(d.positions, [e for e in d.edges if e not in by_edge])
        adj = adjacency(skel.vertices, skel.edges)
        if is_triconnected(adj):
            cc = planarize(skel)
            quads = {frozenset(k.corners) for k in kites}
            outer = cc.walks[cc.outer_cell[0]] if len(cc.outer_cell) == 1 else ()
            ok = len(outer) == 3
            n_quads = 0
            for i, w in enumerate(cc.walks):
                if i in cc.outer_cell:
                    continue
                if len(w) == 4 and frozenset(w) in quads:
                    n_quads += 1
                elif len(w) != 3:
                    ok = False
            optimal = ok and n_quads == len(kites)
    return {"optimal1Planar": optimal, "kiteAugmentedICPlanar": ic}
