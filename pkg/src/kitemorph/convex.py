"""Convexity-preserving morphs of almost triangulated plane graphs.

Each interior vertex is written as a positive convex combination of its
neighbours (mean value coordinates).  With the outer triangle pinned, the
linear system "every interior vertex is the weighted average of its
neighbours" has a unique solution, and for any positive weights that solution
is a planar drawing whose inner faces are convex.  Interpolating the weights
fitted to the two endpoint drawings therefore gives a morph in which every
frame is convex; a small residual blend makes both endpoints exact.

When the outer triangles differ, two affine stages move the boundary, each
interpolated through its polar decomposition so the linear part never
becomes singular.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .drawing import Drawing, DrawingError, Graph, planarize, topologically_equivalent
from .geometry import CONVEX_MARGIN, Point, angle_key, convex_margin_ok, is_strictly_convex
from .graphs import adjacency, is_triconnected
from .morph import ConstantStage, Frame, MorphError, Stage, register_stage, sample_times


class InputNotConvex(DrawingError):
    pass


class ConvexityCertificationError(RuntimeError):
    pass


@dataclass
class ConvexInstance:
    graph: Graph
    boundary: Tuple[str, str, str]          # counterclockwise in ``a``
    faces: Tuple[Tuple[str, ...], ...]      # bounded faces, counterclockwise walks
    a: Drawing
    b: Drawing

    @classmethod
    def from_drawings(cls, a: Drawing, b: Drawing) -> "ConvexInstance":
        eq = topologically_equivalent(a, b)
        if not eq.equivalent:
            raise DrawingError(f"drawings are not equivalent: {eq.first_mismatch}")
        cc = planarize(a)
        if cc.crossing_pairs:
            raise DrawingError("convex morphs need planar drawings")
        outer = cc.outer_cell
        if len(outer) != 1 or len(set(cc.walks[outer[0]])) != 3 or len(cc.walks[outer[0]]) != 3:
            raise InputNotConvex("outer face is not a triangle")
        boundary = tuple(reversed(cc.walks[outer[0]]))
        faces = tuple(w for i, w in enumerate(cc.walks) if i != outer[0])
        for d in (a, b):
            for w in faces:
                if not is_strictly_convex([d.positions[v] for v in w]):
                    raise InputNotConvex(f"face {w} is not strictly convex")
        if not is_triconnected(adjacency(a.vertices, a.edges)):
            raise InputNotConvex("graph is not triconnected")
        return cls(a.graph, boundary, faces, a, b)


# --- weights ----------------------------------------------------------------------

@dataclass(frozen=True)
class WeightSystem:
    """Sparse row-stochastic weights: row k expresses interior vertex
    ``interior[k]`` as a combination of vertices indexed into ``names``."""
    names: Tuple[str, ...]       # boundary vertices first, then interior vertices
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    n_boundary: int = 3

    @property
    def boundary(self) -> Tuple[str, ...]:
        return self.names[:self.n_boundary]

    @property
    def interior(self) -> Tuple[str, ...]:
        return self.names[self.n_boundary:]

    def neighbor_weights(self, v: str) -> Dict[str, float]:
        k = self.names.index(v) - self.n_boundary
        mask = self.rows == k
        return {self.names[c]: float(w) for c, w in zip(self.cols[mask], self.vals[mask])}

    def blend(self, other: "WeightSystem", t: float) -> np.ndarray:
        return (1.0 - t) * self.vals + t * other.vals

    def same_pattern(self, other: "WeightSystem") -> bool:
        return (self.names == other.names and self.n_boundary == other.n_boundary and np.array_equal(self.rows, other.rows)
                and np.array_equal(self.cols, other.cols))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        sums = np.bincount(self.rows, weights=self.vals, minlength=len(self.interior))
        return bool(np.all(self.vals > 0) and np.all(np.abs(sums - 1.0) <= tol))


def _ccw_neighbors(d: Drawing, v: str, adj) -> List[str]:
    p = d.positions[v]
    return sorted(adj[v], key=lambda u: angle_key((d.positions[u][0] - p[0], d.positions[u][1] - p[1])))


def _mean_value_weights(d: Drawing, v: str, ring: Sequence[str]) -> List[float]:
    p = d.positions[v]
    vec = [(d.positions[u][0] - p[0], d.positions[u][1] - p[1]) for u in ring]
    k = len(vec)
    if k < 3:
        raise InputNotConvex(f"interior vertex {v} has degree {k}")
    tan_half = []
    for i in range(k):
        a, b = vec[i], vec[(i + 1) % k]
        cr = a[0] * b[1] - a[1] * b[0]
        # every angle between consecutive neighbours must stay below pi
        if cr <= 0:
            raise InputNotConvex(f"one-ring of {v} does not contain it in its kernel")
        dot = a[0] * b[0] + a[1] * b[1]
        ra, rb = math.sqrt(float(a[0] ** 2 + a[1] ** 2)), math.sqrt(float(b[0] ** 2 + b[1] ** 2))
        tan_half.append((ra * rb - float(dot)) / float(cr))
    w = []
    for i in range(k):
        r = math.sqrt(float(vec[i][0] ** 2 + vec[i][1] ** 2))
        w.append((tan_half[i - 1] + tan_half[i]) / r)
    s = math.fsum(w)
    return [x / s for x in w]


def fit_weights(d: Drawing, embedding=None, boundary: Sequence[str] = ()) -> WeightSystem:
    """Mean value weights reproducing every interior vertex of ``d``.

    ``embedding`` may be a CellComplex of ``d``; when omitted the neighbour
    order is recomputed from positions.  The boundary is usually the outer
    triangle but any strictly convex cycle works.
    """
    if len(boundary) < 3:
        raise ValueError("boundary needs at least three vertices")
    nb = len(boundary)
    adj = adjacency(d.vertices, d.edges)
    names = tuple(boundary) + tuple(sorted(d.vertices - set(boundary)))
    index = {v: i for i, v in enumerate(names)}
    rows, cols, vals = [], [], []
    for k, v in enumerate(names[nb:]):
        if embedding is not None:
            ring = list(embedding.rotation[v])
        else:
            ring = _ccw_neighbors(d, v, adj)
        # start the ring at its smallest name so equivalent drawings share a sparsity pattern
        s0 = ring.index(min(ring))
        ring = ring[s0:] + ring[:s0]
        for u, w in zip(ring, _mean_value_weights(d, v, ring)):
            rows.append(k)
            cols.append(index[u])
            vals.append(w)
    return WeightSystem(names, np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                        np.array(vals, dtype=float), nb)


def _solve(ws: WeightSystem, vals: np.ndarray, boundary_xy: np.ndarray) -> np.ndarray:
    """Positions of all vertices in ``ws.names`` order."""
    m, nb = len(ws.interior), ws.n_boundary
    out = np.empty((m + nb, 2))
    out[:nb] = boundary_xy
    if m == 0:
        return out
    inner = ws.cols >= nb
    a = sp.csc_matrix((-vals[inner], (ws.rows[inner], ws.cols[inner] - nb)), shape=(m, m))
    a = a + sp.identity(m, format="csc")
    rhs = np.zeros((m, 2))
    bmask = ~inner
    np.add.at(rhs, ws.rows[bmask], vals[bmask, None] * boundary_xy[ws.cols[bmask]])
    lu = spla.splu(a)
    x = lu.solve(rhs)
    # one step of iterative refinement
    x += lu.solve(rhs - a @ x)
    out[nb:] = x
    return out


def solve_positions(weights: WeightSystem, boundary_positions: Sequence, graph: Graph) -> Drawing:
    xy = _solve(weights, weights.vals, np.array([[float(p[0]), float(p[1])] for p in boundary_positions]))
    return Drawing(graph, {v: (xy[i, 0], xy[i, 1]) for i, v in enumerate(weights.names)})


# --- certification ------------------------------------------------------------------

def frame_failure(frame: Mapping[str, Sequence[float]], faces: Sequence[Sequence[str]],
                  boundary: Sequence[str], margin: float = CONVEX_MARGIN) -> Optional[str]:
    """Why ``frame`` is not a convex drawing of the embedding, or None.

    A counterclockwise outer triangle plus counterclockwise strictly convex
    inner faces tile the triangle, so this also certifies planarity.
    """
    tri = [frame[v] for v in boundary]
    if (tri[1][0] - tri[0][0]) * (tri[2][1] - tri[0][1]) - (tri[1][1] - tri[0][1]) * (tri[2][0] - tri[0][0]) <= 0:
        return "outer triangle degenerate or reversed"
    for w in faces:
        if not convex_margin_ok([frame[v] for v in w], margin):
            return f"face {tuple(w)} not strictly convex"
    return None


# --- stages -------------------------------------------------------------------------

def _xy(positions: Mapping[str, Sequence], names: Sequence[str]) -> np.ndarray:
    return np.array([[float(positions[v][0]), float(positions[v][1])] for v in names])


def _frame(names, xy) -> Frame:
    return {v: (float(xy[i, 0]), float(xy[i, 1])) for i, v in enumerate(names)}


@register_stage
class WeightInterpStage(Stage):
    """Fixed outer triangle; interior vertices solve the system with blended weights."""
    kind = "convex"

    def __init__(self, w0: WeightSystem, w1: WeightSystem, boundary_xy, residual0, residual1):
        if not w0.same_pattern(w1):
            raise MorphError("weight systems have different sparsity patterns")
        self.w0, self.w1 = w0, w1
        self.boundary_xy = np.asarray(boundary_xy, dtype=float)
        self.residual0 = np.asarray(residual0, dtype=float)
        self.residual1 = np.asarray(residual1, dtype=float)

    @classmethod
    def between(cls, a: Mapping, b: Mapping, w0: WeightSystem, w1: WeightSystem) -> "WeightInterpStage":
        names = w0.names
        bxy = _xy(a, w0.boundary)
        if not np.array_equal(bxy, _xy(b, w0.boundary)):
            raise MorphError("outer triangle differs between the endpoints")
        r0 = _xy(a, names) - _solve(w0, w0.vals, bxy)
        r1 = _xy(b, names) - _solve(w1, w1.vals, bxy)
        return cls(w0, w1, bxy, r0, r1)

    @property
    def vertices(self):
        return frozenset(self.w0.names)

    def evaluate(self, t):
        xy = _solve(self.w0, self.w0.blend(self.w1, t), self.boundary_xy)
        xy += (1.0 - t) * self.residual0 + t * self.residual1
        return _frame(self.w0.names, xy)

    def to_json(self):
        w0 = self.w0
        return {"kind": self.kind, "names": list(w0.names), "rows": w0.rows.tolist(), "cols": w0.cols.tolist(),
                "weights0": w0.vals.tolist(), "weights1": self.w1.vals.tolist(),
                "boundary": self.boundary_xy.tolist(),
                "residual0": self.residual0.tolist(), "residual1": self.residual1.tolist()}

    @classmethod
    def from_json(cls, data):
        names = tuple(data["names"])
        rows = np.array(data["rows"], dtype=np.int64)
        cols = np.array(data["cols"], dtype=np.int64)
        nb = len(data["boundary"])
        w0 = WeightSystem(names, rows, cols, np.array(data["weights0"], dtype=float), nb)
        w1 = WeightSystem(names, rows, cols, np.array(data["weights1"], dtype=float), nb)
        return cls(w0, w1, data["boundary"], data["residual0"], data["residual1"])


def _affine_between(src: Sequence[Point], dst: Sequence[Point]):
    """Exact affine map (L, t) with L @ src[i] + t = dst[i] for a triangle pair."""
    s1, s2 = src[1] - src[0], src[2] - src[0]
    d1, d2 = dst[1] - dst[0], dst[2] - dst[0]
    det = Fraction(s1[0] * s2[1] - s1[1] * s2[0])
    if det == 0:
        raise InputNotConvex("degenerate boundary triangle")
    inv = ((s2[1] / det, -s2[0] / det), (-s1[1] / det, s1[0] / det))
    lin = tuple(tuple(d1[r] * inv[0][c] + d2[r] * inv[1][c] for c in range(2)) for r in range(2))
    tr = (dst[0][0] - lin[0][0] * src[0][0] - lin[0][1] * src[0][1],
          dst[0][1] - lin[1][0] * src[0][0] - lin[1][1] * src[0][1])
    return lin, tr


def _apply_affine(lin, tr, p) -> Point:
    return Point(lin[0][0] * p[0] + lin[0][1] * p[1] + tr[0], lin[1][0] * p[0] + lin[1][1] * p[1] + tr[1])


@register_stage
class AffineInterpStage(Stage):
    """x(t) = R(t*theta) S^t (x - c) + c + t*(M c - c) for M = R S (polar form)."""
    kind = "affine"

    def __init__(self, start: Mapping[str, Sequence], end: Mapping[str, Sequence], linear, translation, pivot):
        self.names = tuple(sorted(start))
        self.p0 = _xy(start, self.names)
        self.p1 = _xy(end, self.names)
        self.linear = np.asarray(linear, dtype=float)
        self.translation = np.asarray(translation, dtype=float)
        self.pivot = np.asarray(pivot, dtype=float)
        if np.linalg.det(self.linear) <= 0:
            raise MorphError("affine map reverses or collapses orientation")
        u, sig, vt = np.linalg.svd(self.linear)
        rot = u @ vt
        self.theta = math.atan2(rot[1, 0], rot[0, 0])
        self.v, self.sigma = vt.T, sig
        self.residual = self.p1 - (self.p0 @ self.linear.T + self.translation)

    def _linear_at(self, t):
        c, s = math.cos(t * self.theta), math.sin(t * self.theta)
        rot = np.array([[c, -s], [s, c]])
        return rot @ (self.v * self.sigma ** t) @ self.v.T

    @property
    def vertices(self):
        return frozenset(self.names)

    def evaluate(self, t):
        c = self.pivot
        mc = self.linear @ c + self.translation
        xy = (self.p0 - c) @ self._linear_at(t).T + c + t * (mc - c) + t * self.residual
        return _frame(self.names, xy)

    def to_json(self):
        return {"kind": self.kind, "start": {v: self.p0[i].tolist() for i, v in enumerate(self.names)},
                "end": {v: self.p1[i].tolist() for i, v in enumerate(self.names)},
                "linear": self.linear.tolist(), "translation": self.translation.tolist(),
                "pivot": self.pivot.tolist()}

    @classmethod
    def from_json(cls, data):
        return cls(data["start"], data["end"], data["linear"], data["translation"], data["pivot"])


def _affine_stage(start: Mapping[str, Point], end: Mapping[str, Point], boundary) -> AffineInterpStage:
    lin, tr = _affine_between([start[v] for v in boundary], [end[v] for v in boundary])
    pivot = [float(sum(start[v][k] for v in boundary) / 3) for k in range(2)]
    return AffineInterpStage(start, end, [[float(x) for x in r] for r in lin], [float(x) for x in tr], pivot)


# --- building -----------------------------------------------------------------------

def certify_stage(stage: Stage, faces, boundary, samples: int = 32, fixed: Optional[Mapping] = None) -> None:
    for t in sample_times(samples):
        fr = stage.evaluate(t)
        why = frame_failure(fr, faces, boundary)
        if why is None and fixed is not None:
            if any(fr[v] != tuple(fixed[v]) for v in boundary):
                why = "outer triangle moved"
        if why is not None:
            # look just around the failing time before giving up, to report a window
            near = [s for s in (max(0.0, t - 1e-3), min(1.0, t + 1e-3))
                    if frame_failure(stage.evaluate(s), faces, boundary) is not None]
            raise ConvexityCertificationError(f"{stage.kind} stage frame at t={t:.6g}: {why}"
                                              + (f" (also fails near t={near})" if near else ""))


def build_convex_morph(inst: ConvexInstance, fixed_boundary: bool, certify_samples: int = 32) -> List[Stage]:
    a, b = inst.a, inst.b
    if a.positions == b.positions:
        return [ConstantStage(a.positions)]
    bnd = inst.boundary
    if fixed_boundary:
        if any(a.positions[v] != b.positions[v] for v in bnd):
            raise MorphError("fixed-boundary morph needs the same outer triangle in both drawings")
        stage = WeightInterpStage.between(a.positions, b.positions, fit_weights(a, boundary=bnd),
                                          fit_weights(b, boundary=bnd))
        if certify_samples:
            certify_stage(stage, inst.faces, bnd, certify_samples, fixed=_xy_dict(a.positions, bnd))
        return [stage]
    # canonical boundary: the outer triangle of ``a``
    lin, tr = _affine_between([b.positions[v] for v in bnd], [a.positions[v] for v in bnd])
    b_canon = {v: _apply_affine(lin, tr, p) for v, p in b.positions.items()}
    for v in bnd:
        b_canon[v] = a.positions[v]
    stages: List[Stage] = [
        _affine_stage(a.positions, a.positions, bnd),
        WeightInterpStage.between(a.positions, b_canon, fit_weights(a, boundary=bnd),
                                  fit_weights(Drawing(a.graph, b_canon), boundary=bnd)),
        _affine_stage(b_canon, b.positions, bnd),
    ]
    if certify_samples:
        for st in stages:
            certify_stage(st, inst.faces, bnd, certify_samples)
    return stages


def _xy_dict(positions, names):
    return {v: (float(positions[v][0]), float(positions[v][1])) for v in names}
