"""Morphs as trees of time-parametrized stages.

A stage maps local time ``t`` in [0, 1] to a frame, a dict from vertex name to
a float pair.  Composite stages (sequences, parallel groups, rigid followers,
restrictions) are built from leaves.  Every stage serializes to plain JSON
with a ``kind`` tag so a morph can be stored and replayed bit for bit.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from bisect import bisect_left
from dataclasses import dataclass
from typing import ClassVar, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Type

from .drawing import Drawing, Graph

Frame = Dict[str, Tuple[float, float]]

_REGISTRY: Dict[str, Type["Stage"]] = {}


class MorphError(ValueError):
    pass


def register_stage(cls):
    _REGISTRY[cls.kind] = cls
    return cls


def stage_from_json(data: Mapping) -> "Stage":
    # convex stages register themselves on import
    from . import convex  # noqa: F401

    try:
        cls = _REGISTRY[data["kind"]]
    except KeyError as exc:
        raise MorphError(f"unknown stage kind {data.get('kind')!r}") from exc
    return cls.from_json(data)


def float_positions(positions: Mapping[str, Sequence]) -> Frame:
    return {v: (float(p[0]), float(p[1])) for v, p in positions.items()}


def _pos_json(frame: Mapping[str, Tuple[float, float]]) -> Dict[str, List[float]]:
    return {v: [frame[v][0], frame[v][1]] for v in sorted(frame)}


def _pos_from_json(data: Mapping) -> Frame:
    return {v: (float(p[0]), float(p[1])) for v, p in data.items()}


class Stage(ABC):
    kind: ClassVar[str]

    @property
    @abstractmethod
    def vertices(self) -> frozenset:
        ...

    @abstractmethod
    def evaluate(self, t: float) -> Frame:
        ...

    @abstractmethod
    def to_json(self) -> dict:
        ...

    @classmethod
    @abstractmethod
    def from_json(cls, data: Mapping) -> "Stage":
        ...

    def start(self) -> Frame:
        return self.evaluate(0.0)

    def end(self) -> Frame:
        return self.evaluate(1.0)


@register_stage
class ConstantStage(Stage):
    kind = "constant"

    def __init__(self, positions: Mapping[str, Sequence]):
        self.positions = float_positions(positions)

    @property
    def vertices(self):
        return frozenset(self.positions)

    def evaluate(self, t):
        return dict(self.positions)

    def to_json(self):
        return {"kind": self.kind, "positions": _pos_json(self.positions)}

    @classmethod
    def from_json(cls, data):
        return cls(_pos_from_json(data["positions"]))


@register_stage
class LinearStage(Stage):
    kind = "linear"

    def __init__(self, start: Mapping[str, Sequence], end: Mapping[str, Sequence]):
        if set(start) != set(end):
            raise MorphError("linear stage endpoints have different vertex sets")
        self.p0 = float_positions(start)
        self.p1 = float_positions(end)

    @property
    def vertices(self):
        return frozenset(self.p0)

    def evaluate(self, t):
        s = 1.0 - t
        return {v: (s * a[0] + t * self.p1[v][0], s * a[1] + t * self.p1[v][1]) for v, a in self.p0.items()}

    def to_json(self):
        return {"kind": self.kind, "start": _pos_json(self.p0), "end": _pos_json(self.p1)}

    @classmethod
    def from_json(cls, data):
        return cls(_pos_from_json(data["start"]), _pos_from_json(data["end"]))


@register_stage
class SequenceStage(Stage):
    """Stages played one after another; each gets a share of time proportional to its weight."""
    kind = "sequence"

    def __init__(self, parts: Sequence[Tuple[Stage, float]]):
        if not parts:
            raise MorphError("empty sequence")
        verts = parts[0][0].vertices
        for st, w in parts:
            if st.vertices != verts:
                raise MorphError("sequence parts act on different vertex sets")
            if not w > 0:
                raise MorphError("stage weights must be positive")
        self.parts = list(parts)
        total = sum(w for _, w in parts)
        acc, self.bounds = 0.0, []
        for _, w in parts:
            acc += w
            self.bounds.append(acc / total)
        self.bounds[-1] = 1.0

    @property
    def vertices(self):
        return self.parts[0][0].vertices

    def evaluate(self, t):
        i = min(bisect_left(self.bounds, t), len(self.parts) - 1)
        lo = self.bounds[i - 1] if i else 0.0
        hi = self.bounds[i]
        local = 0.0 if hi == lo else min(1.0, max(0.0, (t - lo) / (hi - lo)))
        return self.parts[i][0].evaluate(local)

    def to_json(self):
        return {"kind": self.kind,
                "parts": [{"weight": w, "stage": st.to_json()} for st, w in self.parts]}

    @classmethod
    def from_json(cls, data):
        return cls([(stage_from_json(p["stage"]), float(p["weight"])) for p in data["parts"]])


@register_stage
class ParallelStage(Stage):
    """Stages running over the same time interval on (mostly) disjoint vertex sets.

    Vertices shared by several parts must follow the same path in each; the
    last part wins on evaluation.
    """
    kind = "parallel"

    def __init__(self, parts: Sequence[Stage]):
        if not parts:
            raise MorphError("empty parallel group")
        self.parts = list(parts)

    @property
    def vertices(self):
        return frozenset().union(*(p.vertices for p in self.parts))

    def evaluate(self, t):
        out: Frame = {}
        for p in self.parts:
            out.update(p.evaluate(t))
        return out

    def to_json(self):
        return {"kind": self.kind, "parts": [p.to_json() for p in self.parts]}

    @classmethod
    def from_json(cls, data):
        return cls([stage_from_json(p) for p in data["parts"]])


@register_stage
class RestrictStage(Stage):
    kind = "restrict"

    def __init__(self, inner: Stage, keep: Iterable[str]):
        self.inner = inner
        self.keep = frozenset(keep)
        missing = self.keep - inner.vertices
        if missing:
            raise MorphError(f"restriction keeps unknown vertices {sorted(missing)[:3]}")

    @property
    def vertices(self):
        return self.keep

    def evaluate(self, t):
        fr = self.inner.evaluate(t)
        return {v: fr[v] for v in self.keep}

    def to_json(self):
        return {"kind": self.kind, "keep": sorted(self.keep), "stage": self.inner.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(stage_from_json(data["stage"]), data["keep"])


def edge_frame(pu, pv, side: int):
    """Origin and axes of the frame riding on segment uv: origin at the
    midpoint, x along uv, y perpendicular towards ``side`` (+1 left, -1 right)."""
    dx, dy = pv[0] - pu[0], pv[1] - pu[1]
    ln = math.hypot(dx, dy)
    if ln == 0:
        raise MorphError("base edge collapsed")
    ex = (dx / ln, dy / ln)
    ey = (-ex[1] * side, ex[0] * side)
    w = ((pu[0] + pv[0]) / 2, (pu[1] + pv[1]) / 2)
    return w, ex, ey


def to_local(p, w, ex, ey) -> Tuple[float, float]:
    d = (p[0] - w[0], p[1] - w[1])
    return (d[0] * ex[0] + d[1] * ex[1], d[0] * ey[0] + d[1] * ey[1])


def from_local(c, w, ex, ey) -> Tuple[float, float]:
    return (w[0] + c[0] * ex[0] + c[1] * ey[0], w[1] + c[0] * ex[1] + c[1] * ey[1])


@register_stage
class RigidFollowStage(Stage):
    """Riders carried rigidly by the moving base edge (u, v) of an underlying stage."""
    kind = "rigid_follow"

    def __init__(self, inner: Stage, u: str, v: str, side: int, local: Mapping[str, Sequence[float]]):
        if u not in inner.vertices or v not in inner.vertices:
            raise MorphError("base edge not moved by the underlying stage")
        if set(local) & inner.vertices:
            raise MorphError("riders overlap the underlying stage")
        if side not in (1, -1):
            raise MorphError("side must be +1 or -1")
        self.inner, self.u, self.v, self.side = inner, u, v, side
        self.local = {r: (float(c[0]), float(c[1])) for r, c in local.items()}

    @property
    def vertices(self):
        return self.inner.vertices | frozenset(self.local)

    def evaluate(self, t):
        fr = self.inner.evaluate(t)
        w, ex, ey = edge_frame(fr[self.u], fr[self.v], self.side)
        for r, c in self.local.items():
            fr[r] = from_local(c, w, ex, ey)
        return fr

    def to_json(self):
        return {"kind": self.kind, "base": [self.u, self.v], "side": self.side,
                "local": _pos_json(self.local), "stage": self.inner.to_json()}

    @classmethod
    def from_json(cls, data):
        u, v = data["base"]
        return cls(stage_from_json(data["stage"]), u, v, int(data["side"]), _pos_from_json(data["local"]))


@dataclass
class Morph:
    graph: Graph
    source: Drawing
    target: Drawing
    stage: Stage
    # rigid riders grouped by base edge, kept for verification
    riders: Tuple[Tuple[str, ...], ...] = ()
    # construction record (pipeline.Trace) when built here rather than loaded
    trace: Optional[object] = None

    def __post_init__(self):
        if self.stage.vertices != self.graph.vertices:
            raise MorphError("stage vertices differ from the graph's")

    def frame(self, t: float) -> Frame:
        if not 0.0 <= t <= 1.0 or math.isnan(t):
            raise MorphError(f"time {t} outside [0, 1]")
        return self.stage.evaluate(float(t))


def evaluate(m: Morph, t: float) -> Drawing:
    return Drawing(m.graph, m.frame(t))


def sample_times(n: int) -> List[float]:
    if n < 2:
        raise MorphError("need at least two samples")
    return [i / (n - 1) for i in range(n)]


def sample(m: Morph, n: int) -> List[Drawing]:
    return [evaluate(m, t) for t in sample_times(n)]


def max_deviation(fr: Mapping[str, Sequence], d: Drawing) -> float:
    return max((math.hypot(fr[v][0] - float(p[0]), fr[v][1] - float(p[1])) for v, p in d.positions.items()),
               default=0.0)


def bbox_diagonal(positions: Mapping[str, Sequence]) -> float:
    xs = [float(p[0]) for p in positions.values()]
    ys = [float(p[1]) for p in positions.values()]
    if not xs:
        return 0.0
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))
