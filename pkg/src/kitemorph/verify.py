"""Frame-by-frame verification of a morph.

Frames are floating point; each one is converted to exact rationals
(lossless) before the combinatorial checks, so validity and equivalence are
decided exactly on the floats actually emitted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence

from .drawing import Drawing, crossings, topologically_equivalent, validate_drawing
from .geometry import EPS_REL, CrossKind, is_strictly_convex, segments_cross
from .kites import Kite, detect_kites
from .morph import Morph, RigidFollowStage, Stage, bbox_diagonal, max_deviation, sample_times

INVARIANTS = ("endpoint_fidelity", "valid", "equivalent", "one_planar", "kites_convex", "rigidity")


@dataclass
class VerificationReport:
    frames: int
    times: List[float]
    per_frame: List[Dict[str, bool]] = field(default_factory=list)
    endpoint: Dict[str, float] = field(default_factory=dict)
    rigidity: Dict[str, float] = field(default_factory=dict)
    failures: List[dict] = field(default_factory=list)

    def passed(self, invariant: str) -> bool:
        if invariant == "endpoint_fidelity":
            return self.endpoint.get("ok", False)
        if invariant == "rigidity":
            return self.rigidity.get("ok", True)
        return all(f[invariant] for f in self.per_frame)

    @property
    def ok(self) -> bool:
        return all(self.passed(k) for k in INVARIANTS)

    def first_failure(self, invariant: str) -> Optional[dict]:
        return next((f for f in self.failures if f["invariant"] == invariant), None)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "frames": self.frames,
            "invariants": {k: self.passed(k) for k in INVARIANTS},
            "endpoint": self.endpoint,
            "rigidity": self.rigidity,
            "per_frame": [dict(f, t=t) for f, t in zip(self.per_frame, self.times)],
            "failures": self.failures,
        }


def kites_convex(d: Drawing, kites: Sequence[Kite]) -> bool:
    for k in kites:
        if not is_strictly_convex([d.positions[c] for c in k.corners]):
            return False
        (p, q), (r, s) = k.crossing_edges
        if segments_cross(d.segment((p, q)), d.segment((r, s))).kind is not CrossKind.PROPER:
            return False
    return True


def check_frame(frame: Drawing, source: Drawing, kites: Sequence[Kite]) -> Dict[str, object]:
    """Per-frame invariants; values are booleans plus a short reason when one fails."""
    out: Dict[str, object] = {}
    viol = validate_drawing(frame)
    out["valid"] = not viol
    if viol:
        out["reason"] = viol[0].message
        out.update(equivalent=False, one_planar=False, kites_convex=False)
        return out
    cross = crossings(frame)
    count: Dict = {}
    for e1, e2 in cross:
        count[e1] = count.get(e1, 0) + 1
        count[e2] = count.get(e2, 0) + 1
    out["one_planar"] = all(c <= 1 for c in count.values())
    eq = topologically_equivalent(source, frame)
    out["equivalent"] = eq.equivalent
    if not eq.equivalent:
        out["reason"] = eq.first_mismatch
    out["kites_convex"] = kites_convex(frame, kites)
    return out


def rigid_nodes(stage: Stage) -> List[RigidFollowStage]:
    found, todo = [], [stage]
    while todo:
        st = todo.pop()
        if isinstance(st, RigidFollowStage):
            found.append(st)
        for attr in ("inner",):
            if hasattr(st, attr):
                todo.append(getattr(st, attr))
        for part in getattr(st, "parts", ()):
            todo.append(part[0] if isinstance(part, tuple) else part)
    return found


def check_rigidity(stage: Stage, n: int) -> Dict[str, float]:
    """Largest relative change of rider pairwise distances over each rigid stage's own time."""
    worst = 0.0
    for node in rigid_nodes(stage):
        riders = sorted(node.local)
        ref = None
        for t in sample_times(n):
            fr = node.evaluate(t)
            dist = [math.dist(fr[p], fr[q]) for p, q in combinations(riders, 2)]
            if ref is None:
                ref = dist
                scale = max(dist, default=0.0) or 1.0
                continue
            dev = max((abs(x - y) for x, y in zip(dist, ref)), default=0.0) / scale
            worst = max(worst, dev)
    return {"ok": worst < EPS_REL, "max_relative_change": worst}


def verify_morph(m: Morph, frames: int = 200, source: Optional[Drawing] = None,
                 target: Optional[Drawing] = None) -> VerificationReport:
    source = source or m.source
    target = target or m.target
    times = sample_times(frames)
    rep = VerificationReport(frames, times)
    diag = max(bbox_diagonal(source.positions), bbox_diagonal(target.positions)) or 1.0
    d0 = max_deviation(m.frame(0.0), source)
    d1 = max_deviation(m.frame(1.0), target)
    rep.endpoint = {"ok": max(d0, d1) <= EPS_REL * diag, "start_deviation": d0, "end_deviation": d1,
                    "tolerance": EPS_REL * diag}
    if not rep.endpoint["ok"]:
        rep.failures.append({"invariant": "endpoint_fidelity", "detail": rep.endpoint})
    kites = detect_kites(source)
    for i, t in enumerate(times):
        res = check_frame(Drawing(m.graph, m.frame(t)), source, kites)
        flags = {k: bool(res[k]) for k in ("valid", "equivalent", "one_planar", "kites_convex")}
        rep.per_frame.append(flags)
        for k, ok in flags.items():
            if not ok:
                rep.failures.append({"invariant": k, "frame": i, "t": t, "detail": str(res.get("reason", ""))})
    rep.rigidity = check_rigidity(m.stage, min(frames, 50))
    if not rep.rigidity["ok"]:
        rep.failures.append({"invariant": "rigidity", "detail": rep.rigidity})
    return rep
