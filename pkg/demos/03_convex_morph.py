"""
Convex morphs by blending weights
=================================

Two triangulations of the same graph inside one triangle.  Each interior
vertex is written as a positive combination of its neighbours in both
drawings; blending the two weight sets and re-solving gives a frame whose
faces stay convex for every t.
"""
import numpy as np
from scipy.spatial import Delaunay

from kitemorph.convex import (ConvexInstance, WeightSystem, build_convex_morph, fit_weights, frame_failure,
                              solve_positions)
from kitemorph.drawing import Drawing

rng = np.random.default_rng(3)
corners = np.array([[0.0, 0.0], [100.0, 0.0], [50.0, 90.0]])
inner = []
while len(inner) < 25:
    s, t = rng.random(2)
    if s + t < 0.9 and min(s, t) > 0.05:
        inner.append(corners[0] + s * (corners[1] - corners[0]) + t * (corners[2] - corners[0]))
pts = np.vstack([corners, inner])
names = [f"v{i}" for i in range(len(pts))]
edges = {tuple(sorted((names[i], names[j]))) for s in Delaunay(pts).simplices
         for i, j in ((s[0], s[1]), (s[1], s[2]), (s[0], s[2]))}
a = Drawing.build({n: tuple(p) for n, p in zip(names, pts)}, edges)

# the second drawing: same boundary, interior placed by random positive weights
ws = fit_weights(a, boundary=names[:3])
noisy = ws.vals * rng.uniform(0.2, 5.0, len(ws.vals))
sums = np.bincount(ws.rows, weights=noisy)
ws_b = WeightSystem(ws.names, ws.rows, ws.cols, noisy / sums[ws.rows], 3)
b = solve_positions(ws_b, [a.positions[n] for n in names[:3]], a.graph)
b = Drawing.build({n: tuple(map(float, p)) for n, p in b.positions.items()}, edges)

inst = ConvexInstance.from_drawings(a, b)
(stage,) = build_convex_morph(inst, fixed_boundary=True)


def margin(frame):
    worst = np.inf
    for f in inst.faces:
        p = np.array([frame[v] for v in f])
        e = np.roll(p, -1, axis=0) - p
        cr = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        worst = min(worst, (cr / (np.linalg.norm(e, axis=1) * np.linalg.norm(np.roll(e, -1, axis=0), axis=1))).min())
    return worst


for t in np.linspace(0, 1, 11):
    fr = stage.evaluate(t)
    print(f"t={t:.1f}  smallest normalized turn {margin(fr):.4f}  ok={frame_failure(fr, inst.faces, inst.boundary) is None}")
