"""
Compatible triangulations
=========================

A square and an arrowhead share the diagonal from the reflex corner, so
they triangulate compatibly without new vertices.  Two arrowheads with
reflex corners at different places share no diagonal and need a Steiner
vertex.
"""
from kitemorph.compat import MarkedPlanarPair, compatible_triangulate
from kitemorph.drawing import Drawing
from kitemorph.geometry import Location, point_in_polygon

cycle = [("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")]
square = Drawing.build({"a": (0, 0), "b": (4, 0), "c": (4, 4), "d": (0, 4)}, cycle)
dent_c = square.with_positions({**square.positions, "c": (2, 1)})
dent_b = square.with_positions({**square.positions, "b": (1, 2)})

for title, a, b in (("square / dent at c", square, dent_c), ("dent at c / dent at b", dent_c, dent_b)):
    res = compatible_triangulate(MarkedPlanarPair(a, b))
    quad = [a.positions[v] for v in "abcd"]
    inner = [s for s in res.steiner if point_in_polygon(res.a.positions[s], quad) is Location.INSIDE]
    print(f"{title}: {len(res.a.edges) - len(a.edges)} edges added, "
          f"{len(res.steiner)} Steiner vertices ({len(inner)} inside the quad)")
    for s in inner:
        print(f"  {s}: {tuple(map(float, res.a.positions[s]))} -> {tuple(map(float, res.b.positions[s]))}")
