"""Instance library used by the demos and the test-suite.

Each instance is a hand-placed source drawing.  Target drawings are either
hand-placed too or produced by :func:`warp`: an orientation-preserving
affine map followed by random vertex moves, each move kept only if the
drawing stays kite-planar and topologically equivalent to the source.
Coordinates are snapped to a decimal grid so files store them exactly.
"""
from __future__ import annotations

import math
import random
import zlib
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .drawing import Drawing, topologically_equivalent
from .kites import validate_kite_planarity

GRID = Fraction(1, 1000)


def _edges(spec: str) -> List[Tuple[str, str]]:
    return [tuple(e.split("-")) for e in spec.split()]


def _d(pos: Dict[str, Tuple], edges: str) -> Drawing:
    return Drawing.build({k: (Fraction(str(x)), Fraction(str(y))) for k, (x, y) in pos.items()}, _edges(edges))


KITE = "a-b b-c c-d a-d a-c b-d"


def k4_kite() -> Drawing:
    return _d({"a": (0, 0), "b": (4, 0), "c": (4, 4), "d": (0, 4)}, KITE)


def k4_kite_b() -> Drawing:
    return _d({"a": (0, 0), "b": (5, 1), "c": (4, 5), "d": (-1, 3)}, KITE)


def planar_convex() -> Drawing:
    pos = {"o1": (0, 0), "o2": (10, 0), "o3": (10, 8), "o4": (0, 8),
           "p1": (3, 3), "p2": (7, 3), "p3": (5, 6)}
    return _d(pos, "o1-o2 o2-o3 o3-o4 o1-o4 p1-p2 p2-p3 p1-p3 o1-p1 o2-p2 o3-p3 o4-p3 o4-p1")


def two_level() -> Drawing:
    """A kite with white (level 1) vertices in two of its pieces, one of
    them an empty kite of its own, next to a second, empty kite."""
    pos = {"A": (0, 0), "B": (12, 0), "C": (12, 12), "D": (0, 12), "G": (18, 0), "H": (18, 12),
           "x1": (6, 1.5), "x2": (6, 3),
           "y1": (4.5, 9.5), "y2": (7.5, 9.5), "y3": (7.5, 11), "y4": (4.5, 11)}
    edges = ("A-B B-C C-D A-D A-C B-D  B-G G-H H-C B-H C-G "
             "A-x1 B-x1 A-x2 B-x2 x1-x2 "
             "y1-y2 y2-y3 y3-y4 y1-y4 y1-y3 y2-y4 y3-C y4-D")
    return _d(pos, edges)


def nested_three_level() -> Drawing:
    pos = {"A": (0, 0), "B": (20, 0), "C": (20, 20), "D": (0, 20), "E": (10, -6), "F": (10, 26),
           "p1": (7, 2), "p2": (13, 2), "p3": (13, 5), "p4": (7, 5), "z": (10, 2.5)}
    edges = ("A-B B-C C-D A-D A-C B-D A-E B-E D-F C-F "
             "p1-p2 p2-p3 p3-p4 p1-p4 p1-p3 p2-p4 p1-A p4-A p2-B p3-B z-p1 z-p2")
    return _d(pos, edges)


def optimal_eight() -> Drawing:
    """Optimal 1-planar on 8 vertices: 4n - 9 = 23 edges."""
    pos = {"A": (0, 0), "C": (12, 0), "D": (6, 10), "B": (6, 1),
           "a": (4, 4), "b": (6, 3), "c": (8, 4), "d": (6, 7)}
    skeleton = "A-C C-D A-D A-B B-C A-a B-b C-c D-d a-b b-c c-d a-d"
    crossing = "A-b B-a B-c C-b C-d D-c A-d D-a a-c b-d"
    return _d(pos, skeleton + " " + crossing)


def ic_planar() -> Drawing:
    pos = {"a": (0, 0), "b": (4, 0), "c": (4, 4), "d": (0, 4),
           "e": (8, 0), "f": (12, 0), "g": (12, 4), "h": (8, 4), "i": (6, 8), "j": (6, -3)}
    edges = (KITE + " e-f f-g g-h e-h e-g f-h b-e c-h d-i c-i h-i g-i a-j b-j e-j f-j")
    return _d(pos, edges)


def partial_kite() -> Drawing:
    pos = {"a": (0, 0), "b": (4, 0), "c": (4, 4), "d": (0, 4), "e": (2, 7)}
    return _d(pos, "a-b b-c a-d a-c b-d d-e c-e")


def disconnected() -> Drawing:
    pos = {"a": (0, 0), "b": (4, 0), "c": (4, 4), "d": (0, 4),
           "t1": (7, 0), "t2": (10, 1), "t3": (8, 3), "s": (1.2, 2)}
    return _d(pos, KITE + " t1-t2 t2-t3 t1-t3")


def cycle_piece() -> Drawing:
    """Level-1 triangle with an inner vertex in one piece of a kite."""
    pos = {"A": (0, 0), "B": (12, 0), "C": (12, 12), "D": (0, 12),
           "t1": (4, 1.5), "t2": (8, 1.5), "t3": (6, 4.5), "t4": (6, 2.5)}
    edges = ("A-B B-C C-D A-D A-C B-D t1-t2 t2-t3 t1-t3 t4-t1 t4-t2 t4-t3 "
             "t1-A t2-B t3-A t3-B")
    return _d(pos, edges)


def crossed_binding() -> Drawing:
    """Not kite-planar: a binding edge crosses another edge (P.3 witness)."""
    pos = {"a": (0, 0), "b": (8, 0), "c": (8, 8), "d": (0, 8), "x": (3, 1), "y": (5, 1), "z": (4, 3)}
    return _d(pos, KITE + " x-a x-b y-a y-b x-z")


def incompatible_completion() -> Tuple[Drawing, Drawing]:
    """Equivalent pair whose kite completions are not equivalent: the missing
    kite edge c-d closes the kite over ``s`` in the second drawing only."""
    edges = "a-b b-c a-d a-c b-d"
    a = _d({"a": (0, 0), "b": (4, 0), "c": (4, 4), "d": (0, 4), "s": (2, 5)}, edges)
    b = _d({"a": (0, 0), "b": (4, 0), "c": (4, 4), "d": (0, 4), "s": (2, 3.5)}, edges)
    return a, b


INSTANCES: Dict[str, Callable[[], Drawing]] = {
    "k4_kite": k4_kite,
    "planar_convex": planar_convex,
    "two_level": two_level,
    "nested_three_level": nested_three_level,
    "optimal_eight": optimal_eight,
    "ic_planar": ic_planar,
    "partial_kite": partial_kite,
    "disconnected": disconnected,
    "cycle_piece": cycle_piece,
}


def _snap(x: float) -> Fraction:
    return Fraction(round(x / GRID)) * GRID


def _acceptable(ref: Drawing, d: Drawing) -> bool:
    rep = validate_kite_planarity(d)
    if not rep.ok or rep.missing_kite_edges != validate_kite_planarity(ref).missing_kite_edges:
        return False
    return topologically_equivalent(ref, d).equivalent


def warp(d: Drawing, seed: int, rotation: float = 0.6, rounds: int = 4, step: float = 0.12,
         shear: float = 0.25) -> Drawing:
    """A kite-planar drawing equivalent to ``d``, visibly different from it."""
    rng = random.Random(seed)
    xs = [float(p[0]) for p in d.positions.values()]
    ys = [float(p[1]) for p in d.positions.values()]
    cx, cy = (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2
    size = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    c, s = math.cos(rotation), math.sin(rotation)
    k = shear
    sx, sy = 1.0 + 0.2 * rng.random(), 1.0 - 0.2 * rng.random()

    def affine(p):
        x, y = float(p[0]) - cx, float(p[1]) - cy
        x, y = sx * (x + k * y), sy * y
        return (c * x - s * y + cx, s * x + c * y + cy)

    cur = d.with_positions({v: tuple(map(_snap, affine(p))) for v, p in d.positions.items()})
    if not _acceptable(d, cur):
        raise ValueError("affine part of the warp broke the drawing")
    for _ in range(rounds):
        for v in sorted(d.vertices):
            for _attempt in range(6):
                p = cur.positions[v]
                r = step * size * rng.random()
                ang = rng.uniform(0, 2 * math.pi)
                moved = (_snap(float(p[0]) + r * math.cos(ang)), _snap(float(p[1]) + r * math.sin(ang)))
                cand = cur.with_positions({**cur.positions, v: moved})
                if _acceptable(d, cand):
                    cur = cand
                    break
    return cur


def pairs(seed: int = 7) -> Dict[str, Tuple[Drawing, Drawing]]:
    """The standard corpus of (source, target) pairs."""
    out = {"k4_kite": (k4_kite(), k4_kite_b())}
    for name, make in sorted(INSTANCES.items()):
        if name == "k4_kite":
            continue
        a = make()
        # seeded by name so adding or renaming an instance leaves the others alone
        out[name] = (a, warp(a, seed + zlib.crc32(name.encode())))
    a = k4_kite()
    out["k4_kite_turned"] = (a, warp(a, seed, rotation=2.6, rounds=2))
    a = two_level()
    out["two_level_turned"] = (a, warp(a, seed + 100, rotation=-1.9, rounds=3, step=0.08))
    return out
