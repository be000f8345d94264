"""
Inside the recursion: pieces, chains and skinny drawings
========================================================

Vertices inside a kite are grouped by the triangle (base edge plus crossing
point) they sit in.  Each group is squeezed into a thin half-disk over its
base edge before the outer drawing moves, then rides along rigidly.
"""
import math
from pathlib import Path

from kitemorph import io
from kitemorph.pipeline import morph

root = Path(__file__).resolve().parent.parent
a = io.read_drawing(root / "corpus" / "nested_three_level_a.json")
b = io.read_drawing(root / "corpus" / "nested_three_level_b.json")
m = morph(a, b)

for rec in m.trace.pieces:
    u, v = rec.piece.base
    p = rec.params
    print(f"piece on {u}-{v}: {len(rec.piece.h)} inner vertices, dummy {rec.hp.d}")
    print(f"  chain {' > '.join(rec.chain.nodes)}  ({len(rec.chain.blocks)} blocks)")
    print(f"  half-disk: lambda={p.lam:.4g}  |r|={p.radius:.4g}  phi={math.degrees(p.phi):.2f} deg"
          f"  (shortest base at t={p.t_star:.3f})")
    print("  checks:", ", ".join(k for k, ok in sorted(rec.checks.items()) if ok))

# the skinny layout in local (w, r) coordinates: x across the base, y along r
rec = m.trace.pieces[0]
for x, (s, h) in sorted(rec.skinny.local.items(), key=lambda kv: kv[1][1]):
    print(f"  {x:>8s}  across={s:+.4f}  up={h:.4f}")
