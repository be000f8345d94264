"""
Morphing a two-level kite drawing
=================================

The corpus pair ``two_level`` has one kite with six vertices inside it.
We morph between its two drawings, check 200 frames, and write an animated SVG.

    python3 demos/01_morph_two_level.py
"""
from pathlib import Path

from kitemorph import io
from kitemorph.kites import assign_levels, detect_kites
from kitemorph.morph import sample_times
from kitemorph.pipeline import morph
from kitemorph.render import render_svg
from kitemorph.verify import verify_morph

root = Path(__file__).resolve().parent.parent
a = io.read_drawing(root / "corpus" / "two_level_a.json")
b = io.read_drawing(root / "corpus" / "two_level_b.json")

# three kites, one of them holding the inner vertices
kites = detect_kites(a)
print(len(a.vertices), "vertices,", len(a.edges), "edges,", len(kites), "kites")
print("deepest level:", assign_levels(a).max_level)

m = morph(a, b)
print("pieces handled recursively:", len(m.trace.pieces))
print("compatible triangulations computed:", len(m.trace.triangulations))

rep = verify_morph(m, 200)
print("verified at 200 frames:", rep.ok)

out = root / "demos" / "out"
out.mkdir(exist_ok=True)
frames = [m.frame(t) for t in sample_times(120)]
(out / "two_level.svg").write_text(render_svg(a.graph, frames, fps=30), encoding="utf-8")
io.write_morph(m, out / "two_level_morph.json")
print("wrote", out / "two_level.svg")
