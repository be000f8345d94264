"""Write the instance corpus to ``corpus/`` as drawing files.

Every pair becomes ``<name>_a.json`` and ``<name>_b.json``.  The targets come
from a seeded random warp, so rerunning this script reproduces the files
byte for byte.  Negative witnesses go to ``witnesses/``: a drawing that is
not kite-planar, and a pair whose kite completions disagree.

    python3 demos/00_build_corpus.py [outdir]
"""
import sys
import time
from pathlib import Path

from kitemorph import corpus, io

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "corpus"
out.mkdir(parents=True, exist_ok=True)

start = time.perf_counter()
pairs = corpus.pairs()
for name, (a, b) in sorted(pairs.items()):
    io.write_drawing(a, out / f"{name}_a.json")
    io.write_drawing(b, out / f"{name}_b.json")
    print(f"{name:22s} n={len(a.vertices):3d}  m={len(a.edges):3d}")
(out / "witnesses").mkdir(exist_ok=True)
io.write_drawing(corpus.crossed_binding(), out / "witnesses" / "crossed_binding.json")
wa, wb = corpus.incompatible_completion()
io.write_drawing(wa, out / "witnesses" / "incompatible_completion_a.json")
io.write_drawing(wb, out / "witnesses" / "incompatible_completion_b.json")

print(f"\n{len(pairs)} pairs written to {out} in {time.perf_counter() - start:.1f}s")
