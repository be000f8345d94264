"""Command-line interface.

Exit codes: 0 success, 1 semantic failure (invalid drawing, non-equivalent
inputs, failed verification), 2 parse or I/O failure.  Reports go to stdout
as JSON.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import io
from .drawing import DrawingError, topologically_equivalent, validate_drawing
from .kites import KitePlanarityError, classify_drawing, validate_kite_planarity
from .morph import MorphError, sample_times
from .pipeline import NotEquivalentError, morph
from .render import render_svg
from .verify import verify_morph

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def _seed() -> None:
    seed = os.environ.get("KITEMORPH_SEED")
    if seed is not None:
        random.seed(int(seed))
        np.random.seed(int(seed) % 2 ** 32)


def cmd_validate(args) -> int:
    d = io.read_drawing(args.path)
    basic = validate_drawing(d)
    rep = validate_kite_planarity(d)
    _emit({"valid": not basic, "kitePlanar": rep.ok, **rep.to_json()})
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_classify(args) -> int:
    _emit(classify_drawing(io.read_drawing(args.path)))
    return EXIT_OK


def cmd_equivalent(args) -> int:
    a, b = io.read_drawing(args.a), io.read_drawing(args.b)
    try:
        rep = topologically_equivalent(a, b)
    except DrawingError as exc:
        _emit({"equivalent": False, "first_mismatch": str(exc)})
        return EXIT_FAIL
    _emit(rep.to_json())
    return EXIT_OK if rep.equivalent else EXIT_FAIL


def cmd_morph(args) -> int:
    a, b = io.read_drawing(args.a), io.read_drawing(args.b)
    try:
        m = morph(a, b)
    except NotEquivalentError as exc:
        _emit(exc.report.to_json())
        return EXIT_FAIL
    except (KitePlanarityError, DrawingError) as exc:
        _emit({"error": str(exc)})
        return EXIT_FAIL
    io.write_morph(m, args.out)
    if not args.verify:
        _emit({"morph": str(args.out)})
        return EXIT_OK
    rep = verify_morph(io.read_morph(args.out), args.frames)
    report = rep.to_json()
    if args.report:
        Path(args.report).write_text(io.dumps(report), encoding="utf-8")
        report = {k: report[k] for k in ("ok", "frames", "invariants", "endpoint", "rigidity", "failures")}
    _emit(report)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_sample(args) -> int:
    m = io.read_morph(args.morph)
    times = sample_times(args.frames)
    frames = [m.frame(t) for t in times]
    prov = {"morph_sha256": io.file_hash(args.morph), "samples": args.frames, "tolerance": 1e-9}
    Path(args.out).write_text(io.dumps(io.frames_to_json(times, frames, m.graph, prov)), encoding="utf-8")
    _emit({"frames": args.frames, "out": str(args.out)})
    return EXIT_OK


def cmd_verify(args) -> int:
    a, b = io.read_drawing(args.a), io.read_drawing(args.b)
    m = io.read_morph(args.morph)
    if m.graph != a.graph or m.graph != b.graph:
        _emit({"ok": False, "failures": [{"invariant": "graph", "detail": "morph is for a different graph"}]})
        return EXIT_FAIL
    rep = verify_morph(m, args.frames, source=a, target=b)
    _emit(rep.to_json())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_render(args) -> int:
    kind, obj = io.load_any(args.input)
    if kind == "morph":
        graph, frames = obj.graph, [obj.frame(t) for t in sample_times(args.frames)]
    elif kind == "frames":
        graph, _, frames = obj
    else:
        graph, frames = obj.graph, [{v: (float(p[0]), float(p[1])) for v, p in obj.positions.items()}]
    Path(args.out).write_text(render_svg(graph, frames, fps=args.fps), encoding="utf-8")
    _emit({"svg": str(args.out), "frames": len(frames)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kitemorph", description="Morph kite-planar 1-planar drawings.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a drawing for validity and kite-planarity")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("classify", help="optimal 1-planar / kite-augmented IC-planar flags")
    s.add_argument("path")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("equivalent", help="test topological equivalence of two drawings")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_equivalent)

    s = sub.add_parser("morph", help="compute a morph between two drawings")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--frames", type=int, default=200)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--report", help="write the full per-frame report here")
    s.set_defaults(func=cmd_morph)

    s = sub.add_parser("sample", help="sample frames of a morph file")
    s.add_argument("morph")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--frames", type=int, default=200)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("verify", help="verify a morph file against its endpoints")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("morph")
    s.add_argument("--frames", type=int, default=200)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("render", help="animated SVG of a morph, frame set or drawing")
    s.add_argument("input")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--frames", type=int, default=100)
    s.add_argument("--fps", type=float, default=30.0)
    s.set_defaults(func=cmd_render)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "frames", 2) < 2:
        sys.stderr.write("kitemorph: --frames must be at least 2\n")
        return EXIT_PARSE
    _seed()
    try:
        return args.func(args)
    except io.ParseError as exc:
        sys.stderr.write(f"kitemorph: parse error: {exc}\n")
        return EXIT_PARSE
    except OSError as exc:
        sys.stderr.write(f"kitemorph: {exc}\n")
        return EXIT_PARSE
    except (DrawingError, MorphError) as exc:
        sys.stderr.write(f"kitemorph: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
