"""JSON formats for drawings, morphs and frame sets.

Drawing coordinates are exact: they are written as decimal strings when the
value has a finite decimal expansion and as ``"p/q"`` otherwise, so parsing a
serialized drawing gives back the identical rationals.  Frame coordinates are
floats written in shortest round-trip form (at most 17 significant digits).
"""
from __future__ import annotations

import hashlib
import json
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Union

from .drawing import Drawing, DrawingError, Graph, edge_key
from .morph import Morph, stage_from_json

DRAWING_FORMAT = "kitemorph-drawing"
MORPH_FORMAT = "kitemorph-morph"
FRAMES_FORMAT = "kitemorph-frames"
VERSION = 1

PathLike = Union[str, Path]


class ParseError(ValueError):
    """Input could not be read; ``where`` locates the problem."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def format_coordinate(x: Fraction) -> str:
    """Shortest exact text: a terminating decimal when one exists, else p/q."""
    x = Fraction(x)
    den, twos, fives = x.denominator, 0, 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    digits = str(abs(x.numerator) * 10 ** places // x.denominator).rjust(places + 1, "0")
    head, tail = digits[:len(digits) - places], digits[len(digits) - places:].rstrip("0")
    sign = "-" if x < 0 else ""
    return f"{sign}{head}.{tail}" if tail else f"{sign}{head}"


def _parse_coordinate(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError("coordinates must be decimal strings or integers", where)
    try:
        if isinstance(value, int):
            return Fraction(value)
        if "/" in value:
            return Fraction(value)
        dec = Decimal(value)
        if not dec.is_finite():
            raise ValueError
        return Fraction(dec)
    except (ValueError, ArithmeticError, ZeroDivisionError):
        raise ParseError(f"bad coordinate {value!r}", where) from None


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None


def _read(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc.strerror or exc), str(path)) from None


def _expect(cond: bool, message: str, where: str):
    if not cond:
        raise ParseError(message, where)


# --- drawings ----------------------------------------------------------------------------

def drawing_to_json(d: Drawing, marked: Iterable[Iterable[str]] = (), steiner: Iterable[str] = ()) -> dict:
    steiner = set(steiner)
    verts = []
    for v in sorted(d.vertices):
        item = {"id": v, "x": format_coordinate(d.positions[v][0]), "y": format_coordinate(d.positions[v][1])}
        if v in steiner:
            item["steiner"] = True
        verts.append(item)
    out = {"format": DRAWING_FORMAT, "version": VERSION, "vertices": verts,
           "edges": [list(e) for e in sorted(d.edges)]}
    marked = sorted(sorted(f) for f in marked)
    if marked:
        out["marked"] = marked
    return out


def drawing_from_json(data: Any, source: str = "<drawing>") -> Drawing:
    _expect(isinstance(data, dict), "expected a JSON object", source)
    _expect(data.get("format", DRAWING_FORMAT) == DRAWING_FORMAT, f"format is not {DRAWING_FORMAT}", source)
    _expect(data.get("version", VERSION) == VERSION, f"unsupported version {data.get('version')!r}", source)
    verts = data.get("vertices")
    _expect(isinstance(verts, list), "missing vertex list", f"{source}/vertices")
    positions: Dict[str, Any] = {}
    for i, item in enumerate(verts):
        where = f"{source}/vertices[{i}]"
        _expect(isinstance(item, dict) and {"id", "x", "y"} <= set(item), "vertex needs id, x, y", where)
        vid = item["id"]
        _expect(isinstance(vid, str) and vid != "", "vertex id must be a non-empty string", where)
        _expect(vid not in positions, f"duplicate vertex id {vid!r}", where)
        positions[vid] = (_parse_coordinate(item["x"], where + ".x"), _parse_coordinate(item["y"], where + ".y"))
    edges_in = data.get("edges", [])
    _expect(isinstance(edges_in, list), "edges must be a list", f"{source}/edges")
    edges, seen = [], set()
    for i, e in enumerate(edges_in):
        where = f"{source}/edges[{i}]"
        _expect(isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e),
                "edge must be a pair of vertex ids", where)
        _expect(e[0] in positions and e[1] in positions, f"edge uses unknown vertex {e!r}", where)
        _expect(e[0] != e[1], "self-loop", where)
        k = edge_key(*e)
        _expect(k not in seen, f"duplicate edge {e!r}", where)
        seen.add(k)
        edges.append(k)
    try:
        return Drawing.build(positions, edges)
    except DrawingError as exc:
        raise ParseError(str(exc), source) from None


def dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=1, ensure_ascii=True, allow_nan=False) + "\n"


def read_drawing(path: PathLike) -> Drawing:
    return drawing_from_json(_load_json(_read(path), str(path)), str(path))


def write_drawing(d: Drawing, path: PathLike, **extra) -> None:
    Path(path).write_text(dumps(drawing_to_json(d, **extra)), encoding="utf-8")


# --- morphs --------------------------------------------------------------------------------

def morph_to_json(m: Morph) -> dict:
    return {"format": MORPH_FORMAT, "version": VERSION,
            "source": drawing_to_json(m.source), "target": drawing_to_json(m.target),
            "riders": [list(g) for g in m.riders], "stage": m.stage.to_json()}


def morph_from_json(data: Any, source: str = "<morph>") -> Morph:
    _expect(isinstance(data, dict) and data.get("format") == MORPH_FORMAT, f"not a {MORPH_FORMAT} file", source)
    _expect(data.get("version") == VERSION, f"unsupported version {data.get('version')!r}", source)
    for key in ("source", "target", "stage"):
        _expect(key in data, f"missing {key!r}", source)
    a = drawing_from_json(data["source"], source + "/source")
    b = drawing_from_json(data["target"], source + "/target")
    try:
        stage = stage_from_json(data["stage"])
        return Morph(a.graph, a, b, stage, riders=tuple(tuple(g) for g in data.get("riders", [])))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed stage tree ({exc})", source + "/stage") from None


def read_morph(path: PathLike) -> Morph:
    return morph_from_json(_load_json(_read(path), str(path)), str(path))


def write_morph(m: Morph, path: PathLike) -> None:
    Path(path).write_text(dumps(morph_to_json(m)), encoding="utf-8")


# --- frame sets ------------------------------------------------------------------------------

def file_hash(path: PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def frames_to_json(times: Sequence[float], frames: Sequence[Mapping[str, Sequence[float]]],
                   graph: Graph, provenance: Optional[dict] = None) -> dict:
    return {"format": FRAMES_FORMAT, "version": VERSION, "provenance": provenance or {},
            "edges": [list(e) for e in sorted(graph.edges)],
            "frames": [{"t": t, "positions": {v: [fr[v][0], fr[v][1]] for v in sorted(fr)}}
                       for t, fr in zip(times, frames)]}


def frames_from_json(data: Any, source: str = "<frames>"):
    """Returns (graph, times, frames)."""
    _expect(isinstance(data, dict) and data.get("format") == FRAMES_FORMAT, f"not a {FRAMES_FORMAT} file", source)
    frames_in = data.get("frames")
    _expect(isinstance(frames_in, list) and len(frames_in) >= 2, "need at least two frames", source)
    times, frames = [], []
    for i, f in enumerate(frames_in):
        where = f"{source}/frames[{i}]"
        try:
            times.append(float(f["t"]))
            frames.append({v: (float(p[0]), float(p[1])) for v, p in f["positions"].items()})
        except (KeyError, TypeError, ValueError, IndexError):
            raise ParseError("malformed frame", where) from None
    verts = set(frames[0])
    _expect(all(set(fr) == verts for fr in frames), "frames have different vertex sets", source)
    try:
        graph = Graph.build(verts, [tuple(e) for e in data.get("edges", [])])
    except (DrawingError, TypeError, ValueError) as exc:
        raise ParseError(str(exc), source + "/edges") from None
    return graph, times, frames


def load_any(path: PathLike):
    """Parse a drawing, morph or frame-set file; returns (kind, object)."""
    data = _load_json(_read(path), str(path))
    kind = data.get("format", DRAWING_FORMAT) if isinstance(data, dict) else None
    if kind == MORPH_FORMAT:
        return "morph", morph_from_json(data, str(path))
    if kind == FRAMES_FORMAT:
        return "frames", frames_from_json(data, str(path))
    return "drawing", drawing_from_json(data, str(path))
