"""Animated SVG output.

Vertices are circles and edges are lines; each attribute that changes over
time gets a SMIL ``<animate>`` with one keyframe per sample.  Crossing edges
are drawn dashed in red, kite edges in blue and kite interiors are shaded
green.  A single frame gives a static picture.
"""
from __future__ import annotations

from typing import List, Mapping, Sequence, Tuple
from xml.sax.saxutils import escape

from .drawing import Drawing, Graph
from .kites import detect_kites

Frame = Mapping[str, Sequence[float]]

THEME = {
    "background": "#ffffff",
    "edge": "#444444",
    "kite_edge": "#1f5fbf",
    "crossing_edge": "#c8302c",
    "kite_fill": "#c9e8c4",
    "vertex": "#222222",
    "vertex_stroke": "#ffffff",
}


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Viewport:
    """Maps drawing coordinates (y up) into SVG coordinates (y down)."""

    def __init__(self, frames: Sequence[Frame], size: float, margin: float):
        xs = [p[0] for fr in frames for p in fr.values()]
        ys = [p[1] for fr in frames for p in fr.values()]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), 1e-12)
        self.scale = (size - 2 * margin) / span
        self.margin = margin
        self.width = (max(xs) - self.x0) * self.scale + 2 * margin
        self.height = (self.y1 - min(ys)) * self.scale + 2 * margin

    def __call__(self, p) -> Tuple[float, float]:
        return ((p[0] - self.x0) * self.scale + self.margin, (self.y1 - p[1]) * self.scale + self.margin)


def _animated(tag: str, attrs: List[Tuple[str, List[str]]], style: str, timing: str) -> str:
    static = " ".join(f'{k}="{vals[0]}"' for k, vals in attrs)
    anims = "".join(
        f'<animate attributeName="{k}" values="{";".join(vals)}" {timing}/>'
        for k, vals in attrs if len(set(vals)) > 1)
    if not anims:
        return f"<{tag} {static} {style}/>"
    return f"<{tag} {static} {style}>{anims}</{tag}>"


def render_svg(graph: Graph, frames: Sequence[Frame], fps: float = 30.0, size: float = 600.0,
               reference: Drawing = None, labels: bool = True, theme: Mapping[str, str] = THEME) -> str:
    """Self-contained SVG; ``reference`` (default: the first frame) decides
    which edges are kite or crossing edges."""
    if not frames:
        raise ValueError("nothing to render")
    ref = reference or Drawing(graph, frames[0])
    kites = detect_kites(ref)
    crossing = {e for k in kites for e in k.crossing_edges}
    kite_edges = {e for k in kites for e in k.kite_edges}
    view = _Viewport(frames, size, 20.0)
    pts = [{v: view(p) for v, p in fr.items()} for fr in frames]
    n = len(frames)
    timing = ""
    if n > 1:
        dur = n / fps
        keys = ";".join(_fmt(i / (n - 1)) for i in range(n))
        timing = f'dur="{_fmt(dur)}s" keyTimes="{keys}" repeatCount="indefinite"'

    def series(v, k):
        return [_fmt(p[v][k]) for p in pts]

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(view.width)}" height="{_fmt(view.height)}" '
           f'viewBox="0 0 {_fmt(view.width)} {_fmt(view.height)}">',
           f'<rect width="100%" height="100%" fill="{theme["background"]}"/>']
    for k in kites:
        poly = [" ".join(f"{_fmt(p[c][0])},{_fmt(p[c][1])}" for c in k.corners) for p in pts]
        out.append(_animated("polygon", [("points", poly)], f'fill="{theme["kite_fill"]}" stroke="none"', timing))
    for e in sorted(graph.edges):
        if e in crossing:
            style = f'stroke="{theme["crossing_edge"]}" stroke-width="1.5" stroke-dasharray="5,3"'
        elif e in kite_edges:
            style = f'stroke="{theme["kite_edge"]}" stroke-width="2"'
        else:
            style = f'stroke="{theme["edge"]}" stroke-width="1.5"'
        attrs = [("x1", series(e[0], 0)), ("y1", series(e[0], 1)), ("x2", series(e[1], 0)), ("y2", series(e[1], 1))]
        out.append(_animated("line", attrs, style, timing))
    for v in sorted(graph.vertices):
        style = f'r="4" fill="{theme["vertex"]}" stroke="{theme["vertex_stroke"]}" stroke-width="1"'
        out.append(_animated("circle", [("cx", series(v, 0)), ("cy", series(v, 1))], style, timing))
        if labels:
            attrs = [("x", [_fmt(float(x) + 6) for x in series(v, 0)]), ("y", [_fmt(float(y) - 6) for y in series(v, 1)])]
            text = _animated("text", attrs, 'font-family="sans-serif" font-size="11" fill="#333333"', timing)
            out.append(text.replace("/>", f">{escape(v)}</text>", 1) if text.endswith("/>")
                       else text.replace("</text>", f"{escape(v)}</text>"))
    out.append("</svg>")
    return "\n".join(out) + "\n"
