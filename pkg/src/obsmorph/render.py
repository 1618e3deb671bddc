"""SVG pictures of drawings and SMIL-animated SVG of morphs.

Rationals become decimals with 12 significant digits here and nowhere
else.  Element order follows vertex, edge and obstacle order, so equal
inputs give equal bytes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .drawing import Drawing
from .verify import Morph, verify_morph


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class RenderSpec:
    width: int = 800
    height: int = 800
    margin: int = 20
    edge_width: float = 1.5
    vertex_radius: float = 3.0
    cross_size: float = 3.0
    frames_per_step: int = 1
    seconds_per_step: float = 1.0
    show_obstacles: bool = True
    show_labels: bool = False
    show_forbidden: bool = True

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise RenderError("canvas dimensions must be positive")
        if self.margin < 0 or 2 * self.margin >= min(self.width, self.height):
            raise RenderError("margin must leave a positive drawing area")
        if self.frames_per_step < 1:
            raise RenderError("frames_per_step must be at least 1")
        if self.seconds_per_step <= 0:
            raise RenderError("seconds_per_step must be positive")


def num(x) -> str:
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


class _View:
    """Maps plane coordinates onto the canvas, flipping y."""

    def __init__(self, pts, spec: RenderSpec):
        pts = list(pts)
        if not pts:
            pts = [(0, 0)]
        xs = [Fraction(p[0]) for p in pts]
        ys = [Fraction(p[1]) for p in pts]
        self.x0, self.y1 = min(xs), max(ys)
        w = max(max(xs) - self.x0, Fraction(1))
        h = max(self.y1 - min(ys), Fraction(1))
        self.m = spec.margin
        self.s = min(Fraction(spec.width - 2 * self.m) / w, Fraction(spec.height - 2 * self.m) / h)

    def __call__(self, p):
        return (self.m + (Fraction(p[0]) - self.x0) * self.s, self.m + (self.y1 - Fraction(p[1])) * self.s)


def _header(spec: RenderSpec) -> list[str]:
    return ['<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" height="{spec.height}" '
            f'viewBox="0 0 {spec.width} {spec.height}">',
            f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="white"/>']


def _static_layers(view: _View, obstacles, forbidden, spec: RenderSpec) -> list[str]:
    out = []
    if spec.show_forbidden and forbidden:
        out.append('<g id="forbidden" fill="#d8d8d8" stroke="none">')
        for poly in forbidden:
            pts = " ".join(f"{num(x)},{num(y)}" for x, y in (view(p) for p in poly))
            out.append(f'<polygon points="{pts}"/>')
        out.append("</g>")
    if spec.show_obstacles and obstacles:
        c = spec.cross_size
        out.append(f'<g id="obstacles" stroke="#c00000" stroke-width="{num(spec.edge_width / 1.5)}">')
        for p in obstacles:
            x, y = view(p)
            out.append(f'<path d="M{num(x - c)} {num(y - c)}L{num(x + c)} {num(y + c)}'
                       f'M{num(x - c)} {num(y + c)}L{num(x + c)} {num(y - c)}"/>')
        out.append("</g>")
    return out


def render_drawing(d: Drawing, obstacles: Sequence = (), spec: RenderSpec = RenderSpec(),
                   forbidden: Sequence = ()) -> str:
    """Static SVG: forbidden polygons, obstacle crosses, edges, then vertices."""
    view = _View(list(d.pos) + list(obstacles) + [p for poly in forbidden for p in poly], spec)
    out = _header(spec) + _static_layers(view, obstacles, forbidden, spec)
    pos = [view(p) for p in d.pos]
    out.append(f'<g id="edges" stroke="black" stroke-width="{num(spec.edge_width)}">')
    for u, v in d.graph.edges:
        (x1, y1), (x2, y2) = pos[u], pos[v]
        out.append(f'<line x1="{num(x1)}" y1="{num(y1)}" x2="{num(x2)}" y2="{num(y2)}"/>')
    out.append("</g>")
    out.append('<g id="vertices" fill="black">')
    for x, y in pos:
        out.append(f'<circle cx="{num(x)}" cy="{num(y)}" r="{num(spec.vertex_radius)}"/>')
    out.append("</g>")
    if spec.show_labels:
        out.append('<g id="labels" font-size="10" fill="#0000a0">')
        for v, (x, y) in enumerate(pos):
            out.append(f'<text x="{num(x + spec.vertex_radius)}" y="{num(y - spec.vertex_radius)}">{v}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def frames(m: Morph, per_step: int) -> list[tuple]:
    """Vertex positions at every keyframe: per_step frames per linear step plus the final drawing."""
    out = []
    for a, b in zip(m.drawings, m.drawings[1:]):
        for i in range(per_step):
            t = Fraction(i, per_step)
            out.append(tuple((p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t) for p, q in zip(a.pos, b.pos)))
    out.append(tuple(m.drawings[-1].pos))
    return out


def render_morph(m: Morph, obstacles: Sequence = (), spec: RenderSpec = RenderSpec(),
                 forbidden: Sequence = ()) -> str:
    """Animated SVG of a verified morph; a morph without steps renders as a static picture."""
    bad = verify_morph(m, obstacles)
    if bad is not None:
        raise RenderError(f"refusing to render an invalid morph: {bad.kind} at step {bad.step}")
    if m.steps == 0:
        return render_drawing(m.drawings[0], obstacles, spec, forbidden)
    fr = frames(m, spec.frames_per_step)
    view = _View([p for f in fr for p in f] + list(obstacles) + [p for poly in forbidden for p in poly], spec)
    screen = [[view(p) for p in f] for f in fr]
    k = len(fr) - 1
    key_times = ";".join(num(Fraction(i, k)) for i in range(k + 1))
    dur = num(spec.seconds_per_step * m.steps)
    anim = f'dur="{dur}s" keyTimes="{key_times}" calcMode="linear" fill="freeze"'

    def animate(attr, vals):
        return f'<animate attributeName="{attr}" values="{";".join(num(x) for x in vals)}" {anim}/>'

    out = _header(spec) + _static_layers(view, obstacles, forbidden, spec)
    out.append(f'<g id="edges" stroke="black" stroke-width="{num(spec.edge_width)}">')
    for u, v in m.graph.edges:
        (x1, y1), (x2, y2) = screen[0][u], screen[0][v]
        out.append(f'<line x1="{num(x1)}" y1="{num(y1)}" x2="{num(x2)}" y2="{num(y2)}">')
        for attr, w, c in (("x1", u, 0), ("y1", u, 1), ("x2", v, 0), ("y2", v, 1)):
            out.append(animate(attr, [s[w][c] for s in screen]))
        out.append("</line>")
    out.append("</g>")
    out.append('<g id="vertices" fill="black">')
    for v in range(m.graph.n):
        x, y = screen[0][v]
        out.append(f'<circle cx="{num(x)}" cy="{num(y)}" r="{num(spec.vertex_radius)}">')
        out.append(animate("cx", [s[v][0] for s in screen]))
        out.append(animate("cy", [s[v][1] for s in screen]))
        out.append("</circle>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
