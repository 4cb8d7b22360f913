"""Deterministic SVG figures and JSON result records."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .hypersurface import TropicalComplex

STROKE = 1.5  # px per unit of weight
SIZE = 480
PAD = 24


@dataclass
class Viewport:
    window: tuple[float, float, float, float]
    width: int = SIZE
    height: int = SIZE

    def __call__(self, x, y) -> tuple[float, float]:
        x0, x1, y0, y1 = self.window
        sx = (self.width - 2 * PAD) / (x1 - x0)
        sy = (self.height - 2 * PAD) / (y1 - y0)
        return PAD + (float(x) - x0) * sx, self.height - PAD - (float(y) - y0) * sy


@dataclass
class Layer:
    kind: str  # "raster", "complex", "points", "segments", "subdivision"
    data: object
    color: str = "#000000"
    opacity: float = 1.0


@dataclass
class FigureSpec:
    window: tuple[float, float, float, float]
    layers: list[Layer] = field(default_factory=list)
    title: str = ""
    axes: bool = True


def _f(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _clip(p, d, window):
    """Largest s >= 0 with p + s d still in the (slightly enlarged) window."""
    x0, x1, y0, y1 = window
    big = 2 * max(x1 - x0, y1 - y0) + abs(p[0]) + abs(p[1])
    s = big / max(math.hypot(*d), 1e-300)
    return p[0] + s * d[0], p[1] + s * d[1]


def _complex_elements(C: TropicalComplex, vp: Viewport, color: str) -> list[str]:
    out = []
    V = [(float(a), float(b)) for a, b in C.vertices]

    def line(p, q, w):
        (a, b), (c, d) = vp(*p), vp(*q)
        out.append(
            f'<line x1="{_f(a)}" y1="{_f(b)}" x2="{_f(c)}" y2="{_f(d)}" stroke="{color}" stroke-width="{_f(STROKE * w)}"/>'
        )

    for e in C.edges:
        line(V[e.u], V[e.v], e.weight)
    for r in C.rays:
        line(V[r.vertex], _clip(V[r.vertex], r.direction, vp.window), r.weight)
    for ln in C.lines:
        p = (float(ln.point[0]), float(ln.point[1]))
        d = ln.direction
        line(_clip(p, (-d[0], -d[1]), vp.window), _clip(p, d, vp.window), ln.weight)
    for v in V:
        a, b = vp(*v)
        out.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="2" fill="{color}"/>')
    return out


def _raster_elements(member: np.ndarray, window, vp: Viewport, color: str, opacity: float) -> list[str]:
    """Member cells merged into horizontal runs."""
    ny, nx = member.shape
    x0, x1, y0, y1 = window
    hx, hy = (x1 - x0) / nx, (y1 - y0) / ny
    out = []
    for iy in range(ny):
        row = member[iy]
        ix = 0
        while ix < nx:
            if not row[ix]:
                ix += 1
                continue
            start = ix
            while ix < nx and row[ix]:
                ix += 1
            a, b = vp(x0 + start * hx, y0 + (iy + 1) * hy)
            c, d = vp(x0 + ix * hx, y0 + iy * hy)
            out.append(
                f'<rect x="{_f(a)}" y="{_f(b)}" width="{_f(c - a)}" height="{_f(d - b)}" fill="{color}" fill-opacity="{_f(opacity)}"/>'
            )
    return out


def _subdivision_elements(sub, vp_box: tuple[float, float, float], color: str) -> list[str]:
    """Small inset of a dual subdivision at (left, top) with the given size."""
    left, top, size = vp_box
    pts = [p for c in sub.cells for p in c.polygon.vertices]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)

    def tr(p):
        return left + (p[0] - min(xs)) * size / span, top + size - (p[1] - min(ys)) * size / span

    out = [f'<rect x="{_f(left)}" y="{_f(top)}" width="{_f(size)}" height="{_f(size)}" fill="#ffffff" stroke="#999999"/>']
    for c in sub.cells:
        q = " ".join(f"{_f(a)},{_f(b)}" for a, b in (tr(p) for p in c.polygon.vertices))
        out.append(f'<polygon points="{q}" fill="none" stroke="{color}" stroke-width="1"/>')
    return out


def svg_text(spec: FigureSpec, width: int = SIZE, height: int = SIZE) -> str:
    vp = Viewport(tuple(float(v) for v in spec.window), width, height)
    body = [f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>']
    if spec.axes:
        x0, x1, y0, y1 = vp.window
        if x0 <= 0 <= x1:
            a, b = vp(0, y0)
            c, d = vp(0, y1)
            body.append(f'<line x1="{_f(a)}" y1="{_f(b)}" x2="{_f(c)}" y2="{_f(d)}" stroke="#cccccc" stroke-width="0.5"/>')
        if y0 <= 0 <= y1:
            a, b = vp(x0, 0)
            c, d = vp(x1, 0)
            body.append(f'<line x1="{_f(a)}" y1="{_f(b)}" x2="{_f(c)}" y2="{_f(d)}" stroke="#cccccc" stroke-width="0.5"/>')
    for layer in spec.layers:
        if layer.kind == "raster":
            member, window = layer.data
            body += _raster_elements(member, window, vp, layer.color, layer.opacity)
        elif layer.kind == "complex":
            body += _complex_elements(layer.data, vp, layer.color)
        elif layer.kind == "points":
            for p in np.asarray(layer.data, float).reshape(-1, 2):
                a, b = vp(*p)
                body.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="1" fill="{layer.color}"/>')
        elif layer.kind == "segments":
            for p, q, w in layer.data:
                a, b = vp(*p)
                c, d = vp(*q)
                body.append(
                    f'<line x1="{_f(a)}" y1="{_f(b)}" x2="{_f(c)}" y2="{_f(d)}" stroke="{layer.color}" stroke-width="{_f(STROKE * w)}"/>'
                )
        elif layer.kind == "subdivision":
            body += _subdivision_elements(layer.data, (width - PAD - 96, PAD, 96), layer.color)
        else:
            raise ValueError(f"unknown layer kind {layer.kind!r}")
    # a clip path keeps clipped rays inside the plot area
    clip = f'<clipPath id="plot"><rect x="0" y="0" width="{width}" height="{height}"/></clipPath>'
    title = f"<title>{spec.title}</title>" if spec.title else ""
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
        + title
        + "<defs>"
        + clip
        + '</defs><g clip-path="url(#plot)">'
        + "\n".join(body)
        + "</g></svg>\n"
    )


def render_svg(spec: FigureSpec, path) -> Path:
    path = Path(path)
    path.write_text(svg_text(spec), encoding="utf-8")
    return path


def quadrant_panels(real_set, window) -> str:
    """Four panels, one per sign quadrant, each drawn in tropical coordinates."""
    from .patchwork import QUADRANTS

    panels = []
    half = SIZE // 2
    for q in QUADRANTS:
        segs = []
        for kind, p, other in real_set.segments(q):
            p = (float(p[0]), float(p[1]))
            if kind == "e":
                segs.append((p, (float(other[0]), float(other[1])), 1))
            else:
                segs.append((p, _clip(p, other, window), 1))
        spec = FigureSpec(window, [Layer("segments", segs)], title=f"quadrant {q[0]}{q[1]}")
        inner = svg_text(spec, half, half)
        # the panel for (e1, e2) sits in column e1, row 1 - e2
        ox, oy = q[0] * half, (1 - q[1]) * half
        panels.append(f'<g transform="translate({ox},{oy})">' + inner + "</g>")
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">'
        + "\n".join(panels)
        + "</svg>\n"
    )


def to_record(obj):
    """JSON-ready copy: floats as decimal strings, fractions as exact ``p/q``."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        return repr(float(obj))
    if isinstance(obj, complex):
        return {"re": repr(obj.real), "im": repr(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): to_record(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_record(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_record(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_results(record: dict, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(to_record(record), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
