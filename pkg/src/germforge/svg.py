"""Standalone SVG 1.1 plots of bifurcation diagrams and two-parameter transition sets."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .classify import BifurcationDiagram
from .errors import GermforgeError
from .transition import CompiledSystem, TransitionSet

WIDTH, HEIGHT, MARGIN = 480, 400, 50
COLORS = {"B": "#1f77b4", "H": "#d62728", "D": "#2ca02c"}


class _Canvas:
    def __init__(self, xr, yr, xlabel, ylabel, title=""):
        self.xr, self.yr = xr, yr
        self.parts = []
        self.xlabel, self.ylabel, self.title = xlabel, ylabel, title

    def px(self, x, y):
        (x0, x1), (y0, y1) = self.xr, self.yr
        u = MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)
        v = HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2 * MARGIN)
        return u, v

    def polyline(self, pts, color, width=1.5):
        if len(pts) < 2:
            return
        d = " ".join(f"{u:.2f},{v:.2f}" for u, v in (self.px(x, y) for x, y in pts))
        self.parts.append(f'<polyline points="{d}" fill="none" stroke="{color}" stroke-width="{width}"/>')

    def dot(self, x, y, color, r=3):
        u, v = self.px(x, y)
        self.parts.append(f'<circle cx="{u:.2f}" cy="{v:.2f}" r="{r}" fill="{color}"/>')

    def render(self) -> str:
        (x0, x1), (y0, y1) = self.xr, self.yr
        left, right = MARGIN, WIDTH - MARGIN
        top, bottom = MARGIN, HEIGHT - MARGIN
        axes = [
            f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" fill="none" stroke="#000"/>',
            f'<text x="{(left + right) / 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="14">{escape(self.xlabel)}</text>',
            f'<text x="14" y="{(top + bottom) / 2}" text-anchor="middle" font-size="14" '
            f'transform="rotate(-90 14 {(top + bottom) / 2})">{escape(self.ylabel)}</text>',
            f'<text x="{left}" y="{bottom + 16}" font-size="10">{x0:.3g}</text>',
            f'<text x="{right}" y="{bottom + 16}" font-size="10" text-anchor="end">{x1:.3g}</text>',
            f'<text x="{left - 4}" y="{bottom}" font-size="10" text-anchor="end">{y0:.3g}</text>',
            f'<text x="{left - 4}" y="{top + 8}" font-size="10" text-anchor="end">{y1:.3g}</text>',
        ]
        if self.title:
            axes.append(f'<text x="{(left + right) / 2}" y="{top - 14}" text-anchor="middle" font-size="13">{escape(self.title)}</text>')
        body = "\n".join(axes + self.parts)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">\n<rect width="100%" height="100%" fill="#fff"/>\n{body}\n</svg>\n'
        )


def diagram_svg(diagram: BifurcationDiagram, title: str = "") -> str:
    """lambda horizontal, state variable x vertical; folds marked."""
    xs = [x for rs in diagram.roots for x in rs] + [lp.x for lp in diagram.limit_points]
    lo, hi = (min(xs), max(xs)) if xs else (-1.0, 1.0)
    pad = 0.1 * (hi - lo) if hi > lo else 1.0
    c = _Canvas((diagram.lambdas[0], diagram.lambdas[-1]), (lo - pad, hi + pad), "lambda", "x", title)
    for br in diagram.branches:
        c.polyline(br, "#000")
    for lp in diagram.limit_points:
        c.dot(lp.lam, lp.x, "#d62728")
    return c.render()


def transition_svg(T: TransitionSet, box=None, resolution: int = 400, regions=None, title: str = "") -> str:
    """Realised parts of the transition-set curves in a two-parameter plane."""
    params = T.parameters
    if len(params) > 2:
        raise GermforgeError("transition-set plots need at most two parameters; use --json instead")
    box = list(box or [(-1.0, 1.0)] * max(len(params), 1))
    if len(params) < 2:
        xr = box[0] if params else (-1.0, 1.0)
        c = _Canvas(xr, (-1.0, 1.0), params[0] if params else "", "", title)
        if params:
            for piece in T.pieces():
                from .roots import real_roots

                coeffs = [0] * (piece.poly.degree() + 1)
                for e, v in piece.poly.embed(params).terms.items():
                    coeffs[len(coeffs) - 1 - e[0]] += v
                for r in real_roots(coeffs)[0]:
                    if xr[0] <= r <= xr[1] and piece.realized({params[0]: r}):
                        c.dot(r, 0.0, COLORS[piece.component], 4)
        return c.render()
    import contourpy

    c = _Canvas(box[0], box[1], params[0], params[1], title)
    xs = np.linspace(box[0][0], box[0][1], resolution)
    ys = np.linspace(box[1][0], box[1][1], resolution)
    X, Y = np.meshgrid(xs, ys)
    pts = np.stack([X, Y], axis=-1)
    for piece in T.pieces():
        Z = CompiledSystem([piece.poly], params).evaluate_many(pts)[0]
        gen = contourpy.contour_generator(X, Y, Z)
        for line in gen.lines(0.0):
            ok = piece.realized_array({params[0]: line[:, 0], params[1]: line[:, 1]})
            ok = np.ones(len(line), dtype=bool) if ok is None else ok
            run = []
            for p, flag in zip(line, ok):
                if flag:
                    run.append((float(p[0]), float(p[1])))
                else:
                    c.polyline(run, COLORS[piece.component], 2)
                    run = []
            c.polyline(run, COLORS[piece.component], 2)
    for r in regions or []:
        c.dot(r.point[0], r.point[1], "#555", 2.5)
        u, v = c.px(r.point[0], r.point[1])
        c.parts.append(f'<text x="{u + 4:.2f}" y="{v - 4:.2f}" font-size="11">{r.id}</text>')
    return c.render()


def emit_svg(obj, path, **kw):
    """Write a diagram or transition-set SVG to ``path``."""
    if isinstance(obj, BifurcationDiagram):
        text = diagram_svg(obj, **kw)
    elif isinstance(obj, TransitionSet):
        text = transition_svg(obj, **kw)
    else:
        raise TypeError(f"cannot plot {type(obj).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path
