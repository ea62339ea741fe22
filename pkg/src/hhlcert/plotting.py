"""Deterministic SVG plots for reports.

Output depends only on the input rows: fixed canvas, fixed number
formatting, no timestamps or random ids, so files diff cleanly.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .errors import ConfigurationError, InputError

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=72, right=24, top=40, bottom=56)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
KINDS = ("scaling", "sup-ratio")


def _num(v: float) -> str:
    return f"{v:.2f}"


def _label(v: float) -> str:
    return f"{v:.3g}"


def _padded(lo: float, hi: float, frac: float = 0.1):
    if hi == lo:
        span = abs(lo) if lo != 0 else 1.0
        return lo - frac * span, hi + frac * span
    span = hi - lo
    return lo - frac * span, hi + frac * span


class _Canvas:
    def __init__(self, title: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2:.2f}" y="22" text-anchor="middle" font-size="14">'
            f'{escape(title)}</text>',
        ]
        self.x0, self.x1 = MARGIN["left"], WIDTH - MARGIN["right"]
        self.y0, self.y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]

    def add(self, s: str):
        self.parts.append(s)

    def frame(self, xlabel: str, ylabel: str):
        self.add(f'<rect x="{self.x0}" y="{self.y1}" width="{self.x1 - self.x0}" '
                 f'height="{self.y0 - self.y1}" fill="none" stroke="black"/>')
        self.add(f'<text x="{(self.x0 + self.x1) / 2:.2f}" y="{HEIGHT - 14}" '
                 f'text-anchor="middle">{escape(xlabel)}</text>')
        cy = (self.y0 + self.y1) / 2
        self.add(f'<text x="16" y="{cy:.2f}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {cy:.2f})">{escape(ylabel)}</text>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _scale(lo, hi, a, b):
    return lambda v: a + (v - lo) / (hi - lo) * (b - a)


def _scaling(rows, x, y, series, title) -> str:
    pts = []
    for r in rows:
        xv, yv = float(r[x]), float(r[y])
        if xv > 0 and yv > 0:
            pts.append((r.get(series) if series else None, xv, yv))
    if not pts:
        raise InputError("log-log plot needs rows with positive values")
    lx = np.log10([p[1] for p in pts])
    ly = np.log10([p[2] for p in pts])
    xlo, xhi = _padded(float(lx.min()), float(lx.max()))
    ylo, yhi = _padded(float(ly.min()), float(ly.max()))
    c = _Canvas(title or f"{y} vs {x}")
    c.frame(f"{x} (log10)", f"{y} (log10)")
    sx, sy = _scale(xlo, xhi, c.x0, c.x1), _scale(ylo, yhi, c.y0, c.y1)
    for v in np.linspace(xlo, xhi, 5):
        c.add(f'<text x="{_num(sx(v))}" y="{c.y0 + 16}" text-anchor="middle">{_label(10**v)}</text>')
    for v in np.linspace(ylo, yhi, 5):
        c.add(f'<text x="{c.x0 - 6}" y="{_num(sy(v) + 4)}" text-anchor="end">{_label(10**v)}</text>')
    keys = sorted({p[0] for p in pts}, key=lambda k: (k is None, k))
    for i, key in enumerate(keys):
        col = PALETTE[i % len(PALETTE)]
        sel = [(a, b) for (k, _, _), a, b in zip(pts, lx, ly) if k == key]
        for a, b in sel:
            c.add(f'<circle cx="{_num(sx(a))}" cy="{_num(sy(b))}" r="3" fill="{col}"/>')
        text = f"{series}={key:g}" if key is not None else "data"
        xs = np.array([a for a, _ in sel])
        if np.ptp(xs) > 0:
            slope, icpt = np.polyfit(xs, [b for _, b in sel], 1)
            ends = [float(xs.min()), float(xs.max())]
            c.add(f'<line x1="{_num(sx(ends[0]))}" y1="{_num(sy(slope * ends[0] + icpt))}" '
                  f'x2="{_num(sx(ends[1]))}" y2="{_num(sy(slope * ends[1] + icpt))}" '
                  f'stroke="{col}" stroke-dasharray="4 3"/>')
            text += f"  slope {slope:.3f}"
        c.add(f'<text x="{c.x1 - 8}" y="{c.y1 + 18 + 16 * i}" text-anchor="end" '
              f'fill="{col}">{escape(text)}</text>')
    return c.render()


def _sup_ratio(rows, title) -> str:
    labels = [f"{r.get('inequality', '')} {r['case']}".strip() for r in rows]
    sups = [float(r["sup"]) for r in rows]
    claims = [float(r["claimed"]) for r in rows]
    finite = [v for v in sups + claims if math.isfinite(v)]
    top = max(finite) if finite else 1.0
    top = top * 1.1 if top > 0 else 1.0
    c = _Canvas(title or "sup ratio per case")
    c.frame("case", "sup ratio")
    sy = _scale(0.0, top, c.y0, c.y1)
    for v in np.linspace(0.0, top, 5):
        c.add(f'<text x="{c.x0 - 6}" y="{_num(sy(v) + 4)}" text-anchor="end">{_label(v)}</text>')
    slot = (c.x1 - c.x0) / len(rows)
    for i, (lab, s, cl) in enumerate(zip(labels, sups, claims)):
        left = c.x0 + i * slot + 0.2 * slot
        w = 0.6 * slot
        h = min(s, top) if math.isfinite(s) else top
        col = PALETTE[0] if s <= cl * (1 + 1e-6) else PALETTE[1]
        c.add(f'<rect x="{_num(left)}" y="{_num(sy(h))}" width="{_num(w)}" '
              f'height="{_num(c.y0 - sy(h))}" fill="{col}"/>')
        c.add(f'<line x1="{_num(left - 2)}" y1="{_num(sy(min(cl, top)))}" x2="{_num(left + w + 2)}" '
              f'y2="{_num(sy(min(cl, top)))}" stroke="black" stroke-width="2"/>')
        c.add(f'<text x="{_num(left + w / 2)}" y="{c.y0 + 16}" text-anchor="middle" '
              f'font-size="10">{escape(lab)}</text>')
    return c.render()


def emit_plot(table, kind: str, x: str = "t0", y: str = "error_norm",
              series: str | None = "kappa", title: str | None = None) -> str:
    """Render ``table`` (a sequence of dict rows) as an SVG document.

    ``scaling`` draws a log-log scatter of ``y`` against ``x`` with a fitted
    slope per ``series`` value; ``sup-ratio`` draws one bar per row with the
    claimed constant as a tick.
    """
    if kind not in KINDS:
        raise ConfigurationError(f"unknown plot kind {kind!r}; expected one of {KINDS}")
    rows = [dict(r) for r in table]
    if not rows:
        raise InputError("cannot plot an empty table")
    if kind == "scaling":
        return _scaling(rows, x, y, series, title)
    return _sup_ratio(rows, title)


def write_plot(path: str, table, kind: str, **kw) -> str:
    """Render first, then write, so an invalid table leaves no file behind."""
    svg = emit_plot(table, kind, **kw)
    with open(path, "w") as fh:
        fh.write(svg)
    return path
