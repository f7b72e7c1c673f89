"""Minimal standalone SVG line plots (no plotting dependency, stable text output)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .errors import DomainError

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass(frozen=True)
class Series:
    name: str
    x: tuple
    y: tuple
    low: tuple | None = None
    high: tuple | None = None


@dataclass(frozen=True)
class SvgPlot:
    text: str
    dropped: int


def series_from_tail(curve, name: str | None = None) -> Series:
    """A TailCurve as a series with its Wilson band."""
    rows = curve.rows
    return Series(name or curve.label or "tail", tuple(r[0] for r in rows), tuple(r[3] for r in rows),
                  tuple(r[4] for r in rows), tuple(r[5] for r in rows))


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo, hi, log):
    if log:
        a, b = math.floor(lo), math.ceil(hi)
        return [float(k) for k in range(a, b + 1)]
    return list(np.linspace(lo, hi, 5))


def plot_svg(series, loglog: bool = False, title: str = "", xlabel: str = "x", ylabel: str = "y",
             width: int = 640, height: int = 420) -> SvgPlot:
    """Render one polyline per series, with a shaded band where ``low``/``high`` exist.

    In log-log mode points with a nonpositive coordinate are dropped and
    counted in ``SvgPlot.dropped``.
    """
    if isinstance(series, Series) or hasattr(series, "rows"):
        series = [series]
    series = [series_from_tail(s) if hasattr(s, "rows") else s for s in series]
    if not series or all(len(s.x) == 0 for s in series):
        raise DomainError("nothing to plot")
    dropped = 0
    prepared = []
    for s in series:
        x = np.asarray(s.x, dtype=float)
        y = np.asarray(s.y, dtype=float)
        lo = np.asarray(s.low, dtype=float) if s.low is not None else None
        hi = np.asarray(s.high, dtype=float) if s.high is not None else None
        keep = np.isfinite(x) & np.isfinite(y)
        if loglog:
            keep &= (x > 0) & (y > 0)
        dropped += int((~keep).sum())
        x, y = x[keep], y[keep]
        if lo is not None:
            lo, hi = lo[keep], hi[keep]
            if loglog:
                # a zero lower band edge is clipped to the smallest plotted value
                floor = y.min() if len(y) else 1.0
                lo = np.where(lo > 0, lo, floor)
        if loglog:
            x, y = np.log10(x), np.log10(y)
            if lo is not None:
                lo, hi = np.log10(lo), np.log10(hi)
        prepared.append((s.name, x, y, lo, hi))
    allx = np.concatenate([p[1] for p in prepared])
    ally = np.concatenate([p[2] for p in prepared] + [p[3] for p in prepared if p[3] is not None]
                          + [p[4] for p in prepared if p[4] is not None])
    if len(allx) == 0:
        raise DomainError("no plottable points remain")
    x0, x1 = float(allx.min()), float(allx.max())
    y0, y1 = float(ally.min()), float(ally.max())
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    ml, mr, mt, mb = 70, 20, 36, 50
    pw, ph = width - ml - mr, height - mt - mb

    def sx(v):
        return ml + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return mt + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>',
    ]
    for v in _ticks(x0, x1, loglog):
        if x0 - 1e-9 <= v <= x1 + 1e-9:
            lab = f"1e{int(v)}" if loglog else f"{v:.3g}"
            out.append(f'<text x="{_fmt(sx(v))}" y="{mt + ph + 18}" text-anchor="middle" font-size="11">{lab}</text>')
    for v in _ticks(y0, y1, loglog):
        if y0 - 1e-9 <= v <= y1 + 1e-9:
            lab = f"1e{int(v)}" if loglog else f"{v:.3g}"
            out.append(f'<text x="{ml - 6}" y="{_fmt(sy(v) + 4)}" text-anchor="end" font-size="11">{lab}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{height - 10}" text-anchor="middle" font-size="13">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{mt + ph / 2}" text-anchor="middle" font-size="13" '
               f'transform="rotate(-90 16 {mt + ph / 2})">{escape(ylabel)}</text>')
    for i, (name, x, y, lo, hi) in enumerate(prepared):
        colour = PALETTE[i % len(PALETTE)]
        if lo is not None and len(x):
            ring = [(sx(a), sy(b)) for a, b in zip(x, hi)] + [(sx(a), sy(b)) for a, b in zip(x[::-1], lo[::-1])]
            pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in ring)
            out.append(f'<polygon class="band" points="{pts}" fill="{colour}" fill-opacity="0.2" stroke="none"/>')
        pts = " ".join(f"{_fmt(sx(a))},{_fmt(sy(b))}" for a, b in zip(x, y))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="1.5"/>')
        out.append(f'<text x="{ml + pw - 4}" y="{mt + 14 + 14 * i}" text-anchor="end" font-size="11" '
                   f'fill="{colour}">{escape(name)}</text>')
    out.append("</svg>")
    return SvgPlot("\n".join(out) + "\n", dropped)


def geodesic_svg(edges, size: int = 720, margin: int = 20) -> str:
    """Edges ``((x1, y1), (x2, y2), count)`` drawn rotated by 45 degrees.

    The screen axes are ``psi = x - y`` across and ``phi = x + y`` upward, and
    each edge's stroke width is ``log(1 + count)``.
    """
    if not edges:
        raise DomainError("no edges to draw")
    psi = [p[0] - p[1] for e in edges for p in e[:2]]
    phi = [p[0] + p[1] for e in edges for p in e[:2]]
    p0, p1, t0, t1 = min(psi), max(psi), min(phi), max(phi)
    scale = (size - 2 * margin) / max(p1 - p0, t1 - t0, 1)
    width = int(2 * margin + (p1 - p0) * scale)
    height = int(2 * margin + (t1 - t0) * scale)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>']
    for a, b, count in edges:
        xa = margin + (a[0] - a[1] - p0) * scale
        ya = height - margin - (a[0] + a[1] - t0) * scale
        xb = margin + (b[0] - b[1] - p0) * scale
        yb = height - margin - (b[0] + b[1] - t0) * scale
        out.append(f'<line x1="{_fmt(xa)}" y1="{_fmt(ya)}" x2="{_fmt(xb)}" y2="{_fmt(yb)}" '
                   f'stroke="black" stroke-linecap="round" stroke-width="{math.log1p(count):.4f}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
