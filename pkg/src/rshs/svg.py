"""Minimal self-contained SVG line charts (linear or logarithmic axes)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo, hi, log):
    if log:
        a, b = math.floor(lo), math.ceil(hi)
        return [float(k) for k in range(a, b + 1)]
    span = hi - lo or 1.0
    step = 10 ** math.floor(math.log10(span / 4))
    for m in (1, 2, 5, 10):
        if span / (m * step) <= 6:
            step *= m
            break
    start = math.ceil(lo / step) * step
    out, v = [], start
    while v <= hi + 1e-12 * span:
        out.append(v)
        v += step
    return out


def line_chart(series, title="", xlabel="", ylabel="", logx=False, logy=False, width=640, height=420):
    """Render ``series`` = [(label, xs, ys), ...] to an SVG string.

    Points with non-positive coordinates on a log axis are dropped.
    """
    ml, mr, mt, mb = 70, 20, 40, 55
    tx = (lambda v: math.log10(v)) if logx else float
    ty = (lambda v: math.log10(v)) if logy else float
    pts = []
    for label, xs, ys in series:
        keep = [
            (tx(x), ty(y))
            for x, y in zip(xs, ys)
            if math.isfinite(x) and math.isfinite(y) and (x > 0 or not logx) and (y > 0 or not logy)
        ]
        pts.append((label, keep))
    allx = [p[0] for _, ps in pts for p in ps] or [0.0, 1.0]
    ally = [p[1] for _, ps in pts for p in ps] or [0.0, 1.0]
    x0, x1 = min(allx), max(allx)
    y0, y1 = min(ally), max(ally)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = width - ml - mr, height - mt - mb

    def X(v):
        return ml + (v - x0) / (x1 - x0) * pw

    def Y(v):
        return mt + (1.0 - (v - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for v in _ticks(x0, x1, logx):
        if x0 - 1e-12 <= v <= x1 + 1e-12:
            lab = f"1e{int(v)}" if logx else f"{v:g}"
            out.append(f'<line x1="{X(v):.1f}" y1="{mt + ph}" x2="{X(v):.1f}" y2="{mt + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{X(v):.1f}" y="{mt + ph + 18}" text-anchor="middle">{lab}</text>')
    for v in _ticks(y0, y1, logy):
        if y0 - 1e-12 <= v <= y1 + 1e-12:
            lab = f"1e{int(v)}" if logy else f"{v:g}"
            out.append(f'<line x1="{ml - 5}" y1="{Y(v):.1f}" x2="{ml}" y2="{Y(v):.1f}" stroke="black"/>')
            out.append(f'<text x="{ml - 8}" y="{Y(v) + 4:.1f}" text-anchor="end">{lab}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{mt + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {mt + ph / 2})">{escape(ylabel)}</text>'
    )
    for i, (label, ps) in enumerate(pts):
        color = PALETTE[i % len(PALETTE)]
        if len(ps) > 1:
            path = " ".join(f"{X(a):.2f},{Y(b):.2f}" for a, b in ps)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for a, b in ps:
            out.append(f'<circle cx="{X(a):.2f}" cy="{Y(b):.2f}" r="3" fill="{color}"/>')
        out.append(
            f'<text x="{ml + 10}" y="{mt + 16 + 15 * i}" fill="{color}">{escape(str(label))}</text>'
        )
    out.append("</svg>")
    return "\n".join(out)
