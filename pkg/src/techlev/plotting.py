"""Self-contained SVG charts (no plotting library).

Two chart kinds cover the figures: line series over a linear x axis and
scatter series where either axis may be log10-scaled.
"""

from __future__ import annotations

import math
from datetime import datetime, timezone
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 500
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 160, 50, 70
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd")

Series = Tuple[str, Sequence[Tuple[float, float]]]


class _Axis:
    def __init__(self, lo, hi, pixel_lo, pixel_hi, log=False):
        if log:
            lo, hi = math.log10(lo), math.log10(hi)
        if hi <= lo:
            lo, hi = lo - 0.5, hi + 0.5
        self.lo, self.hi, self.log = lo, hi, log
        self.p0, self.p1 = pixel_lo, pixel_hi

    def __call__(self, v: float) -> float:
        if self.log:
            v = math.log10(v)
        return self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)

    def ticks(self) -> List[Tuple[float, str]]:
        if self.log:
            out = []
            for e in range(math.floor(self.lo), math.ceil(self.hi) + 1):
                if self.lo - 1e-9 <= e <= self.hi + 1e-9:
                    out.append((10.0 ** e, f"1e{e}"))
            return out
        step = _nice_step((self.hi - self.lo) / 6)
        start = math.ceil(self.lo / step) * step
        out = []
        v = start
        while v <= self.hi + 1e-9 * step:
            out.append((v, f"{v:g}"))
            v += step
        return out


def _nice_step(raw: float) -> float:
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if raw <= m * mag:
            return m * mag
    return 10 * mag


def _frame(title, x_label, y_label, xa: _Axis, ya: _Axis, deterministic: bool) -> List[str]:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
    ]
    if not deterministic:
        stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        out.append(f"<!-- generated {stamp} -->")
    left, right, top, bottom = MARGIN_L, WIDTH - MARGIN_R, MARGIN_T, HEIGHT - MARGIN_B
    out.append('<rect width="100%" height="100%" fill="#ffffff"/>')
    out.append(f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" font-size="16">{escape(title)}</text>')
    for v, label in xa.ticks():
        x = xa(v)
        out.append(f'<line x1="{x:.2f}" y1="{top}" x2="{x:.2f}" y2="{bottom}" stroke="#e5e5e5"/>')
        out.append(f'<text x="{x:.2f}" y="{bottom + 18}" text-anchor="middle" font-size="11">{label}</text>')
    for v, label in ya.ticks():
        y = ya(v)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{right}" y2="{y:.2f}" stroke="#e5e5e5"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end" font-size="11">{label}</text>')
    out.append(f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="#000"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="#000"/>')
    out.append(f'<text class="x-label" x="{(left + right) / 2:.1f}" y="{HEIGHT - 20}" '
               f'text-anchor="middle" font-size="13">{escape(x_label)}</text>')
    out.append(f'<text class="y-label" x="20" y="{(top + bottom) / 2:.1f}" text-anchor="middle" font-size="13" '
               f'transform="rotate(-90 20 {(top + bottom) / 2:.1f})">{escape(y_label)}</text>')
    return out


def _legend(names: Sequence[str]) -> List[str]:
    out = []
    x = WIDTH - MARGIN_R + 15
    for i, name in enumerate(names):
        y = MARGIN_T + 10 + 20 * i
        color = COLORS[i % len(COLORS)]
        out.append(f'<rect x="{x}" y="{y - 9}" width="12" height="12" fill="{color}"/>')
        out.append(f'<text x="{x + 18}" y="{y + 1}" font-size="12">{escape(name)}</text>')
    return out


def _check(series: Sequence[Series]) -> None:
    if not series or not any(len(points) for _, points in series):
        raise ValueError("nothing to plot: all series are empty")


def line_chart_svg(title: str, x_label: str, y_label: str, series: Sequence[Series],
                   deterministic: bool = False) -> str:
    """One ``<path>`` per non-empty series."""
    _check(series)
    series = [(n, pts) for n, pts in series if len(pts)]
    xs = [p[0] for _, pts in series for p in pts]
    ys = [p[1] for _, pts in series for p in pts]
    xa = _Axis(min(xs), max(xs), MARGIN_L, WIDTH - MARGIN_R)
    ya = _Axis(0.0, max(ys) * 1.05 if max(ys) > 0 else 1.0, HEIGHT - MARGIN_B, MARGIN_T)
    out = _frame(title, x_label, y_label, xa, ya, deterministic)
    for i, (name, pts) in enumerate(series):
        d = " ".join(f"{'M' if j == 0 else 'L'}{xa(x):.2f},{ya(y):.2f}" for j, (x, y) in enumerate(pts))
        out.append(f'<path class="series" data-name="{escape(name)}" d="{d}" fill="none" '
                   f'stroke="{COLORS[i % len(COLORS)]}" stroke-width="2"/>')
    out.extend(_legend([n for n, _ in series]))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def scatter_svg(title: str, x_label: str, y_label: str, series: Sequence[Series],
                log_x: bool = False, log_y: bool = False, deterministic: bool = False,
                hline: Optional[float] = None) -> str:
    """Scatter plot; points that cannot be placed on a log axis are dropped."""
    kept = []
    for name, pts in series:
        pts = [(x, y) for x, y in pts if (not log_x or x > 0) and (not log_y or y > 0)]
        kept.append((name, pts))
    _check(kept)
    kept = [(n, pts) for n, pts in kept if pts]
    xs = [p[0] for _, pts in kept for p in pts]
    ys = [p[1] for _, pts in kept for p in pts]
    if hline is not None and (not log_y or hline > 0):
        ys.append(hline)
    xa = _Axis(min(xs), max(xs), MARGIN_L, WIDTH - MARGIN_R, log=log_x)
    ya = _Axis(min(ys), max(ys), HEIGHT - MARGIN_B, MARGIN_T, log=log_y)
    out = _frame(title, x_label, y_label, xa, ya, deterministic)
    if hline is not None and (not log_y or hline > 0):
        y = ya(hline)
        out.append(f'<line x1="{MARGIN_L}" y1="{y:.2f}" x2="{WIDTH - MARGIN_R}" y2="{y:.2f}" '
                   f'stroke="#555" stroke-dasharray="6 4"/>')
    for i, (name, pts) in enumerate(kept):
        color = COLORS[i % len(COLORS)]
        out.append(f'<g class="series" data-name="{escape(name)}" fill="{color}" fill-opacity="0.7">')
        out.extend(f'<circle cx="{xa(x):.2f}" cy="{ya(y):.2f}" r="3"/>' for x, y in pts)
        out.append("</g>")
    out.extend(_legend([n for n, _ in kept]))
    out.append("</svg>")
    return "\n".join(out) + "\n"
