"""Static SVG rendering of curves, without a plotting library.

Output is a pure function of the inputs: fixed canvas, fixed palette,
fixed number formatting, no timestamps or random ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 480
MARGIN = dict(left=70, right=160, top=30, bottom=55)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")

AXIS_TITLES = {
    "bandwidth": "Bandwidth",
    "excess": "Excess",
    "miss_rate": "Miss rate",
    "deficit": "Deficit",
}


@dataclass
class Series:
    label: str
    xs: list
    ys: list
    dashed: bool = False
    marker: tuple | None = None  # (x, y) drawn as a hollow circle


def axis_title(metric: str, normalization: str) -> str:
    title = AXIS_TITLES.get(metric, metric)
    if metric == "miss_rate":
        return f"{title} (fraction)"
    units = "std units" if normalization == "std_units" else "target units"
    return f"{title} ({units})"


def nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if not hi > lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        step = m * mag
        if raw <= step:
            break
    first = math.ceil(lo / step - 1e-9)
    ticks = []
    t = first
    while t * step <= hi + 1e-9 * step:
        ticks.append(round(t * step, 12))
        t += 1
    return ticks


def _f(v: float) -> str:
    return f"{v:.2f}"


def render(series: list[Series], x_title: str, y_title: str,
           isocost: tuple[float, float] | None = None, title: str = "") -> str:
    """SVG document for the given series.

    ``isocost`` is ``(c, cost)``: the line ``c*x + (1-c)*y = cost`` drawn
    across the plotting area.
    """
    x_max = max((max(s.xs) for s in series if s.xs), default=1.0)
    y_max = max((max(s.ys) for s in series if s.ys), default=1.0)
    x_ticks = nice_ticks(0.0, x_max if x_max > 0 else 1.0)
    y_ticks = nice_ticks(0.0, y_max if y_max > 0 else 1.0)
    x_hi, y_hi = x_ticks[-1], y_ticks[-1]
    if x_hi < x_max:
        x_hi = x_max
    if y_hi < y_max:
        y_hi = y_max
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(x):
        return MARGIN["left"] + pw * x / x_hi

    def sy(y):
        return MARGIN["top"] + ph * (1.0 - y / y_hi)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{_f(MARGIN["left"] + pw / 2)}" y="18" text-anchor="middle" '
                   f'font-size="14">{escape(title)}</text>')
    # frame and ticks
    x0, y0 = sx(0.0), sy(0.0)
    out.append(f'<rect x="{_f(x0)}" y="{_f(sy(y_hi))}" width="{_f(pw)}" height="{_f(ph)}" '
               'fill="none" stroke="black"/>')
    for t in x_ticks:
        px = sx(t)
        out.append(f'<line x1="{_f(px)}" y1="{_f(y0)}" x2="{_f(px)}" y2="{_f(y0 + 5)}" stroke="black"/>')
        out.append(f'<text x="{_f(px)}" y="{_f(y0 + 18)}" text-anchor="middle">{t:g}</text>')
    for t in y_ticks:
        py = sy(t)
        out.append(f'<line x1="{_f(x0 - 5)}" y1="{_f(py)}" x2="{_f(x0)}" y2="{_f(py)}" stroke="black"/>')
        out.append(f'<text x="{_f(x0 - 8)}" y="{_f(py + 4)}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{_f(MARGIN["left"] + pw / 2)}" y="{HEIGHT - 12}" '
               f'text-anchor="middle">{escape(x_title)}</text>')
    cy = MARGIN["top"] + ph / 2
    out.append(f'<text x="16" y="{_f(cy)}" text-anchor="middle" '
               f'transform="rotate(-90 16 {_f(cy)})">{escape(y_title)}</text>')
    out.append(f'<clipPath id="plot"><rect x="{_f(x0)}" y="{_f(sy(y_hi))}" '
               f'width="{_f(pw)}" height="{_f(ph)}"/></clipPath>')

    out.append('<g clip-path="url(#plot)">')
    if isocost is not None:
        c, level = isocost
        if c < 1.0:
            # y = (level - c*x) / (1 - c)
            ya = level / (1.0 - c)
            yb = (level - c * x_hi) / (1.0 - c)
            out.append(f'<line class="isocost" x1="{_f(sx(0.0))}" y1="{_f(sy(ya))}" '
                       f'x2="{_f(sx(x_hi))}" y2="{_f(sy(yb))}" stroke="gray" stroke-dasharray="6,4"/>')
        else:
            out.append(f'<line class="isocost" x1="{_f(sx(level))}" y1="{_f(sy(0.0))}" '
                       f'x2="{_f(sx(level))}" y2="{_f(sy(y_hi))}" stroke="gray" stroke-dasharray="6,4"/>')
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_f(sx(x))},{_f(sy(y))}" for x, y in zip(s.xs, s.ys))
        dash = ' stroke-dasharray="3,3"' if s.dashed else ""
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
        if s.marker is not None:
            mx, my = s.marker
            out.append(f'<circle class="op" cx="{_f(sx(mx))}" cy="{_f(sy(my))}" r="5" '
                       f'fill="none" stroke="{color}" stroke-width="1.5"/>')
    out.append("</g>")

    # legend
    lx = WIDTH - MARGIN["right"] + 12
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        ly = MARGIN["top"] + 10 + 18 * i
        dash = ' stroke-dasharray="3,3"' if s.dashed else ""
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="1.5"{dash}/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
