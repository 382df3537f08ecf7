"""Minimal static SVG charts: axes, ticks, polylines and markers.

Only what the ``plot`` command needs. Output is deterministic text so
plots can be diffed alongside the CSVs they were drawn from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from html import escape
from typing import Sequence

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _tick_label(v: float, log: bool) -> str:
    if log:
        e = round(math.log10(v))
        return f"1e{e}" if abs(e) > 2 else _fmt(10.0**e) if e >= 0 else f"{10.0**e:g}"
    return f"{v:g}"


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=mag * 10)
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-12 * span:
        ticks.append(round(v, 12))
        v += step
    return ticks


@dataclass
class Series:
    xs: Sequence[float]
    ys: Sequence[float]
    label: str = ""
    color: str = PALETTE[0]
    line: bool = True
    markers: bool = True
    dashed: bool = False


@dataclass
class Panel:
    """A chart area placed at ``(x, y)`` with size ``(w, h)`` in SVG units."""

    x: float
    y: float
    w: float
    h: float
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    logx: bool = False
    logy: bool = False
    series: list[Series] = field(default_factory=list)
    legend: bool = True

    def _usable(self, v: float, log: bool) -> bool:
        return math.isfinite(v) and (v > 0 or not log)

    def _range(self, axis: str, log: bool) -> tuple[float, float]:
        vals = [
            v
            for s in self.series
            for v in (s.xs if axis == "x" else s.ys)
            if self._usable(v, log)
        ]
        if not vals:
            return (1.0, 10.0) if log else (0.0, 1.0)
        lo, hi = min(vals), max(vals)
        if log:
            lo, hi = 10 ** math.floor(math.log10(lo)), 10 ** math.ceil(math.log10(hi))
            if lo == hi:
                hi = lo * 10
        else:
            pad = (hi - lo) * 0.05 or abs(hi) * 0.1 or 1.0
            lo, hi = lo - pad, hi + pad
        return lo, hi

    def render(self) -> str:
        left, right, top, bottom = 60, 12, 24, 44
        px0, px1 = self.x + left, self.x + self.w - right
        py0, py1 = self.y + self.h - bottom, self.y + top
        xlo, xhi = self._range("x", self.logx)
        ylo, yhi = self._range("y", self.logy)

        def tx(v: float) -> float:
            a, b, u = (math.log10(xlo), math.log10(xhi), math.log10(v)) if self.logx else (xlo, xhi, v)
            return px0 + (u - a) / (b - a) * (px1 - px0)

        def ty(v: float) -> float:
            a, b, u = (math.log10(ylo), math.log10(yhi), math.log10(v)) if self.logy else (ylo, yhi, v)
            return py0 + (u - a) / (b - a) * (py1 - py0)

        out = ['<g font-family="sans-serif" font-size="10">']
        out.append(
            f'<rect x="{_fmt(px0)}" y="{_fmt(py1)}" width="{_fmt(px1 - px0)}" '
            f'height="{_fmt(py0 - py1)}" fill="white" stroke="black"/>'
        )
        xt = self._log_ticks(xlo, xhi) if self.logx else _nice_ticks(xlo, xhi)
        yt = self._log_ticks(ylo, yhi) if self.logy else _nice_ticks(ylo, yhi)
        for v in xt:
            X = tx(v)
            out.append(f'<line x1="{_fmt(X)}" y1="{_fmt(py0)}" x2="{_fmt(X)}" y2="{_fmt(py0 + 4)}" stroke="black"/>')
            out.append(f'<text x="{_fmt(X)}" y="{_fmt(py0 + 15)}" text-anchor="middle">{_tick_label(v, self.logx)}</text>')
        for v in yt:
            Y = ty(v)
            out.append(f'<line x1="{_fmt(px0 - 4)}" y1="{_fmt(Y)}" x2="{_fmt(px0)}" y2="{_fmt(Y)}" stroke="black"/>')
            out.append(f'<text x="{_fmt(px0 - 6)}" y="{_fmt(Y + 3)}" text-anchor="end">{_tick_label(v, self.logy)}</text>')
        if self.title:
            out.append(f'<text x="{_fmt((px0 + px1) / 2)}" y="{_fmt(self.y + 14)}" text-anchor="middle" font-size="12">{escape(self.title)}</text>')
        if self.xlabel:
            out.append(f'<text x="{_fmt((px0 + px1) / 2)}" y="{_fmt(self.y + self.h - 8)}" text-anchor="middle">{escape(self.xlabel)}</text>')
        if self.ylabel:
            cx, cy = self.x + 12, (py0 + py1) / 2
            out.append(f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" text-anchor="middle" transform="rotate(-90 {_fmt(cx)} {_fmt(cy)})">{escape(self.ylabel)}</text>')

        for s in self.series:
            pts = [
                (tx(x), ty(y))
                for x, y in zip(s.xs, s.ys)
                if self._usable(x, self.logx) and self._usable(y, self.logy)
                and xlo <= x <= xhi and ylo <= y <= yhi
            ]
            if s.line and len(pts) > 1:
                dash = ' stroke-dasharray="4 3"' if s.dashed else ""
                path = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in pts)
                out.append(f'<polyline points="{path}" fill="none" stroke="{s.color}"{dash}/>')
            if s.markers:
                for a, b in pts:
                    out.append(f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="2.2" fill="{s.color}"/>')

        if self.legend:
            ly = py1 + 12
            for s in self.series:
                if not s.label:
                    continue
                out.append(f'<line x1="{_fmt(px1 - 90)}" y1="{_fmt(ly - 3)}" x2="{_fmt(px1 - 76)}" y2="{_fmt(ly - 3)}" stroke="{s.color}"/>')
                out.append(f'<text x="{_fmt(px1 - 72)}" y="{_fmt(ly)}">{escape(s.label)}</text>')
                ly += 12
        out.append("</g>")
        return "\n".join(out)

    @staticmethod
    def _log_ticks(lo: float, hi: float) -> list[float]:
        a, b = round(math.log10(lo)), round(math.log10(hi))
        stride = max(1, (b - a) // 6)
        return [10.0**e for e in range(a, b + 1, stride)]


def render_svg(panels: Sequence[Panel], width: float, height: float) -> str:
    body = "\n".join(p.render() for p in panels)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">\n'
        f'<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n'
    )
