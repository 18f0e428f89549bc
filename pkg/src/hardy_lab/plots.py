"""Minimal deterministic SVG charts (800x600): line plots and bar charts."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 160, 50, 70
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def _num(v: float) -> str:
    return f"{v:.2f}"


def _label(v: float) -> str:
    return f"{v:.4g}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / count for i in range(count + 1)]


class _Frame:
    def __init__(self, xlo, xhi, ylo, yhi, logx=False, logy=False):
        self.logx, self.logy = logx, logy
        self.xlo, self.xhi = self._t(xlo, logx), self._t(xhi, logx)
        self.ylo, self.yhi = self._t(ylo, logy), self._t(yhi, logy)
        if self.xhi == self.xlo:
            self.xhi = self.xlo + 1.0
        if self.yhi == self.ylo:
            self.yhi = self.ylo + 1.0

    @staticmethod
    def _t(v, log):
        return math.log10(v) if log else v

    def x(self, v):
        w = WIDTH - MARGIN_L - MARGIN_R
        return MARGIN_L + w * (self._t(v, self.logx) - self.xlo) / (self.xhi - self.xlo)

    def y(self, v):
        h = HEIGHT - MARGIN_T - MARGIN_B
        return HEIGHT - MARGIN_B - h * (self._t(v, self.logy) - self.ylo) / (self.yhi - self.ylo)


def _axes(fr: _Frame, title: str, xlabel: str, ylabel: str, xticks: bool = True) -> list[str]:
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="25" text-anchor="middle" font-size="16">{escape(title)}</text>',
    ]
    x0, x1 = MARGIN_L, WIDTH - MARGIN_R
    y0, y1 = HEIGHT - MARGIN_B, MARGIN_T
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    for t in _ticks(fr.xlo, fr.xhi) if xticks else []:
        v = 10**t if fr.logx else t
        px = fr.x(v)
        out.append(f'<line x1="{_num(px)}" y1="{y0}" x2="{_num(px)}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{_num(px)}" y="{y0 + 20}" text-anchor="middle">{_label(v)}</text>')
    for t in _ticks(fr.ylo, fr.yhi):
        v = 10**t if fr.logy else t
        py = fr.y(v)
        out.append(f'<line x1="{x0 - 5}" y1="{_num(py)}" x2="{x0}" y2="{_num(py)}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8}" y="{_num(py + 4)}" text-anchor="end">{_label(v)}</text>')
    out.append(f'<text x="{(x0 + x1) / 2:.0f}" y="{HEIGHT - 25}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="20" y="{(y0 + y1) / 2:.0f}" text-anchor="middle" '
               f'transform="rotate(-90 20 {(y0 + y1) / 2:.0f})">{escape(ylabel)}</text>')
    return out


def line_plot(series: dict[str, tuple[list[float], list[float]]], title: str, xlabel: str, ylabel: str,
              logx: bool = False, logy: bool = False, markers: dict[str, tuple[list, list]] | None = None) -> str:
    """One polyline per named series; ``markers`` adds unconnected dots."""
    markers = markers or {}
    xs = [x for xv, _ in (*series.values(), *markers.values()) for x in xv]
    ys = [y for _, yv in (*series.values(), *markers.values()) for y in yv]
    if logy:
        ys = [y for y in ys if y > 0]
    ylo = min(ys) if logy else min(0.0, min(ys))
    fr = _Frame(min(xs), max(xs), ylo, max(ys), logx, logy)
    out = _axes(fr, title, xlabel, ylabel)
    for i, (name, (xv, yv)) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_num(fr.x(x))},{_num(fr.y(y))}" for x, y in zip(xv, yv) if not logy or y > 0)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = MARGIN_T + 18 * i
        out.append(f'<line x1="{WIDTH - MARGIN_R + 15}" y1="{ly}" x2="{WIDTH - MARGIN_R + 35}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - MARGIN_R + 40}" y="{ly + 4}">{escape(name)}</text>')
    for j, (name, (xv, yv)) in enumerate(markers.items()):
        color = PALETTE[(len(series) + j) % len(PALETTE)]
        for x, y in zip(xv, yv):
            out.append(f'<circle cx="{_num(fr.x(x))}" cy="{_num(fr.y(y))}" r="3" fill="{color}"/>')
        ly = MARGIN_T + 18 * (len(series) + j)
        out.append(f'<circle cx="{WIDTH - MARGIN_R + 25}" cy="{ly}" r="3" fill="{color}"/>')
        out.append(f'<text x="{WIDTH - MARGIN_R + 40}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bar_chart(labels: list[str], values: list[float], title: str, ylabel: str = "probability") -> str:
    fr = _Frame(0, len(labels), 0.0, max(max(values), 1e-12))
    out = _axes(fr, title, "outcome", ylabel, xticks=False)
    slot = (WIDTH - MARGIN_L - MARGIN_R) / len(labels)
    for i, (lab, v) in enumerate(zip(labels, values)):
        x = MARGIN_L + slot * (i + 0.15)
        top = fr.y(v)
        out.append(f'<rect x="{_num(x)}" y="{_num(top)}" width="{_num(slot * 0.7)}" '
                   f'height="{_num(HEIGHT - MARGIN_B - top)}" fill="{PALETTE[0]}"/>')
        out.append(f'<text x="{_num(x + slot * 0.35)}" y="{_num(top - 4)}" text-anchor="middle" '
                   f'font-size="10">{v:.3f}</text>')
        out.append(f'<text x="{_num(x + slot * 0.35)}" y="{HEIGHT - MARGIN_B + 35}" text-anchor="middle" '
                   f'font-size="10">{escape(lab)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
