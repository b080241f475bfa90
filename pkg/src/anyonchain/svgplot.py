"""Minimal self-contained SVG line and bar plots.

Only what the command line driver needs: a few labelled series on linear
axes, with optional histogram bars underneath.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 20, 40, 55
_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#000000"]


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str
    dashed: bool = False
    markers: bool = False


@dataclass
class Figure:
    title: str
    xlabel: str
    ylabel: str
    series: list[Series] = field(default_factory=list)
    bars: tuple[np.ndarray, np.ndarray] | None = None  # (bin edges, heights)

    def line(self, x, y, label, dashed=False, markers=False):
        self.series.append(Series(np.asarray(x, float), np.asarray(y, float), label, dashed, markers))
        return self

    def histogram(self, edges, heights):
        self.bars = (np.asarray(edges, float), np.asarray(heights, float))
        return self

    def _limits(self):
        xs = [s.x for s in self.series]
        ys = [s.y for s in self.series]
        if self.bars is not None:
            xs.append(self.bars[0])
            ys.append(self.bars[1])
            ys.append(np.zeros(1))
        x = np.concatenate(xs)
        y = np.concatenate(ys)
        x, y = x[np.isfinite(x)], y[np.isfinite(y)]
        x0, x1 = float(x.min()), float(x.max())
        y0, y1 = float(y.min()), float(y.max())
        if x1 == x0:
            x0, x1 = x0 - 0.5, x1 + 0.5
        pad = 0.05 * (y1 - y0 or 1.0)
        return x0, x1, y0 - pad, y1 + pad

    def render(self) -> str:
        x0, x1, y0, y1 = self._limits()
        pw, ph = _W - _ML - _MR, _H - _MT - _MB

        def X(v):
            return _ML + (v - x0) / (x1 - x0) * pw

        def Y(v):
            return _MT + ph - (v - y0) / (y1 - y0) * ph

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'font-family="sans-serif" font-size="12">',
            f'<rect width="{_W}" height="{_H}" fill="white"/>',
            f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        ]
        for t in np.linspace(x0, x1, 6):
            out.append(f'<text x="{X(t):.1f}" y="{_MT + ph + 18}" text-anchor="middle">{t:.3g}</text>')
        for t in np.linspace(y0, y1, 6):
            out.append(f'<text x="{_ML - 6}" y="{Y(t) + 4:.1f}" text-anchor="end">{t:.3g}</text>')
        out.append(f'<text x="{_W / 2}" y="22" text-anchor="middle" font-size="14">{escape(self.title)}</text>')
        out.append(f'<text x="{_ML + pw / 2}" y="{_H - 12}" text-anchor="middle">{escape(self.xlabel)}</text>')
        out.append(
            f'<text x="16" y="{_MT + ph / 2}" text-anchor="middle" '
            f'transform="rotate(-90 16 {_MT + ph / 2})">{escape(self.ylabel)}</text>'
        )
        if self.bars is not None:
            edges, heights = self.bars
            for a, b, h in zip(edges[:-1], edges[1:], heights):
                out.append(
                    f'<rect x="{X(a):.2f}" y="{Y(h):.2f}" width="{X(b) - X(a):.2f}" '
                    f'height="{Y(0) - Y(h):.2f}" fill="#c6dbef" stroke="#6baed6"/>'
                )
        for i, s in enumerate(self.series):
            color = _COLORS[i % len(_COLORS)]
            ok = np.isfinite(s.x) & np.isfinite(s.y)
            pts = " ".join(f"{X(a):.2f},{Y(b):.2f}" for a, b in zip(s.x[ok], s.y[ok]))
            dash = ' stroke-dasharray="6,4"' if s.dashed else ""
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>')
            if s.markers:
                for a, b in zip(s.x[ok], s.y[ok]):
                    out.append(f'<circle cx="{X(a):.2f}" cy="{Y(b):.2f}" r="3" fill="{color}"/>')
            ly = _MT + 16 + 16 * i
            out.append(f'<line x1="{_ML + 10}" y1="{ly - 4}" x2="{_ML + 34}" y2="{ly - 4}" stroke="{color}"{dash}/>')
            out.append(f'<text x="{_ML + 40}" y="{ly}">{escape(s.label)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"
