"""Minimal dependency-free SVG line/band figures.

Plots are presentation only; the numeric truth always lives in the CSV
exports.  Output strings are deterministic: coordinates are formatted
with fixed precision and elements are emitted in insertion order.
"""

from __future__ import annotations

import numpy as np

_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 16, 34, 46


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class Figure:
    """A fixed-size canvas mapping data coordinates to pixels."""

    def __init__(
        self,
        width: int,
        height: int,
        xlim: tuple[float, float],
        ylim: tuple[float, float],
        title: str = "",
    ):
        self.width = int(width)
        self.height = int(height)
        self.xlim = xlim
        self.ylim = ylim
        self.title = title
        self._elements: list[str] = []
        self._legend: list[tuple[str, str]] = []

    def _px(self, x: float) -> float:
        x0, x1 = self.xlim
        inner = self.width - _MARGIN_L - _MARGIN_R
        return _MARGIN_L + (x - x0) / (x1 - x0) * inner

    def _py(self, y: float) -> float:
        y0, y1 = self.ylim
        inner = self.height - _MARGIN_T - _MARGIN_B
        return self.height - _MARGIN_B - (y - y0) / (y1 - y0) * inner

    def polyline(self, xs, ys, color: str, width: float = 1.5) -> None:
        pts = " ".join(
            f"{_fmt(self._px(x))},{_fmt(self._py(y))}" for x, y in zip(xs, ys)
        )
        self._elements.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="{width:g}" '
            f'points="{pts}"/>'
        )

    def band(self, xs, lo, hi, fill: str, opacity: float = 0.35) -> None:
        xs = np.asarray(xs)
        forward = [f"{_fmt(self._px(x))},{_fmt(self._py(y))}" for x, y in zip(xs, lo)]
        backward = [
            f"{_fmt(self._px(x))},{_fmt(self._py(y))}"
            for x, y in zip(xs[::-1], np.asarray(hi)[::-1])
        ]
        self._elements.append(
            f'<polygon fill="{fill}" fill-opacity="{opacity:g}" stroke="none" '
            f'points="{" ".join(forward + backward)}"/>'
        )

    def add_legend(self, label: str, color: str) -> None:
        self._legend.append((label, color))

    def _axes(self) -> list[str]:
        x0, x1 = self.xlim
        y0, y1 = self.ylim
        left, right = self._px(x0), self._px(x1)
        bottom, top = self._py(y0), self._py(y1)
        parts = [
            f'<rect x="0" y="0" width="{self.width}" height="{self.height}" '
            f'fill="white"/>',
            f'<line x1="{_fmt(left)}" y1="{_fmt(bottom)}" x2="{_fmt(right)}" '
            f'y2="{_fmt(bottom)}" stroke="black" stroke-width="1"/>',
            f'<line x1="{_fmt(left)}" y1="{_fmt(bottom)}" x2="{_fmt(left)}" '
            f'y2="{_fmt(top)}" stroke="black" stroke-width="1"/>',
        ]
        for frac in (0.0, 0.5, 1.0):
            xv = x0 + frac * (x1 - x0)
            yv = y0 + frac * (y1 - y0)
            xp, yp = self._px(xv), self._py(yv)
            parts.append(
                f'<line x1="{_fmt(xp)}" y1="{_fmt(bottom)}" x2="{_fmt(xp)}" '
                f'y2="{_fmt(bottom + 4)}" stroke="black" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_fmt(xp)}" y="{_fmt(bottom + 18)}" font-size="12" '
                f'text-anchor="middle" font-family="sans-serif">{xv:.4g}</text>'
            )
            parts.append(
                f'<line x1="{_fmt(left - 4)}" y1="{_fmt(yp)}" x2="{_fmt(left)}" '
                f'y2="{_fmt(yp)}" stroke="black" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_fmt(left - 8)}" y="{_fmt(yp + 4)}" font-size="12" '
                f'text-anchor="end" font-family="sans-serif">{yv:.4g}</text>'
            )
        if self.title:
            parts.append(
                f'<text x="{_fmt(self.width / 2)}" y="20" font-size="14" '
                f'text-anchor="middle" font-family="sans-serif">{self.title}</text>'
            )
        return parts

    def _legend_parts(self) -> list[str]:
        parts = []
        x = self.width - _MARGIN_R - 150
        y = _MARGIN_T + 6
        for label, color in self._legend:
            parts.append(
                f'<line x1="{x}" y1="{y}" x2="{x + 22}" y2="{y}" '
                f'stroke="{color}" stroke-width="2"/>'
            )
            parts.append(
                f'<text x="{x + 28}" y="{y + 4}" font-size="12" '
                f'font-family="sans-serif">{label}</text>'
            )
            y += 18
        return parts

    def to_svg(self) -> str:
        body = "\n".join(self._axes() + self._elements + self._legend_parts())
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
            f"{body}\n</svg>\n"
        )
