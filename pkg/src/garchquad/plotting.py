"""Dependency-free SVG emission for series and projected-cut figures.

Hand-rolled SVG keeps outputs byte-deterministic for fixed input, which the
reproduction tests diff directly.
"""
from __future__ import annotations

import numpy as np

from .model import TimeSeries
from .quadfit import QuadraticFit, vertex

_W, _H = 720, 360
_MARGIN = 48


def _scale(values: np.ndarray, lo_px: float, hi_px: float) -> np.ndarray:
    vmin, vmax = float(values.min()), float(values.max())
    if vmax == vmin:
        vmax = vmin + 1.0
    return lo_px + (values - vmin) * (hi_px - lo_px) / (vmax - vmin)


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="20" text-anchor="middle" '
        f'font-family="monospace" font-size="14">{title}</text>',
    ]


def _axes(xlab: str, ylab: str) -> list[str]:
    x0, y0, x1, y1 = _MARGIN, _H - _MARGIN, _W - _MARGIN, _MARGIN
    return [
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{(x0 + x1) / 2:.1f}" y="{_H - 12}" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{xlab}</text>',
        f'<text x="14" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
        f'font-family="monospace" font-size="12" '
        f'transform="rotate(-90 14 {(y0 + y1) / 2:.1f})">{ylab}</text>',
    ]


def series_svg(series: TimeSeries, title: str = "series") -> str:
    """Polyline of x_t against t."""
    t = np.arange(1, len(series) + 1, dtype=float)
    px = _scale(t, _MARGIN, _W - _MARGIN)
    py = _scale(series.values, _H - _MARGIN, _MARGIN)
    points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    parts = _header(title) + _axes("t", "x")
    parts.append(f'<polyline fill="none" stroke="steelblue" stroke-width="1" points="{points}"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def cut_fit_svg(
    xs: np.ndarray,
    ys: np.ndarray,
    fit: QuadraticFit,
    coordinate_name: str,
    title: str | None = None,
) -> str:
    """Scatter of one projected cut with its fitted parabola and the vertex
    marked (when the fit is convex)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    grid = np.linspace(xs.min(), xs.max(), 200)
    curve = fit.predict(grid)
    all_y = np.concatenate([ys, curve])

    def to_px(v):
        return _scale(np.append(xs, v), _MARGIN, _W - _MARGIN)[-1]

    def to_py(v):
        return _scale(np.append(all_y, v), _H - _MARGIN, _MARGIN)[-1]

    title = title or f"projected cut: {coordinate_name}"
    parts = _header(title) + _axes(coordinate_name, "objective")
    for x, y in zip(xs, ys):
        parts.append(f'<circle cx="{to_px(x):.2f}" cy="{to_py(y):.2f}" r="2" fill="black"/>')
    pts = " ".join(f"{to_px(a):.2f},{to_py(b):.2f}" for a, b in zip(grid, curve))
    parts.append(f'<polyline fill="none" stroke="crimson" stroke-width="1.5" points="{pts}"/>')
    if fit.is_convex:
        vx = vertex(fit)
        if xs.min() <= vx <= xs.max():
            parts.append(
                f'<line x1="{to_px(vx):.2f}" y1="{_MARGIN}" x2="{to_px(vx):.2f}" '
                f'y2="{_H - _MARGIN}" stroke="gray" stroke-dasharray="4 3"/>'
            )
            parts.append(
                f'<text x="{to_px(vx):.2f}" y="{_MARGIN - 6}" text-anchor="middle" '
                f'font-family="monospace" font-size="11">{coordinate_name}={vx:.6f}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
