"""Minimal self-contained SVG line plots (no external renderer)."""

from __future__ import annotations

import numpy as np

_W, _H = 720, 440
_ML, _MR, _MT, _MB = 70, 20, 40, 50  # margins around the plot area


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10.0 ** np.floor(np.log10(raw))
    step = min(s for s in (1 * mag, 2 * mag, 5 * mag, 10 * mag) if s >= raw)
    start = np.ceil(lo / step) * step
    return [float(v) for v in np.arange(start, hi + step / 2, step)]


def _fmt(v: float) -> str:
    return f"{v:g}"


def render_curve(
    steps,
    mean,
    std=None,
    title: str = "",
    x_label: str = "environment steps",
    y_label: str = "return",
) -> str:
    """Return an SVG document plotting mean with an optional +-std band."""
    steps = np.asarray(steps, dtype=np.float64)
    mean = np.asarray(mean, dtype=np.float64)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="13">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    if len(steps) == 0:
        parts.append(f'<text x="{_W / 2}" y="{_H / 2}" text-anchor="middle">no data</text></svg>')
        return "\n".join(parts)

    lo_y = float(mean.min() if std is None else (mean - std).min())
    hi_y = float(mean.max() if std is None else (mean + std).max())
    if hi_y == lo_y:
        hi_y += 1.0
    pad = 0.05 * (hi_y - lo_y)
    lo_y, hi_y = lo_y - pad, hi_y + pad
    lo_x, hi_x = float(steps.min()), float(steps.max())
    if hi_x == lo_x:
        hi_x += 1.0

    def px(x):
        return _ML + (x - lo_x) / (hi_x - lo_x) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (y - lo_y) / (hi_y - lo_y) * (_H - _MT - _MB)

    # axes and ticks
    parts.append(
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" stroke="black"/>'
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" stroke="black"/>'
    )
    for v in _ticks(lo_x, hi_x):
        x = px(v)
        parts.append(
            f'<line x1="{x:.1f}" y1="{_H - _MB}" x2="{x:.1f}" y2="{_H - _MB + 5}" stroke="black"/>'
            f'<text x="{x:.1f}" y="{_H - _MB + 20}" text-anchor="middle">{_fmt(v)}</text>'
        )
    for v in _ticks(lo_y, hi_y):
        y = py(v)
        parts.append(
            f'<line x1="{_ML - 5}" y1="{y:.1f}" x2="{_ML}" y2="{y:.1f}" stroke="black"/>'
            f'<text x="{_ML - 8}" y="{y + 4:.1f}" text-anchor="end">{_fmt(v)}</text>'
        )

    if std is not None and len(steps) > 1:
        std = np.asarray(std, dtype=np.float64)
        upper = [(px(x), py(y)) for x, y in zip(steps, mean + std)]
        lower = [(px(x), py(y)) for x, y in zip(steps[::-1], (mean - std)[::-1])]
        pts = " ".join(f"{x:.1f},{y:.1f}" for x, y in upper + lower)
        parts.append(f'<polygon points="{pts}" fill="#4c72b0" opacity="0.25"/>')
    pts = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in zip(steps, mean))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#4c72b0" stroke-width="2"/>')

    if title:
        parts.append(f'<text x="{_W / 2}" y="22" text-anchor="middle" font-size="16">{title}</text>')
    parts.append(f'<text x="{(_ML + _W - _MR) / 2}" y="{_H - 12}" text-anchor="middle">{x_label}</text>')
    parts.append(
        f'<text x="16" y="{(_MT + _H - _MB) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(_MT + _H - _MB) / 2})">{y_label}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts)
