"""Self-contained SVG emitter for learning curves (no plotting dependency)."""

from __future__ import annotations

import numpy as np

_WIDTH = 720
_HEIGHT = 480
_MARGIN = 60


def learning_curve_svg(values: np.ndarray, title: str) -> str:
    """Polyline plot of a dB curve against iteration index."""
    y = np.asarray(values, dtype=np.float64)
    n = y.size
    if n == 0:
        raise ValueError("empty curve")
    lo, hi = float(y.min()), float(y.max())
    if hi == lo:
        hi = lo + 1.0
    span_x = _WIDTH - 2 * _MARGIN
    span_y = _HEIGHT - 2 * _MARGIN

    def sx(i: int) -> float:
        return _MARGIN + span_x * (i / max(n - 1, 1))

    def sy(v: float) -> float:
        return _MARGIN + span_y * (hi - v) / (hi - lo)

    points = " ".join(f"{sx(i):.2f},{sy(float(v)):.2f}" for i, v in enumerate(y))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2:.0f}" y="28" text-anchor="middle" font-size="16" '
        f'font-family="sans-serif">{title}</text>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{span_x}" height="{span_y}" '
        f'fill="none" stroke="black"/>',
        f'<text x="{_WIDTH / 2:.0f}" y="{_HEIGHT - 16}" text-anchor="middle" '
        f'font-size="12" font-family="sans-serif">iteration</text>',
        f'<text x="18" y="{_HEIGHT / 2:.0f}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif" transform="rotate(-90 18 {_HEIGHT / 2:.0f})">MSD (dB)</text>',
        f'<text x="{_MARGIN}" y="{_HEIGHT - _MARGIN + 16}" font-size="11" '
        f'font-family="sans-serif">0</text>',
        f'<text x="{_WIDTH - _MARGIN}" y="{_HEIGHT - _MARGIN + 16}" text-anchor="end" '
        f'font-size="11" font-family="sans-serif">{n - 1}</text>',
        f'<text x="{_MARGIN - 6}" y="{sy(hi):.2f}" text-anchor="end" font-size="11" '
        f'font-family="sans-serif">{hi:.1f}</text>',
        f'<text x="{_MARGIN - 6}" y="{sy(lo):.2f}" text-anchor="end" font-size="11" '
        f'font-family="sans-serif">{lo:.1f}</text>',
        f'<polyline fill="none" stroke="#1f6fb2" stroke-width="1.5" points="{points}"/>',
        "</svg>",
    ]
    return "\n".join(lines) + "\n"
