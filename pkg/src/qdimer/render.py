"""Static SVG pictures of tilings and orientation heatmaps.

A black lattice point ``b`` is drawn as the triangle ``P(b) - P(e_i)`` and a
white ``w`` as ``P(w) + P(e_i)``, where ``P`` is the planar projection; a
matched pair then forms a lozenge.
"""

from __future__ import annotations

import numpy as np

from .lattice import Point, proj_float
from .ncalg import UNIT
from .tilings import TilingSpace

ORIENTATION_COLORS = ("#d95f02", "#1b9e77", "#7570b3")  # slope 1, 2, 3 (horizontal)
_P = [proj_float(e) for e in UNIT]


def _triangle(p: Point, sign: int) -> list[tuple[float, float]]:
    x, y = proj_float(p)
    return [(x + sign * dx, y + sign * dy) for dx, dy in _P]


def white_triangle(w: Point) -> list[tuple[float, float]]:
    return _triangle(w, +1)


def black_triangle(b: Point) -> list[tuple[float, float]]:
    return _triangle(b, -1)


def _bounds(space: TilingSpace):
    pts = [xy for w in space.whites for xy in white_triangle(w)]
    pts += [xy for b in space.blacks for xy in black_triangle(b)]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    return min(xs), max(xs), min(ys), max(ys)


def _header(space: TilingSpace, scale: float, comment: str) -> tuple[list[str], callable]:
    x0, x1, y0, y1 = _bounds(space)
    pad = 1.0
    width, height = (x1 - x0 + 2 * pad) * scale, (y1 - y0 + 2 * pad) * scale

    def tr(x: float, y: float) -> str:
        return f"{(x - x0 + pad) * scale:.2f},{(y1 - y + pad) * scale:.2f}"

    head = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
            f'viewBox="0 0 {width:.2f} {height:.2f}">']
    if comment:
        head.append(f"<!-- {comment.replace('--', '- -')} -->")
    head.append('<rect width="100%" height="100%" fill="white"/>')
    return head, tr


def tiling_svg(space: TilingSpace, arr: np.ndarray, scale: float = 12.0, comment: str = "") -> str:
    """Lozenges colored by orientation (direction of ``w - b``)."""
    lines, tr = _header(space, scale, comment)
    codes = space.direction_codes(arr)
    for i, w in enumerate(space.whites):
        b = space.blacks[int(arr[i])]
        color = ORIENTATION_COLORS[int(codes[i])]
        for tri in (white_triangle(w), black_triangle(b)):
            pts = " ".join(tr(x, y) for x, y in tri)
            lines.append(f'<polygon points="{pts}" fill="{color}" stroke="{color}" stroke-width="0.6"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def heatmap_svg(space: TilingSpace, fractions: np.ndarray, orientation: int | None = None,
                scale: float = 12.0, comment: str = "") -> str:
    """White triangles in grayscale: frequency of ``orientation`` (1..3) or of the dominant one."""
    lines, tr = _header(space, scale, comment)
    for i, w in enumerate(space.whites):
        f = float(fractions[i].max() if orientation is None else fractions[i, orientation - 1])
        g = int(round(255 * (1.0 - f)))
        pts = " ".join(tr(x, y) for x, y in white_triangle(w))
        lines.append(f'<polygon points="{pts}" fill="rgb({g},{g},{g})" stroke="none"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
