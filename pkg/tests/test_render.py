from __future__ import annotations

import math
import re

import numpy as np

from qdimer.lattice import proj_float
from qdimer.render import black_triangle, heatmap_svg, tiling_svg, white_triangle
from qdimer.tilings import TilingSpace


def area(tri):
    (x1, y1), (x2, y2), (x3, y3) = tri
    return abs((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)) / 2


def test_triangles_are_congruent_and_opposite():
    w, b = (0, 0, 1), (0, 0, 0)
    tw, tb = white_triangle(w), black_triangle(b)
    assert math.isclose(area(tw), area(tb)) and area(tw) > 0
    # matched pair shares an edge: two common vertices
    common = {tuple(round(c, 9) for c in p) for p in tw} & {tuple(round(c, 9) for c in p) for p in tb}
    assert len(common) == 2


def test_tiling_svg_has_one_lozenge_per_white(h222):
    space = TilingSpace(h222)
    arr = space.to_array(space.min_matching())
    svg = tiling_svg(space, arr, comment="seed=0")
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polygon") == 2 * len(space.whites)
    assert "<!-- seed=0 -->" in svg


def test_heatmap_grayscale(h222):
    space = TilingSpace(h222)
    fr = np.zeros((len(space.whites), 3))
    fr[:, 0] = 1.0
    svg = heatmap_svg(space, fr, orientation=1)
    assert svg.count("rgb(0,0,0)") == len(space.whites)
    assert re.search(r"viewBox", svg)
    assert proj_float((0, 0, 0)) == (0.0, 0.0)
