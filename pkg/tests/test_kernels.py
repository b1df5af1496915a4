from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from qdimer import kernels
from qdimer.lattice import hexagon
from qdimer.sampler import GlauberChain
from qdimer.tilings import TilingSpace


def _py(f):
    return getattr(f, "py_func", f)


@pytest.fixture(scope="module")
def space():
    return TilingSpace(hexagon(4, 3, 3))


def test_steps_compiled_equals_python(space):
    rng = np.random.default_rng(0)
    faces = rng.integers(0, len(space.faces), 20_000)
    us = rng.random(20_000)
    start = space.to_array(space.min_matching())
    a, b = start.copy(), start.copy()
    da = kernels.glauber_steps(a, space.face_blacks, space.face_whites, faces, us, 0.6)
    db = _py(kernels.glauber_steps)(b, space.face_blacks, space.face_whites, faces, us, 0.6)
    assert da == db and np.array_equal(a, b)


def test_accumulate_compiled_equals_python(space):
    arr = space.to_array(space.min_matching())
    c1 = np.zeros((len(space.whites), 3), dtype=np.int64)
    c2 = c1.copy()
    kernels.accumulate_directions(arr, space.white_nbrs, c1)
    _py(kernels.accumulate_directions)(arr, space.white_nbrs, c2)
    assert np.array_equal(c1, c2) and c1.sum() == len(space.whites)


def test_encode_matches_record(space):
    chain = GlauberChain(space, 1.0, 3)
    codes = chain.record(50)
    assert codes[-1] == kernels.encode(chain.arr, space.white_nbrs)


SCRIPT = """
from qdimer import kernels
from qdimer.lattice import hexagon
from qdimer.sampler import GlauberChain
from qdimer.tilings import TilingSpace
chain = GlauberChain(TilingSpace(hexagon(3, 3, 3)), 0.8, 21)
chain.run(20000)
print(kernels.JIT_ENABLED, chain.volume, ",".join(map(str, chain.arr)))
"""


def test_env_flag_gives_identical_chain():
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, QDIMER_NO_JIT=flag)
        res = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
        outs.append(res.stdout.split())
    assert outs[0][0] == "True" and outs[1][0] == "False"
    assert outs[0][1:] == outs[1][1:]
