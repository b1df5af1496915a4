from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qdimer import exact

small = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(square))
def test_det_matches_sympy(m):
    assert exact.det(m) == Fraction(int(sympy.Matrix(m).det()))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n + 1, max_size=n + 1),
                                                    min_size=1, max_size=n + 2)))
def test_rank_and_nullspace(m):
    ncols = len(m[0])
    assert exact.rank(m) == sympy.Matrix(m).rank()
    ns = exact.nullspace(m, ncols)
    assert len(ns) == ncols - exact.rank(m)
    for v in ns:
        assert all(x == 0 for x in exact.matvec(m, v))


def test_inverse_with_fractions():
    a = [[Fraction(1, 2), 3], [Fraction(-2, 3), 5]]
    inv = exact.inverse(a)
    assert exact.matmul(a, inv) == [[1, 0], [0, 1]]


def test_express_and_span():
    vs = [[1, 0, 1], [0, 1, 1]]
    assert exact.in_span(vs, [2, 3, 5])
    assert not exact.in_span(vs, [0, 0, 1])
    assert exact.express(vs, [2, 3, 5]) == [2, 3]
