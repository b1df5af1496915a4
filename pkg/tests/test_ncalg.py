from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from qdimer.ncalg import NCParams, NCPoly, add, face_flux, parse_scalar

exps = st.tuples(*(st.integers(-4, 4) for _ in range(3)))
nonzero = st.fractions(min_value=Fraction(1, 7), max_value=7, max_denominator=9)
params_st = st.builds(NCParams, nonzero, nonzero, nonzero)


@settings(max_examples=100)
@given(params_st, exps, exps, exps)
def test_cocycle_bimultiplicative(p, a, b, c):
    assert p.cocycle(add(a, b), c) == p.cocycle(a, c) * p.cocycle(b, c)
    assert p.cocycle(a, add(b, c)) == p.cocycle(a, b) * p.cocycle(a, c)


@settings(max_examples=60)
@given(params_st, exps, exps, exps)
def test_monomial_product_associative(p, a, b, c):
    x, y, z = (NCPoly.monomial(p, v) for v in (a, b, c))
    assert (x * y) * z == x * (y * z)


@settings(max_examples=60)
@given(params_st)
def test_generators_commute_up_to_q(p):
    x = [NCPoly.gen(p, i) for i in (1, 2, 3)]
    for i in range(3):
        for j in range(3):
            assert x[j] * x[i] == (x[i] * x[j]).scale(p.qij(i + 1, j + 1))


@settings(max_examples=100)
@given(params_st, exps)
def test_face_flux_is_inverse_q(p, b):
    assert face_flux(p, b) == 1 / p.q


def test_default_gauge():
    p = NCParams.from_q("3/2")
    assert (p.q12, p.q23, p.q31) == (Fraction(3, 2), 1, 1)
    assert p.q == Fraction(3, 2)


def test_qij_antisymmetry():
    p = NCParams.random(random.Random(1))
    assert p.qij(2, 1) == 1 / p.q12
    assert p.qij(1, 3) == 1 / p.q31
    assert p.qij(2, 2) == 1


def test_parse_scalar():
    assert parse_scalar("5/3") == Fraction(5, 3)
    assert parse_scalar("0.5") == Fraction(1, 2)


def test_cocycle_small_cases():
    p = NCParams(Fraction(2), Fraction(3), Fraction(5))
    assert p.cocycle((0, 1, 0), (1, 0, 0)) == p.q12
    assert p.cocycle((2, -1, 4), (0, 0, 0)) == 1
    # x3 (x1 x2): move x3 past x2, then past x1
    assert p.cocycle((0, 0, 1), (1, 1, 0)) == p.qij(1, 3) * p.qij(2, 3)
