from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdimer.errors import NotAdjacent
from qdimer.kasteleyn import check_inverse, edge_probability, invert_K, partition_function
from qdimer.lattice import hexagon
from qdimer.ncalg import NCParams
from qdimer.suite import named
from qdimer.tilings import TilingSpace, flip_levels


def q_macmahon(a, b, c, q):
    """Independent oracle: q-MacMahon box formula."""
    z = Fraction(1)
    for i, j, k in product(range(1, a + 1), range(1, b + 1), range(1, c + 1)):
        n = i + j + k
        if q == 1:
            z *= Fraction(n - 1, n - 2)
        else:
            z *= (1 - q ** (n - 1)) / (1 - q ** (n - 2))
    return z


@pytest.mark.parametrize("abc", [(1, 1, 1), (2, 1, 1), (2, 2, 1), (2, 2, 2), (3, 2, 2), (3, 3, 3)])
@pytest.mark.parametrize("q", [Fraction(1), Fraction(1, 2), Fraction(2), Fraction(5, 3)])
def test_partition_function_matches_macmahon(abc, q):
    assert partition_function(hexagon(*abc), NCParams.from_q(q)) == q_macmahon(*abc, q)


def test_h111_is_one_plus_q():
    q = Fraction(7, 3)
    assert partition_function(hexagon(1, 1, 1), NCParams.from_q(q)) == 1 + q


nonzero = st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=7)


@settings(max_examples=15, deadline=None)
@given(nonzero, nonzero)
def test_partition_function_gauge_invariant(a, b):
    q = Fraction(3, 4)
    gauge = NCParams(q / (a * b), a, b)
    assert partition_function(hexagon(2, 2, 1), gauge) == q_macmahon(2, 2, 1, q)


def test_deg3_partition_matches_enumeration():
    dom = named("deg3-small")
    space = TilingSpace(dom)
    ms = list(space.enumerate())
    levels = flip_levels(space, ms)
    for q in (Fraction(1), Fraction(2, 7)):
        assert partition_function(dom, NCParams.from_q(q)) == sum(q ** v for v in levels)


def test_inverse_is_exact(h222, generic):
    assert check_inverse(invert_K(h222, generic))


def test_edge_probability_matches_enumeration(h222):
    q = Fraction(2, 3)
    sys = invert_K(h222, NCParams.from_q(q))
    space = TilingSpace(h222)
    ms = list(space.enumerate())
    weights = [q ** v for v in flip_levels(space, ms)]
    Z = sum(weights)
    rng = random.Random(3)
    whites = sorted(h222.whites)
    for _ in range(6):
        w = rng.choice(whites)
        b = next(m[w] for m in ms)
        exact = sum(wt for m, wt in zip(ms, weights) if m[w] == b) / Z
        assert edge_probability(sys, [(w, b)]) == exact
    # a pair of edges
    m0 = ms[len(ms) // 2]
    w1, w2 = whites[0], whites[-1]
    pair = sum(wt for m, wt in zip(ms, weights) if m[w1] == m0[w1] and m[w2] == m0[w2]) / Z
    assert edge_probability(sys, [(w1, m0[w1]), (w2, m0[w2])]) == pair


def test_edge_probabilities_sum_to_one(h222, half):
    sys = invert_K(h222, half)
    for w in h222.whites:
        nb = [b for b in h222.blacks if tuple(x - y for x, y in zip(w, b)) in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
        assert sum(edge_probability(sys, [(w, b)]) for b in nb) == 1


def test_edge_probability_not_adjacent(h222, half):
    sys = invert_K(h222, half)
    w = min(h222.whites)
    b = max(h222.blacks)
    with pytest.raises(NotAdjacent):
        edge_probability(sys, [(w, b)])
