"""Monomial modules ``M = (+) A x^a / (+) A x^b`` and their Kasteleyn kernels.

Elements of ``M_d`` are dense rational vectors over the sorted support of
``M_d``.  ``A`` acts on the left (difference operators); the Kasteleyn map is
right multiplication by ``x1 + x2 + x3``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from . import exact
from .kasteleyn import Basis, GradedMap, right_mult_map
from .lattice import TriangleSpec, cone_support
from .ncalg import Exp, NCParams, NCPoly, add

Vector = list[Fraction]


def monomials(d: int) -> list[Exp]:
    """Exponents of ``A_d`` in lexicographically decreasing order."""
    if d < 0:
        return []
    out = []
    for a1 in range(d, -1, -1):
        for a2 in range(d - a1, -1, -1):
            out.append((a1, a2, d - a1 - a2))
    return out


class MonomialModule:
    """Graded pieces, left action and Kasteleyn maps of a monomial module."""

    def __init__(self, params: NCParams, a_list: Sequence[TriangleSpec], b_list: Sequence[TriangleSpec]):
        self.params = params
        self.a_list = tuple(a_list)
        self.b_list = tuple(b_list)
        self._bases: dict[int, Basis] = {}
        self._K: dict[int, GradedMap] = {}

    def with_removed(self, extra: Sequence[TriangleSpec]) -> "MonomialModule":
        return MonomialModule(self.params, self.a_list, self.b_list + tuple(extra))

    def basis(self, d: int) -> Basis:
        if d not in self._bases:
            self._bases[d] = Basis(cone_support(self.a_list, self.b_list, d))
        return self._bases[d]

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    def K(self, d: int) -> GradedMap:
        if d not in self._K:
            self._K[d] = right_mult_map(self.params, self.basis(d), self.basis(d + 1), d)
        return self._K[d]

    def act(self, f: NCPoly, v: Sequence[Fraction], d: int) -> Vector:
        """Left multiplication ``f * v`` for homogeneous ``f`` and ``v`` in ``M_d``."""
        k = f.degree
        if k is None:
            if not f.terms:
                return self.basis(d).zero()
            raise ValueError("left action needs a homogeneous element")
        src = self.basis(d)
        tgt = self.basis(d + k)
        out = tgt.zero()
        p = self.params
        for c, x in zip(src.points, v):
            if not x:
                continue
            for a, fa in f.terms.items():
                r = tgt.index.get(add(a, c))
                if r is not None:
                    out[r] += fa * p.cocycle(a, c) * x
        return out

    def act_monomial(self, a: Exp, v: Sequence[Fraction], d: int) -> Vector:
        return self.act(NCPoly.monomial(self.params, a), v, d)

    def right_K(self, v: Sequence[Fraction], d: int) -> Vector:
        return self.K(d).apply(v)

    def kernel(self, d: int) -> tuple[list[Vector], int]:
        """Basis of ``ker K_d`` and the rank of ``K_d``."""
        K = self.K(d)
        rows = K.dense()
        n = len(K.source)
        if n == 0:
            return [], 0
        ns = exact.nullspace(rows, n)
        return ns, n - len(ns)


def span_rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    vs = [v for v in vectors if any(v)]
    return exact.rank(vs) if vs else 0


def linear_forms(params: NCParams, coeff_rows: Sequence[Sequence[Fraction]]) -> list[NCPoly]:
    return [NCPoly.linear(params, row) for row in coeff_rows]


def monomial_products(params: NCParams, d1: int, d2: int) -> dict[tuple[Exp, Exp], Fraction]:
    """Cocycle table for products ``x^a x^b`` with ``a`` in A_d1 and ``b`` in A_d2."""
    return {(a, b): params.cocycle(a, b) for a, b in product(monomials(d1), monomials(d2))}

