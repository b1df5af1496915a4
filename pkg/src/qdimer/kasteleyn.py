"""Graded Kasteleyn maps, partition function, exact inverse, local statistics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact
from .errors import NotAdjacent, Singular
from .lattice import DomainSpec, Point, TriangleSpec, cone_support
from .ncalg import UNIT, NCParams, add, sub
from .tilings import TilingSpace


class Basis:
    """Sorted monomial basis of one graded piece."""

    __slots__ = ("points", "index")

    def __init__(self, points):
        self.points: tuple[Point, ...] = tuple(sorted(points))
        self.index: dict[Point, int] = {p: i for i, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return p in self.index

    def zero(self) -> list[Fraction]:
        return [Fraction(0)] * len(self.points)

    def unit(self, p: Point) -> list[Fraction]:
        v = self.zero()
        v[self.index[p]] = Fraction(1)
        return v


@dataclass
class GradedMap:
    """``K_d : M_d -> M_{d+1}``, right multiplication by ``x1 + x2 + x3``."""

    params: NCParams
    d: int
    source: Basis
    target: Basis
    entries: dict[tuple[int, int], Fraction]  # (row, col) -> value

    def dense(self) -> list[list[Fraction]]:
        rows = [[Fraction(0)] * len(self.source) for _ in range(len(self.target))]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def apply(self, v: Sequence[Fraction]) -> list[Fraction]:
        out = self.target.zero()
        for (r, c), x in self.entries.items():
            if v[c]:
                out[r] += x * v[c]
        return out

    def entry(self, white: Point, black: Point) -> Fraction:
        r = self.target.index.get(white)
        c = self.source.index.get(black)
        if r is None or c is None:
            return Fraction(0)
        return self.entries.get((r, c), Fraction(0))


def right_mult_map(params: NCParams, source: Basis, target: Basis, d: int) -> GradedMap:
    entries = {}
    for c, a in enumerate(source.points):
        for e in UNIT:
            r = target.index.get(add(a, e))
            if r is not None:
                entries[(r, c)] = params.cocycle(a, e)
    return GradedMap(params, d, source, target, entries)


def build_K(domain: DomainSpec, params: NCParams, d: int) -> GradedMap:
    return right_mult_map(params, Basis(domain.support(d)), Basis(domain.support(d + 1)), d)


def build_K_cones(a_list: Sequence[TriangleSpec], b_list: Sequence[TriangleSpec],
                  params: NCParams, d: int) -> GradedMap:
    return right_mult_map(params, Basis(cone_support(a_list, b_list, d)),
                          Basis(cone_support(a_list, b_list, d + 1)), d)


def _perm_sign(perm: list[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def matching_weight(K0: GradedMap, matching: dict[Point, Point]) -> tuple[int, Fraction]:
    """Permutation sign and product of K entries of a perfect matching."""
    perm = [0] * len(K0.target)
    w = Fraction(1)
    for white, black in matching.items():
        perm[K0.target.index[white]] = K0.source.index[black]
        w *= K0.entry(white, black)
    return _perm_sign(perm), w


@dataclass
class KasteleynSystem:
    domain: DomainSpec
    params: NCParams
    K0: GradedMap
    Kinv: list[list[Fraction]]  # rows: blacks (deg 0), columns: whites (deg 1)
    Z: Fraction
    min_matching: dict[Point, Point]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def blacks(self) -> Basis:
        return self.K0.source

    @property
    def whites(self) -> Basis:
        return self.K0.target

    def inv(self, black: Point, white: Point) -> Fraction:
        return self.Kinv[self.blacks.index[black]][self.whites.index[white]]

    def column(self, white: Point) -> list[Fraction]:
        j = self.whites.index[white]
        return [row[j] for row in self.Kinv]


def _min_weight(domain: DomainSpec, K0: GradedMap) -> tuple[dict, int, Fraction]:
    space = TilingSpace(domain)
    m = space.min_matching()
    sign, w = matching_weight(K0, m)
    return m, sign, w


def partition_function(domain: DomainSpec, params: NCParams) -> Fraction:
    """``Z(q) = sum_S q^(V(S) - V_min)`` as ``det K_0`` over the minimal tiling's term."""
    K0 = build_K(domain, params, 0)
    if len(K0.source) != len(K0.target) or not domain.tileable:
        return Fraction(0)
    det = exact.det(K0.dense())
    if det == 0:
        return Fraction(0)
    _, sign, w = _min_weight(domain, K0)
    return det / (sign * w)


def invert_K(domain: DomainSpec, params: NCParams) -> KasteleynSystem:
    K0 = build_K(domain, params, 0)
    if len(K0.source) != len(K0.target) or not domain.tileable:
        raise Singular("K_0 is not square or the domain is not tileable")
    dense = K0.dense()
    det = exact.det(dense)
    if det == 0:
        raise Singular("K_0 is singular")
    kinv = exact.inverse(dense)
    m, sign, w = _min_weight(domain, K0)
    return KasteleynSystem(domain, params, K0, kinv, det / (sign * w), m)


def check_inverse(sys: KasteleynSystem) -> bool:
    n = len(sys.Kinv)
    K = sys.K0.dense()
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return exact.matmul(K, sys.Kinv) == eye and exact.matmul(sys.Kinv, K) == eye


def edge_probability(sys: KasteleynSystem, edges: Sequence[tuple[Point, Point]]) -> Fraction:
    """Probability that all (white, black) edges belong to the random tiling."""
    edges = [(tuple(w), tuple(b)) for w, b in edges]
    if len(set(edges)) != len(edges):
        raise ValueError("edges must be distinct")
    prod = Fraction(1)
    for w, b in edges:
        if sub(w, b) not in UNIT or w not in sys.whites or b not in sys.blacks:
            raise NotAdjacent(f"{w} and {b} are not adjacent in the domain")
        prod *= sys.K0.entry(w, b)
    if not edges:
        return Fraction(1)
    minor = [[sys.inv(b, w2) for w2, _ in edges] for _, b in edges]
    return prod * exact.det(minor)


def inverse_csv(sys: KasteleynSystem) -> str:
    fmt = lambda p: f"({p[0]};{p[1]};{p[2]})"  # noqa: E731
    lines = ["black\\white," + ",".join(fmt(w) for w in sys.whites)]
    for b, row in zip(sys.blacks, sys.Kinv):
        lines.append(fmt(b) + "," + ",".join(f"{x.numerator}/{x.denominator}" for x in row))
    return "\n".join(lines) + "\n"
