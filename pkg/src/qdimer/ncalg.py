"""Quantum plane and quantum torus in three variables.

Generators satisfy ``x_j x_i = q_ij x_i x_j``.  Elements are kept in the
normal order ``x1^a1 x2^a2 x3^a3`` and multiplied with the cocycle

    x^a x^b = c(a, b) x^(a+b),   c(a, b) = prod_{i<j} q_ij^(a_j b_i).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import ParamMismatch

Exp = tuple[int, int, int]

E1: Exp = (1, 0, 0)
E2: Exp = (0, 1, 0)
E3: Exp = (0, 0, 1)
UNIT: tuple[Exp, Exp, Exp] = (E1, E2, E3)


def parse_scalar(text: str | int | Fraction) -> Fraction:
    """Parse ``num/den``, an integer or a decimal into an exact rational."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_scalar(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class NCParams:
    q12: Fraction
    q23: Fraction
    q31: Fraction

    def __post_init__(self):
        for name in ("q12", "q23", "q31"):
            v = Fraction(getattr(self, name))
            if v == 0:
                raise ValueError(f"{name} must be nonzero")
            object.__setattr__(self, name, v)

    @classmethod
    def from_q(cls, q: Fraction | int | str) -> "NCParams":
        """Default gauge ``(q, 1, 1)``."""
        return cls(parse_scalar(q), Fraction(1), Fraction(1))

    @classmethod
    def random(cls, rng: random.Random, bits: int = 10, positive: bool = True) -> "NCParams":
        """Random rational triple; stands in for generic parameters."""
        def draw() -> Fraction:
            while True:
                x = Fraction(rng.randint(1, 2**bits - 1), rng.randint(1, 2**bits - 1))
                if x != 1:
                    return x if positive or rng.random() < 0.5 else -x
        return cls(draw(), draw(), draw())

    @property
    def q(self) -> Fraction:
        return self.q12 * self.q23 * self.q31

    def qij(self, i: int, j: int) -> Fraction:
        """``q_ij`` for 1-based indices, with ``q_ii = 1`` and ``q_ji = 1/q_ij``."""
        if i == j:
            return Fraction(1)
        table = {(1, 2): self.q12, (2, 3): self.q23, (3, 1): self.q31}
        if (i, j) in table:
            return table[(i, j)]
        return 1 / table[(j, i)]

    def cocycle(self, a: Exp, b: Exp) -> Fraction:
        return _cocycle(a, b, self.q12, self.q23, self.q31)

    def as_strings(self) -> dict[str, str]:
        return {"q12": format_scalar(self.q12), "q23": format_scalar(self.q23),
                "q31": format_scalar(self.q31), "q": format_scalar(self.q)}


@lru_cache(maxsize=1 << 18)
def _cocycle(a: Exp, b: Exp, q12: Fraction, q23: Fraction, q31: Fraction) -> Fraction:
    # exponents of q12, q23, q13 = 1/q31
    e12 = a[1] * b[0]
    e23 = a[2] * b[1]
    e13 = a[2] * b[0]
    out = Fraction(1)
    if e12:
        out *= q12 ** e12
    if e23:
        out *= q23 ** e23
    if e13:
        out *= q31 ** (-e13)
    return out


def cocycle(a: Exp, b: Exp, params: NCParams) -> Fraction:
    return params.cocycle(tuple(a), tuple(b))


def add(a: Exp, b: Exp) -> Exp:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub(a: Exp, b: Exp) -> Exp:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def neg(a: Exp) -> Exp:
    return (-a[0], -a[1], -a[2])


@dataclass(frozen=True)
class NCPoly:
    """Finite sum of normal-ordered monomials with rational coefficients."""

    params: NCParams
    terms: Mapping[Exp, Fraction] = field(default_factory=dict)
    torus: bool = False

    def __post_init__(self):
        clean = {}
        for a, c in self.terms.items():
            c = Fraction(c)
            if c:
                a = tuple(int(x) for x in a)
                if not self.torus and min(a) < 0:
                    raise ValueError(f"negative exponent {a} outside torus mode")
                clean[a] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def monomial(cls, params: NCParams, a: Exp, coeff: Fraction | int = 1,
                 torus: bool = False) -> "NCPoly":
        return cls(params, {tuple(a): Fraction(coeff)}, torus or min(a) < 0)

    @classmethod
    def one(cls, params: NCParams) -> "NCPoly":
        return cls.monomial(params, (0, 0, 0))

    @classmethod
    def gen(cls, params: NCParams, i: int) -> "NCPoly":
        return cls.monomial(params, UNIT[i - 1])

    @classmethod
    def linear(cls, params: NCParams, coeffs: Iterable[Fraction]) -> "NCPoly":
        return cls(params, {e: Fraction(c) for e, c in zip(UNIT, coeffs)})

    def _check(self, other: "NCPoly") -> None:
        if self.params != other.params:
            raise ParamMismatch("operands use different deformation parameters")

    def __add__(self, other: "NCPoly") -> "NCPoly":
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0) + c
        return NCPoly(self.params, out, self.torus or other.torus)

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.params, {a: -c for a, c in self.terms.items()}, self.torus)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "NCPoly":
        return NCPoly(self.params, {a: c * v for a, v in self.terms.items()}, self.torus)

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        return poly_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.params, tuple(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int | None:
        """Common total degree, or None for non-homogeneous or zero elements."""
        degs = {sum(a) for a in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def records(self) -> list[tuple[int, int, int, str]]:
        return [(a[0], a[1], a[2], format_scalar(c)) for a, c in self.terms.items()]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({format_scalar(c)})*x^{a}" for a, c in self.terms.items())


def poly_mul(f: NCPoly, g: NCPoly) -> NCPoly:
    f._check(g)
    p = f.params
    out: dict[Exp, Fraction] = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            s = add(a, b)
            out[s] = out.get(s, 0) + ca * cb * p.cocycle(a, b)
    return NCPoly(p, out, f.torus or g.torus)


def conjugate(params: NCParams, w: Exp, f: NCPoly) -> NCPoly:
    """``x^w f x^(-w)`` in the torus; stays in A when f does."""
    left = NCPoly.monomial(params, w, torus=True)
    right = NCPoly.monomial(params, neg(w), torus=True)
    out = poly_mul(poly_mul(left, f), right)
    return NCPoly(params, out.terms, torus=f.torus)


def face_corners(u: Exp) -> tuple[Exp, Exp, Exp, Exp, Exp, Exp]:
    """The six vertices around the hexagonal face with apex ``u``.

    Odd positions are black (``u + e_i``), even positions white
    (``u + e_i + e_j``), in the cyclic order v1..v6.
    """
    v1 = add(u, E1)
    v2 = add(v1, E2)
    v3 = add(u, E2)
    v4 = add(v3, E3)
    v5 = add(u, E3)
    v6 = add(v5, E1)
    return v1, v2, v3, v4, v5, v6


def edge_weight(params: NCParams, white: Exp, black: Exp) -> Fraction:
    """Kasteleyn entry ``K(white, black)``: coefficient of right multiplication."""
    d = sub(white, black)
    if d not in UNIT:
        return Fraction(0)
    return params.cocycle(black, d)


def face_flux(params: NCParams, black: Exp) -> Fraction:
    """Alternating product ``K21 K43 K65 / (K23 K45 K61)`` around a face.

    ``black`` is the vertex v1 of the face; the product equals ``1/q``.
    """
    u = sub(black, E1)
    v1, v2, v3, v4, v5, v6 = face_corners(u)
    k = lambda w, b: edge_weight(params, w, b)  # noqa: E731
    return (k(v2, v1) * k(v4, v3) * k(v6, v5)) / (k(v2, v3) * k(v4, v5) * k(v6, v1))
