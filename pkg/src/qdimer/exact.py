"""Fraction-free exact linear algebra over the rationals.

Every rank, kernel, determinant and inverse in the package goes through
:func:`bareiss`.  Rows are first scaled to integer rows (row scaling changes
neither rank nor kernel), then eliminated with the Bareiss update

    a[i][j] <- (p * a[i][j] - a[i][c] * a[r][j]) // p_prev

which keeps every intermediate entry an integer minor of the input.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import Singular

Number = int | Fraction
Matrix = list[list[Fraction]]


def integer_rows(rows: Iterable[Sequence[Number]]) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators.

    Returns the integer rows and the per-row scale factors.
    """
    out: list[list[int]] = []
    scales: list[int] = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
        if den == 1:
            out.append([int(x) for x in row])
        else:
            out.append([int(x * den) for x in row])
        scales.append(den)
    return out, scales


class Echelon:
    """Result of a fraction-free elimination.

    ``rows[:rank]`` are the pivot rows; with ``reduced=True`` every pivot
    equals ``pivot_value`` and pivot columns are zero off the pivot row.
    """

    __slots__ = ("rows", "pivots", "swaps", "ncols")

    def __init__(self, rows: list[list[int]], pivots: list[int], swaps: int, ncols: int):
        self.rows = rows
        self.pivots = pivots
        self.swaps = swaps
        self.ncols = ncols

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_value(self) -> int:
        if not self.pivots:
            return 1
        r = len(self.pivots) - 1
        return self.rows[r][self.pivots[r]]


def bareiss(mat: list[list[int]], ncols: int | None = None, *, reduced: bool = False,
            stop_cols: int | None = None) -> Echelon:
    """In-place fraction-free row reduction of an integer matrix.

    ``stop_cols`` limits pivot search to the first columns (used for
    augmented systems).  ``reduced=True`` gives the fraction-free
    Gauss-Jordan form.
    """
    m = len(mat)
    n = ncols if ncols is not None else (len(mat[0]) if mat else 0)
    search = n if stop_cols is None else stop_cols
    prev = 1
    r = 0
    pivots: list[int] = []
    swaps = 0
    for c in range(search):
        if r == m:
            break
        p = r
        while p < m and mat[p][c] == 0:
            p += 1
        if p == m:
            continue
        if p != r:
            mat[p], mat[r] = mat[r], mat[p]
            swaps += 1
        prow = mat[r]
        piv = prow[c]
        targets = range(m) if reduced else range(r + 1, m)
        for i in targets:
            if i == r:
                continue
            row = mat[i]
            f = row[c]
            if f == 0:
                if prev != piv:
                    # rows already zero need no work
                    if any(row):
                        mat[i] = [(piv * x) // prev for x in row]
                continue
            mat[i] = [(piv * x - f * y) // prev for x, y in zip(row, prow)]
        prev = piv
        pivots.append(c)
        r += 1
    return Echelon(mat, pivots, swaps, n)


def rank(rows: Sequence[Sequence[Number]]) -> int:
    if not rows:
        return 0
    mat, _ = integer_rows(rows)
    return bareiss(mat).rank


def nullspace(rows: Sequence[Sequence[Number]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}``; one vector per free column.

    Each vector has a 1 in its free column and 0 in the other free columns.
    """
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    mat, _ = integer_rows(rows)
    ech = bareiss(mat, ncols, reduced=True)
    pivset = set(ech.pivots)
    dval = ech.pivot_value
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(ech.pivots):
            a = ech.rows[i][f]
            if a:
                v[pc] = Fraction(-a, dval)
        basis.append(v)
    return basis


def det(rows: Sequence[Sequence[Number]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    mat, scales = integer_rows(rows)
    ech = bareiss(mat, n)
    if ech.rank < n:
        return Fraction(0)
    value = ech.rows[n - 1][n - 1]
    if ech.swaps % 2:
        value = -value
    den = 1
    for s in scales:
        den *= s
    return Fraction(value, den)


def solve(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> Matrix:
    """Solve ``a @ x = b`` for square nonsingular ``a``; ``b`` is n x k."""
    n = len(a)
    if n == 0:
        return []
    k = len(b[0]) if b else 0
    aug = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    mat, _ = integer_rows(aug)
    ech = bareiss(mat, n + k, reduced=True, stop_cols=n)
    if ech.rank < n:
        raise Singular("matrix is singular")
    dval = ech.pivot_value
    return [[Fraction(x, dval) for x in row[n:]] for row in ech.rows]


def inverse(a: Sequence[Sequence[Number]]) -> Matrix:
    n = len(a)
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    return solve(a, eye)


def matmul(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> Matrix:
    bt = list(zip(*b)) if b else []
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in bt]
            for row in a]


def matvec(a: Sequence[Sequence[Number]], v: Sequence[Number]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def in_span(vectors: Sequence[Sequence[Number]], v: Sequence[Number]) -> bool:
    base = rank(vectors)
    return rank(list(vectors) + [v]) == base


def express(vectors: Sequence[Sequence[Number]], v: Sequence[Number]) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i vectors[i] = v``, or None.

    ``vectors`` should be linearly independent for a unique answer.
    """
    k = len(vectors)
    if k == 0:
        return [] if not any(v) else None
    n = len(v)
    # columns are the vectors, last column the target
    aug = [[vectors[i][j] for i in range(k)] + [v[j]] for j in range(n)]
    mat, _ = integer_rows(aug)
    ech = bareiss(mat, k + 1, reduced=True)
    if k in ech.pivots:
        return None
    dval = ech.pivot_value
    coeffs = [Fraction(0)] * k
    for i, pc in enumerate(ech.pivots):
        coeffs[pc] = Fraction(ech.rows[i][k], dval)
    return coeffs


def row_basis(vectors: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    """An independent subset of ``vectors`` spanning the same space."""
    chosen: list[list[Fraction]] = []
    for v in vectors:
        if not any(v):
            continue
        if not chosen or rank(chosen + [list(v)]) > len(chosen):
            chosen.append([Fraction(x) for x in v])
    return chosen


def primitive(v: Sequence[Number]) -> list[Fraction]:
    """Scale a rational vector to coprime integers with positive leading entry."""
    ints, _ = integer_rows([v])
    row = ints[0]
    g = 0
    for x in row:
        g = gcd(g, x)
    if g == 0:
        return [Fraction(0)] * len(row)
    lead = next(x for x in row if x)
    if lead < 0:
        g = -g
    return [Fraction(x // g) for x in row]
