"""The kernel modules ``Q``, ``Q^w`` and their structure.

``Q = ker K`` on ``M`` and ``Q^w = ker K`` on ``M^w = M / A x^w``; both are
graded left A-modules.  Everything here is an exact rank computation on top
of :mod:`qdimer.exact`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exact
from .errors import (DecompositionMismatch, NongenericQ, NotFound, SurjectivityFailed,
                     UnsupportedMove, VerificationError)
from .lattice import DomainSpec, Point, TriangleSpec, shift_boundary
from .modules import MonomialModule, Vector, monomials, span_rank
from .ncalg import E3, UNIT, NCParams, NCPoly, add, conjugate


# ---------------------------------------------------------------- Hilbert M

def quadratic_dim_M(dim_m0: int, deg: int, d: int, index: int = 0) -> int:
    return dim_m0 - deg * d * (d - 1) // 2 - d * index


def hilbert_M(domain: DomainSpec, params: NCParams | None, d: int) -> int:
    """``dim M_d``; inside the stable range it is checked against the quadratic law."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    n = len(domain.support(d))
    if d <= domain.stable_range + 1:
        expected = quadratic_dim_M(len(domain.blacks), domain.deg, d)
        if n != expected:
            raise VerificationError(f"dim M_{d} = {n}, expected {expected}")
    return n


# ----------------------------------------------------------- kernel modules

@dataclass
class KernelModule:
    """Degreewise exact bases of ``ker K`` on a monomial module."""

    domain: DomainSpec
    params: NCParams
    module: MonomialModule
    w: Point | None = None
    stable_range: int = 0
    _bases: dict[int, list[Vector]] = field(default_factory=dict, repr=False)

    @property
    def deg(self) -> int:
        return self.domain.deg

    def basis(self, d: int) -> list[Vector]:
        if d not in self._bases:
            vecs, rk = self.module.kernel(d)
            target = self.module.dim(d + 1)
            if rk < target:
                raise SurjectivityFailed(
                    f"K_{d} has rank {rk} < dim M_{d + 1} = {target} (q nongeneric or outside the stable range)")
            self._bases[d] = vecs
        return self._bases[d]

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    def expected_dim(self, d: int) -> int:
        if self.w is None:
            return d * self.deg
        return (self.deg + 1) * d + 1

    def act(self, f: NCPoly, v: Sequence[Fraction], d: int) -> Vector:
        return self.module.act(f, v, d)

    def x(self, i: int) -> NCPoly:
        return NCPoly.gen(self.params, i)

    @property
    def generator(self) -> Vector:
        if self.w is None:
            raise ValueError("plain Q has no degree-0 generator")
        return self.basis(0)[0]


@dataclass
class KernelSlice:
    d: int
    basis: list[Vector]
    dim: int
    expected: int


def plain_module(domain: DomainSpec, params: NCParams) -> MonomialModule:
    return MonomialModule(params, domain.a_triangles, domain.b_triangles)


def build_Q(domain: DomainSpec, params: NCParams) -> KernelModule:
    return KernelModule(domain, params, plain_module(domain, params), None, domain.stable_range)


def kernel_Q(domain: DomainSpec, params: NCParams, d: int) -> KernelSlice:
    Q = build_Q(domain, params)
    b = Q.basis(d)
    return KernelSlice(d, b, len(b), d * domain.deg)


def w_stable_range(domain: DomainSpec, w: Point) -> int:
    """Largest s within the domain's stable range with the hole cone(w) inside M up to degree s+1."""
    s = -1
    t = TriangleSpec(w)
    for d in range(0, domain.stable_range + 1):
        if not set(t.points(d + 1)) <= domain.support(d + 1):
            break
        s = d
    return max(s, 0)


def build_Qw(domain: DomainSpec, params: NCParams, w: Point) -> KernelModule:
    """``Q^w``; its degree-0 piece is spanned by the ``w`` column of ``K^-1``."""
    w = tuple(w)
    if w not in domain.whites:
        raise ValueError(f"{w} is not a white vertex of the domain")
    base = plain_module(domain, params)
    module = base.with_removed([TriangleSpec(w)])
    K0 = base.K(0)
    e_w = K0.target.unit(w)
    col = exact.solve(K0.dense(), [[x] for x in e_w])
    g = [row[0] for row in col]
    Qw = KernelModule(domain, params, module, w, w_stable_range(domain, w))
    ker0 = Qw.basis(0)
    if len(ker0) != 1:
        raise VerificationError(f"dim Q^w_0 = {len(ker0)}, expected 1")
    if any(module.right_K(g, 0)):
        raise VerificationError("K^-1 x^w is not in the kernel of K^w_0")
    Qw._bases[0] = [g]
    return Qw


# ---------------------------------------------------- generators and relations

@dataclass
class ResolutionData:
    generators: dict[int, int]  # degree -> count
    relations: dict[int, int]
    relation_matrix: list[list[NCPoly]]  # rows: degree-2 relations, cols: degree-1 generators
    checked_degrees: list[int]
    notes: list[str] = field(default_factory=list)

    def summary(self) -> str:
        g = "; ".join(f"{n} @ deg {d}" for d, n in sorted(self.generators.items()) if n)
        r = "; ".join(f"{n} @ deg {d}" for d, n in sorted(self.relations.items()) if n)
        return f"generators: {g}; relations: {r}"


def _pairs(Q: KernelModule, gens: list[tuple[int, Vector]], d: int):
    """Columns f*g for monomials f of degree d - deg g; returns labels and vectors."""
    labels, vecs = [], []
    for k, (gd, g) in enumerate(gens):
        for a in monomials(d - gd):
            labels.append((a, k))
            vecs.append(Q.module.act_monomial(a, g, gd))
    return labels, vecs


def _relations_from_kernel(Q: KernelModule, labels, kernel_vectors, gens) -> list[list[NCPoly]]:
    p = Q.params
    rows = []
    for v in kernel_vectors:
        v = exact.primitive(v)
        row = []
        for k in range(len(gens)):
            terms = {a: c for (a, kk), c in zip(labels, v) if kk == k and c}
            row.append(NCPoly(p, terms))
        rows.append(row)
    return rows


def _lift_relations(Q: KernelModule, labels, kernel_vectors, d: int) -> list[Vector]:
    """Left-multiply degree-d relations by x1, x2, x3 inside the degree-(d+1) coordinates."""
    p = Q.params
    gens = sorted({k for _, k in labels})
    new_labels = {}
    for k in gens:
        gd = d - sum(next(a for a, kk in labels if kk == k))
        for a in monomials(d + 1 - gd):
            new_labels[(a, k)] = len(new_labels)
    out = []
    for v in kernel_vectors:
        for e in UNIT:
            w = [Fraction(0)] * len(new_labels)
            for (a, k), c in zip(labels, v):
                if c:
                    w[new_labels[(add(e, a), k)]] += c * p.cocycle(e, a)
            out.append(w)
    return out, list(new_labels)


def generators_relations(Q: KernelModule, max_degree: int = 3) -> ResolutionData:
    """Minimal generators and relations of ``Q`` or ``Q^w`` in low degrees.

    Degree ``d`` is examined only when it lies in the module's stable range;
    the top checked degree certifies that degree-2 relations generate all
    relations there.
    """
    top = min(max_degree, Q.stable_range)
    gens: list[tuple[int, Vector]] = []
    gen_count: dict[int, int] = {}
    rel_count: dict[int, int] = {}
    notes: list[str] = []
    if top < 2:
        notes.append(f"stable range {Q.stable_range}: degree-2 relations are not visible, checked degrees <= {top}")
    relation_matrix: list[list[NCPoly]] = []
    prev_kernel = None
    prev_labels = None
    for d in range(0, top + 1):
        labels, vecs = _pairs(Q, gens, d)
        basis = Q.basis(d)
        r = span_rank(vecs)
        new = Q.dim(d) - r
        gen_count[d] = new
        if new:
            chosen = exact.row_basis(vecs)
            for b in basis:
                if len(chosen) == Q.dim(d):
                    break
                if exact.rank(chosen + [b]) > len(chosen):
                    chosen.append(b)
                    gens.append((d, b))
        ker = exact.nullspace([list(col) for col in zip(*vecs)], len(vecs)) if vecs else []
        if prev_kernel is not None and prev_kernel:
            lifted, lifted_labels = _lift_relations(Q, prev_labels, prev_kernel, d - 1)
            # align coordinates: the old-generator labels form a prefix of labels
            idx = {lab: i for i, lab in enumerate(labels)}
            aligned = []
            for v in lifted:
                w = [Fraction(0)] * len(labels)
                for lab, c in zip(lifted_labels, v):
                    if c:
                        w[idx[lab]] = c
                aligned.append(w)
            generated = span_rank(aligned)
        else:
            generated = 0
        rel_count[d] = len(ker) - generated
        if d == 2:
            relation_matrix = _relations_from_kernel(Q, labels, ker, gens)
        prev_kernel, prev_labels = ker, labels
    data = ResolutionData(gen_count, rel_count, relation_matrix, list(range(top + 1)), notes)
    _check_shape(Q, data)
    return data


def expected_shape(Q: KernelModule) -> tuple[dict[int, int], dict[int, int]]:
    D = Q.deg
    if Q.w is None:
        return {1: D}, {2: D}
    return {0: 1, 1: D - 1}, {2: D}


def _check_shape(Q: KernelModule, data: ResolutionData) -> None:
    top = max(data.checked_degrees)
    eg, er = expected_shape(Q)
    eg = {d: n for d, n in eg.items() if d <= top}
    er = {d: n for d, n in er.items() if d <= top}
    got_g = {d: n for d, n in data.generators.items() if n}
    got_r = {d: n for d, n in data.relations.items() if n}
    bad_dims = [d for d in data.checked_degrees if Q.dim(d) != Q.expected_dim(d)]
    if got_g != eg or got_r != er or bad_dims:
        msg = f"resolution shape generators {got_g} relations {got_r}, expected {eg} / {er}"
        if bad_dims:
            msg += "; dims " + ", ".join(f"Q_{d}={Q.dim(d)} (expected {Q.expected_dim(d)})" for d in bad_dims)
        raise NongenericQ(msg, observed=data)


# ------------------------------------------------------ x3 and boundary points

def x3_injective(Q: KernelModule, d: int) -> bool:
    imgs = [Q.act(Q.x(3), v, d) for v in Q.basis(d)]
    return span_rank(imgs) == len(imgs)


def check_x3_injective(Q: KernelModule, d: int) -> bool:
    return x3_injective(Q, d)


@dataclass(frozen=True)
class PointModuleParam:
    axis: int
    ratio: Fraction  # q^a, twist removed
    height: int
    raw_ratio: Fraction  # coefficient c in x1 + c x2 at the tested degree
    degree: int


def twist(params: NCParams, d: int) -> Fraction:
    return params.qij(2, 1) ** (d + 1)


def _relabel(axis: int):
    """Cyclic coordinate shift sending ``axis`` to position 3."""
    shift = axis % 3  # axis 3 -> 0, axis 1 -> 1, axis 2 -> 2
    def perm(v):
        return tuple(v[(i - shift) % 3] for i in range(3)) if shift else tuple(v)
    return shift, perm


def relabel_domain(domain: DomainSpec, axis: int) -> DomainSpec:
    from .lattice import build_domain
    if axis == 3:
        return domain
    _, perm = _relabel(axis)
    return build_domain([perm(t.c) for t in domain.a_triangles], [perm(t.c) for t in domain.b_triangles],
                        name=f"{domain.name}@axis{axis}", require_tileable=False)


def relabel_params(params: NCParams, axis: int) -> NCParams:
    if axis == 3:
        return params
    qs = (params.q12, params.q23, params.q31)
    shift, _ = _relabel(axis)
    # new index i+shift carries the relation of old index i
    return NCParams(*(qs[(k - shift) % 3] for k in range(3)))


def _quotient_rank_drop(Q: KernelModule, d: int, c: Fraction) -> int:
    """Rank drop of ``x1 + c x2`` on ``Q_d / x3 Q_{d-1}``."""
    L = Q.x(1) + Q.x(2).scale(c)
    sub_next = [Q.act(Q.x(3), v, d) for v in Q.basis(d)]
    sub_here = [Q.act(Q.x(3), v, d - 1) for v in Q.basis(d - 1)]
    quot_dim = Q.dim(d) - span_rank(sub_here)
    base = span_rank(sub_next)
    r = span_rank([Q.act(L, v, d) for v in Q.basis(d)] + sub_next) - base
    return quot_dim - r


def boundary_decomposition(Q: KernelModule, axis: int = 3, d: int = 1,
                           search: int | None = None, strict: bool = True) -> list[PointModuleParam]:
    """Recover the point-module summands of ``Q / x_axis Q`` in degree ``d``.

    Heights are found by scanning candidate ratios ``q^a q21^(d+1)`` over all
    heights occurring in the support and keeping those with a rank drop.
    """
    if axis != 3:
        dom = relabel_domain(Q.domain, axis)
        par = relabel_params(Q.params, axis)
        sub = build_Q(dom, par)
        return [PointModuleParam(axis, p.ratio, p.height, p.raw_ratio, p.degree)
                for p in boundary_decomposition(sub, 3, d, search, strict)]
    if d < 1:
        raise ValueError("boundary decomposition is tested from degree 1")
    params = Q.params
    if strict and d + 1 > Q.stable_range:
        raise VerificationError(f"degrees {d} and {d + 1} are not both in the stable range {Q.stable_range}")
    sub_here = [Q.act(Q.x(3), v, d - 1) for v in Q.basis(d - 1)]
    quot_dim = Q.dim(d) - span_rank(sub_here)
    if quot_dim != Q.deg:
        raise DecompositionMismatch(f"dim (d3 Q)_{d} = {quot_dim}, expected {Q.deg}")
    pts = Q.module.basis(d).points + Q.module.basis(d + 1).points
    hs = [p[2] for p in pts]
    lo, hi = min(hs) - 2, max(hs) + 2
    if search is not None:
        lo, hi = -search, search
    found: list[PointModuleParam] = []
    q = params.q
    tw = twist(params, d)
    seen_ratios = set()
    for a in range(lo, hi + 1):
        ratio = q ** a
        if ratio in seen_ratios:
            continue
        seen_ratios.add(ratio)
        drop = _quotient_rank_drop(Q, d, ratio * tw)
        for _ in range(drop):
            found.append(PointModuleParam(3, ratio, a, ratio * tw, d))
    if len(found) != Q.deg:
        raise DecompositionMismatch(
            f"recovered {len(found)} point modules of the form q^a twist, expected {Q.deg}")
    return found


# ------------------------------------------------------------ annihilators

def annihilator(Qw: KernelModule, max_i: int) -> tuple[int, list[NCPoly]]:
    """Lowest degree ``i`` with a nonzero ``f`` in ``A_i`` and ``f g = 0``."""
    if Qw.w is None:
        raise ValueError("annihilator needs a module Q^w")
    g = Qw.generator
    for i in range(0, max_i + 1):
        mons = monomials(i)
        cols = [Qw.module.act_monomial(a, g, 0) for a in mons]
        rows = [list(r) for r in zip(*cols)] if cols and cols[0] else []
        ker = exact.nullspace(rows, len(mons)) if rows else [
            [Fraction(int(k == j)) for k in range(len(mons))] for j in range(len(mons))]
        if ker:
            polys = [NCPoly(Qw.params, {a: c for a, c in zip(mons, exact.primitive(v)) if c}) for v in ker]
            return i, polys
    raise NotFound(f"no annihilator of the K^-1 column up to degree {max_i}")


def hilbert_bound_degree(deg: int) -> int:
    """Smallest i with dim A_i > dim Q^w_i, where a kernel is forced."""
    i = 0
    while (i + 1) * (i + 2) // 2 <= (deg + 1) * i + 1:
        i += 1
    return i


def annihilates_column(Qw: KernelModule, f: NCPoly) -> bool:
    """``f g == 0`` at every vertex of ``Omega^w`` in degree ``deg f``."""
    out = Qw.module.act(f, Qw.generator, 0)
    return not any(out)


def axis_intersections(params: NCParams, f: NCPoly) -> dict[int, list[Fraction]]:
    """Restriction of ``f`` to each coordinate line ``x_k = 0`` as binary-form coefficients.

    Reported for inspection only.
    """
    out = {}
    for k in (1, 2, 3):
        out[k] = [c for a, c in f.terms.items() if a[k - 1] == 0]
    return out


# --------------------------------------------------------------- line module

@dataclass
class LineModuleVerdict:
    passed: bool
    dims: dict[int, tuple[int, int]]  # d -> (dim Q^w_d - dim Q_d, d + 1)
    line_form: NCPoly
    witness: str


def verify_line_module(Qw: KernelModule, max_degree: int | None = None) -> LineModuleVerdict:
    """Check ``0 -> Q -> Q^w -> A/Al -> 0`` with ``l = x^w (x1+x2+x3) x^-w``."""
    p = Qw.params
    w = Qw.w
    plain = KernelModule(Qw.domain, p, plain_module(Qw.domain, p), None, Qw.domain.stable_range)
    s = NCPoly.linear(p, (1, 1, 1))
    l = conjugate(p, w, s)
    top = Qw.stable_range if max_degree is None else max_degree
    dims = {}
    ok = True
    reasons = []
    g = Qw.generator
    for d in range(0, top + 1):
        # image of Q_d in M^w_d
        keep = [Qw.module.basis(d).index.get(pt) for pt in plain.module.basis(d).points]
        proj = []
        for v in plain.basis(d):
            u = Qw.module.basis(d).zero()
            for x, k in zip(v, keep):
                if k is not None and x:
                    u[k] = x
            proj.append(u)
        r = span_rank(proj)
        if r != plain.dim(d):
            ok = False
            reasons.append(f"Q_{d} does not inject into Q^w_{d}")
        diff = Qw.dim(d) - r
        dims[d] = (diff, d + 1)
        if diff != d + 1:
            ok = False
            reasons.append(f"dim (Q^w/Q)_{d} = {diff} != {d + 1}")
        # Q^w_d = A_d g + Q_d
        cyc = [Qw.module.act_monomial(a, g, 0) for a in monomials(d)]
        if span_rank(cyc + proj) != Qw.dim(d):
            ok = False
            reasons.append(f"A_{d} g + Q_{d} != Q^w_{d}")
    # proof identity in M: K(l g - x^w) = 0
    lg = plain.module.act(l, g, 0)
    xw = plain.module.basis(1).unit(w)
    h = [a - b for a, b in zip(lg, xw)]
    identity = not any(plain.module.right_K(h, 1))
    if not identity:
        ok = False
        reasons.append("K(l g - x^w) != 0")
    witness = (f"l = {l}; K(l*g - x^w) = 0 exactly: {identity}"
               + ("" if ok else "; " + "; ".join(reasons)))
    return LineModuleVerdict(ok, dims, l, witness)


# ------------------------------------------------------------ boundary moves

@dataclass
class MoveVerdict:
    passed: bool
    point: PointModuleParam | None
    dims: dict[int, int]  # d -> dim (Q/Q')_d
    raw_ratios: dict[int, Fraction]
    detail: str


def _restrict(vec: Sequence[Fraction], src, tgt) -> Vector:
    out = tgt.zero()
    for p, x in zip(src.points, vec):
        if x:
            k = tgt.index.get(p)
            if k is not None:
                out[k] = x
    return out


def _point_ratio(Q: KernelModule, sub: dict[int, list[Vector]], d: int) -> Fraction | None:
    """Coefficient c with (x1 + c x2) v in sub_{d+1} for v in Q_d \\ sub_d."""
    v = next((b for b in Q.basis(d) if exact.rank(sub[d] + [b]) > span_rank(sub[d])), None)
    if v is None:
        return None
    x1v = Q.act(Q.x(1), v, d)
    x2v = Q.act(Q.x(2), v, d)
    S = exact.row_basis(sub[d + 1])
    coeffs = exact.express(S + [x2v], [-x for x in x1v])
    if coeffs is None:
        return None
    return coeffs[-1]


def verify_move(domain: DomainSpec, params: NCParams, segment: int,
                degrees: Sequence[int] | None = None) -> tuple[PointModuleParam, MoveVerdict]:
    seg = domain.segment(segment)
    if not seg.horizontal:
        raise UnsupportedMove(f"segment #{segment} is not horizontal")
    direction = "in" if seg.color == "white" else "out"
    new = shift_boundary(domain, segment, direction)
    Q = build_Q(domain, params)
    Mp = MonomialModule(params, new.a_triangles, new.b_triangles)
    a = seg.height
    if degrees is None:
        # the ratio needs Q'_{d+1}, so stay one step inside the stable range
        degrees = list(range(1, domain.stable_range))
    sub: dict[int, list[Vector]] = {}
    need = sorted(set(degrees) | {d + 1 for d in degrees})
    for d in need:
        if seg.color == "white":
            # Q' = Q intersected with M': vectors vanishing on the removed strip
            strip = [k for k, pt in enumerate(Q.module.basis(d).points) if pt not in Mp.basis(d).index]
            basis = Q.basis(d)
            if strip and basis:
                rows = [[v[k] for v in basis] for k in strip]
                coeffs = exact.nullspace(rows, len(basis))
                sub[d] = [[sum((c * v[i] for c, v in zip(cv, basis) if c), Fraction(0))
                           for i in range(len(basis[0]))] for cv in coeffs]
            else:
                sub[d] = list(basis)
        else:
            vecs, rk = Mp.kernel(d)
            sub[d] = [_restrict(v, Mp.basis(d), Q.module.basis(d)) for v in vecs]
            if span_rank(sub[d]) != len(sub[d]):
                raise VerificationError(f"Q' -> Q is not injective in degree {d}")
    dims, raws = {}, {}
    ok = True
    notes = []
    for d in degrees:
        qd = Q.dim(d) - span_rank(sub[d])
        dims[d] = qd
        if qd != 1:
            ok = False
            notes.append(f"dim (Q/Q')_{d} = {qd}")
            continue
        c = _point_ratio(Q, sub, d)
        raws[d] = c
        expect = params.q ** a * twist(params, d)
        if c != expect:
            ok = False
            notes.append(f"degree {d}: ratio {c} != q^{a} q21^{d + 1} = {expect}")
    point = PointModuleParam(3, params.q ** a, a, raws.get(degrees[0]) if degrees else None,
                             degrees[0] if degrees else 0)
    detail = "; ".join(notes) if notes else f"point module A/<x3, x1 + q^{a} q21^(d+1) x2>(1) in degrees {list(degrees)}"
    return point, MoveVerdict(ok, point, dims, raws, detail)


# ------------------------------------------------------- x3 on M itself

def _x3_matrix(module: MonomialModule, d: int) -> list[list[Fraction]]:
    src = module.basis(d)
    cols = [module.act(NCPoly.gen(module.params, 3), src.unit(p), d) for p in src.points]
    return [list(r) for r in zip(*cols)] if cols else []


def x3_commutes_with_K(module: MonomialModule, d: int) -> bool:
    """``K_{d+1} x3 == x3 K_d`` as exact matrices ``M_d -> M_{d+2}``."""
    lhs = exact.matmul(module.K(d + 1).dense(), _x3_matrix(module, d))
    rhs = exact.matmul(_x3_matrix(module, d + 1), module.K(d).dense())
    return lhs == rhs


@dataclass
class StripSupport:
    kernel: set[Point]  # basis points of M_d killed by x3
    cokernel: set[Point]  # basis points of M_{d+1} not hit by x3
    black_cells: set[Point]  # black horizontal boundary cells of Omega(d)
    white_cells: set[Point]

    @property
    def ok(self) -> bool:
        return self.kernel == self.black_cells and self.cokernel == self.white_cells


def x3_strip_support(domain: DomainSpec, d: int = 0) -> StripSupport:
    """Kernel and cokernel of ``x3 : M_d -> M_{d+1}`` against the horizontal strips of Omega(d)."""
    src, tgt = domain.support(d), domain.support(d + 1)
    kernel = {p for p in src if add(p, E3) not in tgt}
    cokernel = {p for p in tgt if (p[0], p[1], p[2] - 1) not in src}
    black, white = set(), set()
    for seg in domain.region(d).runs():
        if seg.horizontal:
            (black if seg.color == "black" else white).update(seg.cells)
    return StripSupport(kernel, cokernel, black, white)
