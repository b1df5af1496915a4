from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qdimer import modlab as ml
from qdimer.errors import NongenericQ, NotFound, UnsupportedMove
from qdimer.lattice import center_white, hexagon
from qdimer.ncalg import NCParams, NCPoly
from qdimer.suite import best_white, named

TWO_THIRDS = NCParams.from_q(Fraction(2, 3))
ONE = NCParams.from_q(1)


def test_hilbert_M_h222(h222):
    assert ml.hilbert_M(h222, None, 0) == 12
    assert ml.hilbert_M(h222, None, 1) == 12
    assert ml.hilbert_M(h222, None, 2) == 10


@pytest.mark.parametrize("name", ["H(3,3,3)", "deg3-a"])
def test_hilbert_M_quadratic_law(name):
    dom = named(name)
    for d in range(dom.stable_range + 1):
        assert ml.hilbert_M(dom, None, d) == ml.quadratic_dim_M(len(dom.blacks), dom.deg, d)


def test_kernel_Q_dims(h222):
    assert [ml.kernel_Q(h222, TWO_THIRDS, d).dim for d in range(3)] == [0, 2, 4]


def test_kernel_vectors_are_in_kernel(h333, generic):
    Q = ml.build_Q(h333, generic)
    for d in (1, 2):
        for v in Q.basis(d):
            assert not any(Q.module.right_K(v, d))


@pytest.mark.parametrize("m", [3, 4])
def test_Qw_dims_in_stable_range(m, generic):
    dom = hexagon(m, m, m)
    Qw = ml.build_Qw(dom, generic, best_white(dom))
    assert Qw.stable_range == m - 1
    for d in range(Qw.stable_range + 1):
        assert Qw.dim(d) == 3 * d + 1


def test_Qw_small_hexagon(h222):
    # cone(w) leaves the domain at degree 3, so degree 2 sits outside the marked stable range
    Qw = ml.build_Qw(h222, TWO_THIRDS, center_white(h222))
    assert [Qw.dim(d) for d in range(3)] == [1, 4, 5]
    assert Qw.stable_range == 1


def test_Qw_generator_is_inverse_column(h222, generic):
    from qdimer.kasteleyn import invert_K
    w = center_white(h222)
    Qw = ml.build_Qw(h222, generic, w)
    sys = invert_K(h222, generic)
    col = sys.column(w)
    pts = Qw.module.basis(0).points
    assert [Qw.generator[pts.index(b)] for b in sys.blacks.points] == col


def test_Qw_rejects_black(h222):
    with pytest.raises(ValueError):
        ml.build_Qw(h222, TWO_THIRDS, min(h222.blacks))


def test_resolution_plain(h333, generic):
    data = ml.generators_relations(ml.build_Q(h333, generic))
    assert data.generators.get(1) == h333.deg and not data.generators.get(2)
    assert data.relations.get(2) == h333.deg
    assert "generators: 2 @ deg 1; relations: 2 @ deg 2" == data.summary()


def test_resolution_marked(h333, generic):
    Qw = ml.build_Qw(h333, generic, best_white(h333))
    data = ml.generators_relations(Qw)
    assert data.generators.get(0) == 1 and data.generators.get(1) == 1
    assert data.relations.get(2) == 2


def test_commutative_jump(h333):
    # plain Q keeps its shape at q = 1, Q^w gains a generator-relation pair
    ml.generators_relations(ml.build_Q(h333, ONE))
    with pytest.raises(NongenericQ) as info:
        ml.generators_relations(ml.build_Qw(h333, ONE, best_white(h333)))
    obs = info.value.observed
    assert obs.generators.get(1) == h333.deg and obs.relations.get(1) == 1


def test_x3_injective(h333, generic):
    Q = ml.build_Q(h333, generic)
    assert ml.check_x3_injective(Q, 1)
    assert ml.check_x3_injective(Q, 2)


def test_x3_injective_small(h222):
    Q = ml.build_Q(h222, TWO_THIRDS)
    assert ml.x3_injective(Q, 1)
    assert not ml.x3_injective(Q, 2)  # image lies in degree 3, past the stable range


@pytest.mark.parametrize("name", ["H(2,2,2)", "H(3,3,3)", "deg3-a"])
def test_x3_commutes_with_K(name, generic):
    mod = ml.plain_module(named(name), generic)
    assert ml.x3_commutes_with_K(mod, 0)
    assert ml.x3_commutes_with_K(mod, 1)


@pytest.mark.parametrize("name", ["H(2,2,2)", "H(3,3,3)", "deg3-small"])
def test_x3_strip_support(name):
    dom = named(name)
    for d in range(dom.stable_range):
        assert ml.x3_strip_support(dom, d).ok


@pytest.mark.parametrize("name", ["H(3,3,3)", "deg3-a"])
def test_boundary_heights(name, generic):
    dom = named(name)
    Q = ml.build_Q(dom, generic)
    pts = ml.boundary_decomposition(Q, 3, 1)
    assert sorted(p.height for p in pts) == sorted(h for h, _ in dom.horizontal_heights)
    for p in pts:
        assert p.raw_ratio == generic.q ** p.height * ml.twist(generic, 1)


def test_boundary_at_q_one(h333):
    pts = ml.boundary_decomposition(ml.build_Q(h333, ONE), 3, 1)
    assert all(p.ratio == 1 for p in pts)


def test_boundary_other_axes(h333, generic):
    for axis in (1, 2):
        assert len(ml.boundary_decomposition(ml.build_Q(h333, generic), axis, 1)) == 2


def test_annihilator_h333(h333, generic):
    Qw = ml.build_Qw(h333, generic, center_white(h333))
    i, polys = ml.annihilator(Qw, 4)
    assert i <= ml.hilbert_bound_degree(2) == 4
    assert polys and all(ml.annihilates_column(Qw, f) for f in polys)
    lower = NCPoly.gen(generic, 1)
    assert not ml.annihilates_column(Qw, lower)


def test_annihilator_not_found(h222):
    Qw = ml.build_Qw(h222, TWO_THIRDS, center_white(h222))
    with pytest.raises(NotFound):
        ml.annihilator(Qw, 0)


def test_line_module(h333, generic):
    v = ml.verify_line_module(ml.build_Qw(h333, generic, best_white(h333)))
    assert v.passed, v.witness
    assert [v.dims[d][0] for d in sorted(v.dims)] == [1, 2, 3]


def test_line_form_commutative(h222):
    v = ml.verify_line_module(ml.build_Qw(h222, ONE, center_white(h222)), max_degree=1)
    assert v.line_form == NCPoly.linear(ONE, (1, 1, 1))


def test_moves_h222(h222):
    params = NCParams.random(random.Random(7))
    for seg in h222.horizontal_segments:
        point, verdict = ml.verify_move(h222, params, seg.index)
        assert verdict.passed, verdict.detail
        assert point.height == seg.height and point.ratio == params.q ** seg.height


def test_moves_agree_with_boundary(h333, generic):
    heights = sorted(ml.verify_move(h333, generic, s.index)[0].height for s in h333.horizontal_segments)
    bd = sorted(p.height for p in ml.boundary_decomposition(ml.build_Q(h333, generic), 3, 1))
    assert heights == bd


def test_move_rejects_sloped(h222):
    seg = next(s for s in h222.segments if not s.horizontal)
    with pytest.raises(UnsupportedMove):
        ml.verify_move(h222, TWO_THIRDS, seg.index)


def test_hilbert_bound_degree():
    assert ml.hilbert_bound_degree(2) == 4
    assert ml.hilbert_bound_degree(3) == 6
