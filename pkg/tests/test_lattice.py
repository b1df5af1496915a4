from __future__ import annotations

import pytest

from qdimer.errors import (ContainmentViolated, DomainError, NotSimplyConnected, NotTileable,
                           SlopeCycleViolated, UnsupportedMove)
from qdimer.lattice import build_domain, hexagon, load_domain, parse_domain_text, shift_boundary
from qdimer.suite import named


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_hexagon_counts(k):
    d = hexagon(k, k, k)
    assert d.deg == 2
    assert len(d.blacks) == len(d.whites) == 3 * k * k
    assert len(d.segments) == 6
    assert d.stable_range == k


def test_hexagon_horizontal_runs(h222):
    hs = sorted(d.color for d in h222.horizontal_segments)
    assert hs == ["black", "white"]


@pytest.mark.parametrize("name", ["deg3-small", "deg3-a", "deg3-b", "deg3-c", "deg3-twoA"])
def test_degree_three_suite(name):
    d = named(name)
    assert d.deg == 3
    assert len(d.horizontal_segments) == 3
    assert d.tileable


def test_containment_violation():
    with pytest.raises(ContainmentViolated):
        parse_domain_text("A 0 0 -3\nB -1 0 -2\n")


def test_single_triangle_rejected():
    with pytest.raises(SlopeCycleViolated):
        build_domain([(0, 0, -3)])


def test_untileable_rejected():
    # side-7 triangle minus three side-2 corners: 18 blacks against 15 whites
    with pytest.raises(NotTileable):
        build_domain([(0, 0, -7)], [(5, 0, -7), (0, 5, -7), (0, 0, -2)])


def test_disconnected_rejected():
    with pytest.raises(NotSimplyConnected):
        build_domain([(0, 0, -2), (10, 0, -12)], [])


def test_parse_errors():
    with pytest.raises(DomainError):
        parse_domain_text("C 0 0 0\n")
    with pytest.raises(DomainError):
        parse_domain_text("A 0 x 0\n")
    with pytest.raises(DomainError):
        parse_domain_text("# nothing\n")


def test_load_missing_file(tmp_path):
    with pytest.raises(DomainError):
        load_domain(tmp_path / "missing.dom")


def test_roundtrip_text(h222):
    again = parse_domain_text(h222.to_text())
    assert again.blacks == h222.blacks and again.whites == h222.whites


def test_shift_white_in_and_black_out(h222):
    for seg in h222.horizontal_segments:
        direction = "in" if seg.color == "white" else "out"
        new = shift_boundary(h222, seg.index, direction)
        if direction == "in":
            assert new.support(1) < h222.support(1)
        else:
            assert new.support(0) > h222.support(0)


def test_shift_rejects_sloped(h222):
    sloped = next(s for s in h222.segments if not s.horizontal)
    with pytest.raises(UnsupportedMove):
        shift_boundary(h222, sloped.index, "in")
