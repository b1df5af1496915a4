from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from qdimer.kasteleyn import edge_probability, invert_K
from qdimer.lattice import hexagon
from qdimer.ncalg import NCParams
from qdimer.sampler import (ExactSampler, GlauberChain, density_map, is_stationary, mcmc_histogram,
                            sample_exact, sample_mcmc, satisfies_detailed_balance, tiling_code,
                            transition_matrix)
from qdimer.tilings import TilingSpace, flip_levels


def law(space, q):
    ms = list(space.enumerate())
    w = [Fraction(q) ** v for v in flip_levels(space, ms)]
    z = sum(w)
    return ms, [x / z for x in w]


@pytest.mark.parametrize("q", [Fraction(1), Fraction(2)])
def test_exact_sampler_h111(h111, q):
    import random
    sampler = ExactSampler(invert_K(h111, NCParams.from_q(q)))
    space = TilingSpace(h111)
    rng = random.Random(0)
    n = 10_000
    vols = Counter(space.raw_volume(sampler.sample(rng)) for _ in range(n))
    lo = min(vols)
    p_high = float(q / (1 + q))
    sigma = math.sqrt(p_high * (1 - p_high) / n)
    assert abs(vols.get(lo + 1, 0) / n - p_high) < 3 * sigma


def test_exact_sampler_deterministic(h222, half):
    sys = invert_K(h222, half)
    assert sample_exact(sys, 5).matching == sample_exact(sys, 5).matching


def test_exact_sampler_edge_frequencies(h222):
    sys = invert_K(h222, NCParams.from_q(Fraction(1, 2)))
    dm = density_map(h222, Fraction(1, 2), 4000, seed=1, method="exact")
    for (w, b), f in dm.edge_frequencies().items():
        p = float(edge_probability(sys, [(w, b)]))
        sigma = math.sqrt(max(p * (1 - p), 1e-12) / dm.n_samples)
        assert abs(float(f) - p) < 4 * sigma + 1e-9


def test_mcmc_zero_steps_is_minimal(h222):
    t = sample_mcmc(h222, 1.0, 0, seed=3)
    assert t.volume == 0
    assert t.matching == TilingSpace(h222).min_matching()


def test_mcmc_deterministic(h222):
    a = sample_mcmc(h222, 0.7, 5000, seed=11)
    b = sample_mcmc(h222, 0.7, 5000, seed=11)
    assert a.matching == b.matching and a.volume == b.volume


def test_mcmc_volume_tracks_matching(h222):
    space = TilingSpace(h222)
    chain = GlauberChain(space, 1.3, 2)
    chain.run(3000)
    base = space.raw_volume(space.min_matching())
    assert chain.volume == space.raw_volume(chain.matching()) - base


def test_mcmc_histogram_h222_uniform(h222):
    space = TilingSpace(h222)
    ms, pi = law(space, 1)
    hist = mcmc_histogram(space, 1.0, 300_000, seed=4, burnin=1000)
    total = sum(hist.values())
    tv = 0.5 * sum(abs(hist.get(tiling_code(space, m), 0) / total - float(p)) for m, p in zip(ms, pi))
    assert len(hist) == 20
    assert tv < 0.03


def test_mcmc_q_mirror(h222):
    space = TilingSpace(h222)
    vmax = max(flip_levels(space, list(space.enumerate())))

    def vol_hist(q, seed):
        chain = GlauberChain(space, q, seed)
        chain.run(2000)
        out = Counter()
        for _ in range(4000):
            chain.run(len(space.faces))
            out[chain.volume] += 1
        return out

    lo, hi = vol_hist(0.5, 1), vol_hist(2.0, 2)
    mean_lo = sum(v * c for v, c in lo.items()) / sum(lo.values())
    mean_hi = sum(v * c for v, c in hi.items()) / sum(hi.values())
    assert abs(mean_lo - (vmax - mean_hi)) < 0.25


@pytest.mark.parametrize("abc", [(1, 1, 1), (2, 1, 1), (2, 2, 1)])
@pytest.mark.parametrize("q", [Fraction(1), Fraction(3, 5)])
def test_transition_matrix_exact(abc, q):
    space = TilingSpace(hexagon(*abc))
    ms, pi = law(space, q)
    P = transition_matrix(space, ms, q)
    assert all(sum(row) == 1 for row in P)
    assert is_stationary(P, pi)
    assert satisfies_detailed_balance(P, pi)


def test_flip_graph_connected(h222):
    space = TilingSpace(h222)
    ms = list(space.enumerate())
    assert len(ms) == 20
    levels = flip_levels(space, ms)
    assert min(levels) == 0 and max(levels) == 8


def test_density_map_chains_reproducible(h222):
    a = density_map(h222, 1, 200, seed=9, method="mcmc", chains=3, threads=3)
    b = density_map(h222, 1, 200, seed=9, method="mcmc", chains=3, threads=1)
    assert np.array_equal(a.counts, b.counts)
    assert a.counts.sum() == 200 * len(a.space.whites)


def test_density_map_rejects_bad_args(h222):
    with pytest.raises(ValueError):
        density_map(h222, 1, 0, seed=0)
    with pytest.raises(ValueError):
        density_map(h222, 1, 10, seed=0, method="bogus")


def test_csv_header(h111):
    dm = density_map(h111, 1, 10, seed=0, method="exact")
    lines = dm.to_csv().splitlines()
    assert lines[0] == "white,black,direction,count,frequency"
    assert len(lines) == 1 + 2 * 3
