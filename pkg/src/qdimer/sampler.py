"""Random q-weighted tilings: exact sequential sampling, Glauber dynamics, density maps.

``Prob(S)`` is proportional to ``q^V(S)``.  The exact sampler works in rational
arithmetic from the inverse Kasteleyn matrix; the Glauber chain uses floats and
the kernels of :mod:`qdimer.kernels`.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .kasteleyn import KasteleynSystem, invert_K
from .lattice import DomainSpec, Point
from .ncalg import NCParams
from .tilings import Tiling, TilingSpace, make_tiling

CHUNK = 1 << 20


# ------------------------------------------------------------------ exact

class ExactSampler:
    """Sequential conditioning over whites in sorted order.

    After fixing the edge ``(w, b)`` the inverse of the remaining matrix is a
    rank-one update of the current one.  Conditional laws are memoized per
    prefix of choices, so repeated sampling only pays for new branches.
    """

    def __init__(self, sys: KasteleynSystem):
        self.sys = sys
        self.whites: list[Point] = list(sys.whites.points)
        self.blacks: list[Point] = list(sys.blacks.points)
        self._nodes: dict[tuple[int, ...], tuple[list[int], list[Fraction], object]] = {}
        root_inv = {(i, j): x for i, row in enumerate(sys.Kinv) for j, x in enumerate(row) if x}
        self._root = root_inv

    def _node(self, prefix: tuple[int, ...]):
        node = self._nodes.get(prefix)
        if node is not None:
            return node
        if prefix:
            parent = self._node(prefix[:-1])
            G = self._update(parent[2], len(prefix) - 1, prefix[-1])
        else:
            G = self._root
        step = len(prefix)
        w = self.whites[step]
        used = set(prefix)
        cands, probs = [], []
        for bi, b in enumerate(self.blacks):
            if bi in used:
                continue
            kwb = self.sys.K0.entry(w, b)
            if kwb:
                p = kwb * G.get((bi, step), Fraction(0))
                if p:
                    cands.append(bi)
                    probs.append(p)
        if sum(probs) != 1:
            raise ArithmeticError(f"conditional probabilities sum to {sum(probs)}")
        node = (cands, probs, G)
        self._nodes[prefix] = node
        return node

    @staticmethod
    def _update(G: dict, wj: int, bi: int) -> dict:
        """Inverse after deleting white ``wj`` and black ``bi``."""
        pivot = G[(bi, wj)]
        col = {b: x for (b, w), x in G.items() if w == wj and b != bi}
        row = {w: x / pivot for (b, w), x in G.items() if b == bi and w != wj}
        out = {}
        for (b, w), x in G.items():
            if b == bi or w == wj:
                continue
            y = x - col.get(b, 0) * row.get(w, 0)
            if y:
                out[(b, w)] = y
        for b, cb in col.items():
            for w, rw in row.items():
                if (b, w) not in G:
                    y = -cb * rw
                    if y:
                        out[(b, w)] = y
        return out

    def sample(self, rng: random.Random) -> dict[Point, Point]:
        prefix: tuple[int, ...] = ()
        for _ in self.whites:
            cands, probs, _ = self._node(prefix)
            prefix += (cands[_choose(rng, probs)],)
        return {w: self.blacks[b] for w, b in zip(self.whites, prefix)}


def _choose(rng: random.Random, probs: Sequence[Fraction]) -> int:
    den = math.lcm(*(p.denominator for p in probs))
    r = rng.randrange(den)
    acc = 0
    for k, p in enumerate(probs):
        acc += p.numerator * (den // p.denominator)
        if r < acc:
            return k
    return len(probs) - 1


def sample_exact(sys: KasteleynSystem, seed: int) -> Tiling:
    space = TilingSpace(sys.domain)
    m = ExactSampler(sys).sample(random.Random(seed))
    return make_tiling(space, m)


# ------------------------------------------------------------------ Glauber

class GlauberChain:
    """Heat-bath dynamics on cube flips.

    Each step picks one of the interior faces uniformly; a low face becomes
    high with probability ``q/(1+q)``, a high face becomes low with
    probability ``1/(1+q)``, anything else is left alone.
    """

    def __init__(self, space: TilingSpace, q: float, seed: int, start: dict[Point, Point] | None = None):
        if q <= 0:
            raise ValueError("q must be positive")
        self.space = space
        self.q = float(q)
        self.p_up = self.q / (1.0 + self.q)
        self.rng = np.random.Generator(np.random.PCG64(seed))
        self.arr = space.to_array(start if start is not None else space.min_matching())
        self.volume = 0 if start is None else space.raw_volume(start) - space.raw_volume(space.min_matching())
        self.nfaces = len(space.faces)

    def _randoms(self, n: int):
        faces = self.rng.integers(0, self.nfaces, size=n, dtype=np.int64)
        us = self.rng.random(n)
        return faces, us

    def _chunks(self, steps: int, multiple: int = 1):
        size = max(multiple, (CHUNK // multiple) * multiple)
        left = steps
        while left > 0:
            n = min(size, left)
            yield n
            left -= n

    def run(self, steps: int) -> None:
        if self.nfaces == 0:
            return
        s = self.space
        for n in self._chunks(steps):
            faces, us = self._randoms(n)
            self.volume += kernels.glauber_steps(self.arr, s.face_blacks, s.face_whites, faces, us, self.p_up)

    def record(self, steps: int) -> np.ndarray:
        """Base-3 orientation code of the state after each step."""
        s = self.space
        out = np.empty(steps, dtype=np.int64)
        if self.nfaces == 0:
            out[:] = kernels.encode(self.arr, s.white_nbrs)
            return out
        pos = 0
        for n in self._chunks(steps):
            faces, us = self._randoms(n)
            self.volume += kernels.glauber_record(self.arr, s.face_blacks, s.face_whites, s.white_nbrs,
                                                  faces, us, self.p_up, out[pos:pos + n])
            pos += n
        return out

    def accumulate(self, n_sweeps: int, sweep_len: int, counts: np.ndarray) -> None:
        """``n_sweeps`` sweeps of ``sweep_len`` steps, observing orientations after each."""
        s = self.space
        if self.nfaces == 0:
            for _ in range(n_sweeps):
                kernels.accumulate_directions(self.arr, s.white_nbrs, counts)
            return
        for n in self._chunks(n_sweeps * sweep_len, sweep_len):
            faces, us = self._randoms(n)
            kernels.glauber_sweeps_accumulate(self.arr, s.face_blacks, s.face_whites, s.white_nbrs,
                                              faces, us, self.p_up, sweep_len, counts)

    def matching(self) -> dict[Point, Point]:
        return self.space.to_dict(self.arr)


def sample_mcmc(domain: DomainSpec, q, steps: int, seed: int, space: TilingSpace | None = None) -> Tiling:
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    space = space or TilingSpace(domain)
    chain = GlauberChain(space, float(q), seed)
    chain.run(steps)
    return Tiling(chain.matching(), chain.volume)


def mcmc_histogram(space: TilingSpace, q, steps: int, seed: int, burnin: int = 0) -> Counter:
    """Visit counts of each tiling (by orientation code) over ``steps`` steps."""
    chain = GlauberChain(space, float(q), seed)
    chain.run(burnin)
    codes = chain.record(steps)
    vals, cnt = np.unique(codes, return_counts=True)
    return Counter({int(v): int(c) for v, c in zip(vals, cnt)})


def tiling_code(space: TilingSpace, matching: dict[Point, Point]) -> int:
    return kernels.encode(space.to_array(matching), space.white_nbrs)


def transition_matrix(space: TilingSpace, matchings: list[dict[Point, Point]], q: Fraction) -> list[list[Fraction]]:
    """Exact one-step transition matrix of the Glauber chain on an enumerated state space."""
    q = Fraction(q)
    up, down = q / (1 + q), 1 / (1 + q)
    index = {tiling_code(space, m): i for i, m in enumerate(matchings)}
    n, nf = len(matchings), len(space.faces)
    P = [[Fraction(0)] * n for _ in range(n)]
    for i, m in enumerate(matchings):
        arr = space.to_array(m)
        stay = Fraction(1)
        for k in range(nf):
            s = space.face_state(arr, k)
            if s == 0:
                continue
            p = Fraction(1, nf) * (up if s < 0 else down)
            nxt = arr.copy()
            space.flip(nxt, k)
            j = index[kernels.encode(nxt, space.white_nbrs)]
            P[i][j] += p
            stay -= p
        P[i][i] += stay
    return P


def is_stationary(P: list[list[Fraction]], pi: Sequence[Fraction]) -> bool:
    n = len(pi)
    return all(sum(pi[i] * P[i][j] for i in range(n)) == pi[j] for j in range(n))


def satisfies_detailed_balance(P: list[list[Fraction]], pi: Sequence[Fraction]) -> bool:
    n = len(pi)
    return all(pi[i] * P[i][j] == pi[j] * P[j][i] for i in range(n) for j in range(i + 1, n))


# ------------------------------------------------------------------ density maps

@dataclass
class DensityMap:
    """Orientation counts per white triangle; ``counts[i, j]`` is edge ``(w_i, w_i - e_j)``."""

    space: TilingSpace
    counts: np.ndarray
    n_samples: int
    method: str = ""
    seed: int | None = None

    def frequency(self, white: Point, black: Point) -> Fraction:
        i = self.space.white_index[tuple(white)]
        j = int(np.nonzero(self.space.white_nbrs[i] == self.space.black_index[tuple(black)])[0][0])
        return Fraction(int(self.counts[i, j]), self.n_samples)

    def edge_frequencies(self) -> dict[tuple[Point, Point], Fraction]:
        out = {}
        for i, w in enumerate(self.space.whites):
            for j in range(3):
                b = int(self.space.white_nbrs[i, j])
                if b >= 0:
                    out[(w, self.space.blacks[b])] = Fraction(int(self.counts[i, j]), self.n_samples)
        return out

    def orientation_fractions(self) -> np.ndarray:
        return self.counts / float(self.n_samples)

    def merge(self, other: "DensityMap") -> "DensityMap":
        if other.space.whites != self.space.whites:
            raise ValueError("density maps of different domains")
        return DensityMap(self.space, self.counts + other.counts, self.n_samples + other.n_samples, self.method)

    def to_csv(self) -> str:
        lines = ["white,black,direction,count,frequency"]
        for i, w in enumerate(self.space.whites):
            for j in range(3):
                b = int(self.space.white_nbrs[i, j])
                if b < 0:
                    continue
                bp = self.space.blacks[b]
                c = int(self.counts[i, j])
                lines.append(f"({w[0]};{w[1]};{w[2]}),({bp[0]};{bp[1]};{bp[2]}),{j + 1},{c},{c / self.n_samples:.6f}")
        return "\n".join(lines) + "\n"


def default_burnin(space: TilingSpace) -> int:
    """Burn-in in steps: ten sweeps per face."""
    return 10 * len(space.faces) * max(1, len(space.faces))


def density_map(domain: DomainSpec, q, n_samples: int, seed: int, method: str = "exact", *,
                burnin: int | None = None, thin: int | None = None, chains: int = 1,
                threads: int = 1, space: TilingSpace | None = None) -> DensityMap:
    """Empirical orientation frequencies from ``n_samples`` tilings.

    ``exact`` draws independent samples; ``mcmc`` runs ``chains`` independent
    chains (seeds spawned from ``seed``) with ``burnin`` steps and one
    observation every ``thin`` steps (default: one sweep).
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    space = space or TilingSpace(domain)
    counts = np.zeros((len(space.whites), 3), dtype=np.int64)
    if method == "exact":
        params = q if isinstance(q, NCParams) else NCParams.from_q(Fraction(q))
        sampler = ExactSampler(invert_K(domain, params))
        rng = random.Random(seed)
        for _ in range(n_samples):
            arr = space.to_array(sampler.sample(rng))
            kernels.accumulate_directions(arr, space.white_nbrs, counts)
        return DensityMap(space, counts, n_samples, method, seed)
    if method != "mcmc":
        raise ValueError(f"unknown method {method!r}")
    qf = float(q.q) if isinstance(q, NCParams) else float(Fraction(q))
    burn = default_burnin(space) if burnin is None else burnin
    sweep = thin if thin is not None else max(1, len(space.faces))
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(chains)]
    per = [n_samples // chains + (1 if k < n_samples % chains else 0) for k in range(chains)]

    def run(k: int) -> np.ndarray:
        c = np.zeros_like(counts)
        chain = GlauberChain(space, qf, seeds[k])
        chain.run(burn)
        chain.accumulate(per[k], sweep, c)
        return c

    if threads > 1 and chains > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(chains)))
    else:
        parts = [run(k) for k in range(chains)]
    for c in parts:
        counts += c
    return DensityMap(space, counts, n_samples, method, seed)
