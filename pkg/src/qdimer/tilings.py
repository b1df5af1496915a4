"""Perfect matchings of a domain, cube flips and the volume functional.

A face of ``Omega(0)`` is an apex ``u`` of degree -1 whose six surrounding
triangles (blacks ``u+e_i``, whites ``u+e_i+e_j``) all lie in the domain.
With the vertex labels v1..v6 of :func:`qdimer.ncalg.face_corners` a face is

* *low*  when v2-v1, v4-v3, v6-v5 are matched,
* *high* when v2-v3, v4-v5, v6-v1 are matched,

and a low -> high flip adds one unit cube (weight multiplied by q).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import networkx as nx
import numpy as np

from .lattice import DomainSpec, Point, Region
from .ncalg import E1, UNIT, face_corners, sub


@dataclass(frozen=True)
class Tiling:
    """A perfect matching white -> black with its volume above the minimum."""

    matching: dict[Point, Point]
    volume: int

    def edges(self) -> list[tuple[Point, Point]]:
        return sorted(self.matching.items())

    def key(self) -> tuple[Point, ...]:
        return tuple(b for _, b in sorted(self.matching.items()))


class TilingSpace:
    """Index structures shared by the enumerator, the flips and the samplers."""

    def __init__(self, domain: DomainSpec):
        self.domain = domain
        self.whites: list[Point] = sorted(domain.whites)
        self.blacks: list[Point] = sorted(domain.blacks)
        self.white_index = {w: i for i, w in enumerate(self.whites)}
        self.black_index = {b: i for i, b in enumerate(self.blacks)}
        apexes = {sub(b, e) for b in self.blacks for e in UNIT}
        faces = []
        for u in sorted(apexes):
            vs = face_corners(u)
            if all(v in self.domain.blacks for v in vs[0::2]) and all(v in self.domain.whites for v in vs[1::2]):
                faces.append(u)
        self.faces: list[Point] = faces
        # per face: black indices (v1, v3, v5) and white indices (v2, v4, v6)
        fb = np.zeros((len(faces), 3), dtype=np.int64)
        fw = np.zeros((len(faces), 3), dtype=np.int64)
        for k, u in enumerate(faces):
            v1, v2, v3, v4, v5, v6 = face_corners(u)
            fb[k] = (self.black_index[v1], self.black_index[v3], self.black_index[v5])
            fw[k] = (self.white_index[v2], self.white_index[v4], self.white_index[v6])
        self.face_blacks = fb
        self.face_whites = fw
        # black neighbour of each white in direction e_j, or -1
        nb = np.full((len(self.whites), 3), -1, dtype=np.int64)
        for i, w in enumerate(self.whites):
            for j, e in enumerate(UNIT):
                nb[i, j] = self.black_index.get(sub(w, e), -1)
        self.white_nbrs = nb

    # -------------------------------------------------------------- conversions

    def to_array(self, matching: dict[Point, Point]) -> np.ndarray:
        arr = np.empty(len(self.whites), dtype=np.int64)
        for w, b in matching.items():
            arr[self.white_index[w]] = self.black_index[b]
        return arr

    def to_dict(self, arr: np.ndarray) -> dict[Point, Point]:
        return {self.whites[i]: self.blacks[int(j)] for i, j in enumerate(arr)}

    def direction_codes(self, arr: np.ndarray) -> np.ndarray:
        """Index j of the unit vector ``w - b`` for every white (tile orientation)."""
        out = np.empty(len(arr), dtype=np.int64)
        for i, j in enumerate(arr):
            d = sub(self.whites[i], self.blacks[int(j)])
            out[i] = UNIT.index(d)
        return out

    # ------------------------------------------------------------------- volume

    @staticmethod
    def raw_volume(matching: dict[Point, Point]) -> int:
        """Sum of the x2-coordinate of blacks matched along ``e_1``.

        This changes by exactly +1 under a low -> high flip, so it is the
        enclosed volume up to an additive constant.
        """
        return sum(b[1] for w, b in matching.items() if sub(w, b) == E1)

    def face_state(self, arr: np.ndarray, k: int) -> int:
        """-1 for low, +1 for high, 0 if the face is not flippable."""
        b1, b3, b5 = self.face_blacks[k]
        w2, w4, w6 = self.face_whites[k]
        if arr[w2] == b1 and arr[w4] == b3 and arr[w6] == b5:
            return -1
        if arr[w2] == b3 and arr[w4] == b5 and arr[w6] == b1:
            return 1
        return 0

    def flip(self, arr: np.ndarray, k: int) -> None:
        b1, b3, b5 = self.face_blacks[k]
        w2, w4, w6 = self.face_whites[k]
        s = self.face_state(arr, k)
        if s < 0:
            arr[w2], arr[w4], arr[w6] = b3, b5, b1
        elif s > 0:
            arr[w2], arr[w4], arr[w6] = b1, b3, b5
        else:
            raise ValueError("face is not flippable")

    def any_matching(self) -> dict[Point, Point]:
        g = Region(0, self.domain.blacks, self.domain.whites).graph()
        top = [n for n in g if n[0] == "w"]
        m = nx.bipartite.hopcroft_karp_matching(g, top_nodes=top)
        if len(m) != 2 * len(self.whites):
            raise ValueError("domain has no perfect matching")
        return {n[1]: m[n][1] for n in top}

    def extremal_matching(self, direction: int = -1) -> dict[Point, Point]:
        """Minimal (direction=-1) or maximal (+1) volume tiling by monotone flips."""
        arr = self.to_array(self.any_matching())
        nf = len(self.faces)
        changed = True
        while changed:
            changed = False
            for k in range(nf):
                if self.face_state(arr, k) == -direction:
                    self.flip(arr, k)
                    changed = True
        return self.to_dict(arr)

    def min_matching(self) -> dict[Point, Point]:
        return self.extremal_matching(-1)

    # -------------------------------------------------------------- enumeration

    def enumerate(self, limit: int = 1_000_000) -> Iterator[dict[Point, Point]]:
        """All perfect matchings by backtracking on whites in sorted order."""
        whites = self.whites
        used: set[Point] = set()
        cur: dict[Point, Point] = {}
        count = 0

        def rec(i: int):
            nonlocal count
            if count >= limit:
                return
            if i == len(whites):
                count += 1
                yield dict(cur)
                return
            w = whites[i]
            for e in UNIT:
                b = sub(w, e)
                if b in self.domain.blacks and b not in used:
                    used.add(b)
                    cur[w] = b
                    yield from rec(i + 1)
                    used.discard(b)
                    del cur[w]

        yield from rec(0)


def flip_levels(space: TilingSpace, matchings: list[dict[Point, Point]]) -> list[int]:
    """Volume of each matching from flip-graph propagation (independent of weights).

    Raises if the flip graph is disconnected.
    """
    keys = {tuple(sorted(m.items())): i for i, m in enumerate(matchings)}
    level: dict[int, int] = {0: 0}
    stack = [0]
    while stack:
        i = stack.pop()
        arr = space.to_array(matchings[i])
        for k in range(len(space.faces)):
            s = space.face_state(arr, k)
            if s == 0:
                continue
            nxt = arr.copy()
            space.flip(nxt, k)
            j = keys[tuple(sorted(space.to_dict(nxt).items()))]
            if j not in level:
                level[j] = level[i] - s  # low (-1) -> high adds one cube
                stack.append(j)
    if len(level) != len(matchings):
        raise ValueError("flip graph is disconnected")
    base = min(level.values())
    return [level[i] - base for i in range(len(matchings))]


def make_tiling(space: TilingSpace, matching: dict[Point, Point], base: int | None = None) -> Tiling:
    if base is None:
        base = space.raw_volume(space.min_matching())
    return Tiling(dict(matching), space.raw_volume(matching) - base)


def volume(t: Tiling) -> int:
    return t.volume


def tiling_edges_text(t: Tiling) -> str:
    lines = [f"volume {t.volume}"]
    for w, b in t.edges():
        lines.append(f"{w[0]} {w[1]} {w[2]} {b[0]} {b[1]} {b[2]}")
    return "\n".join(lines) + "\n"

