"""Polygonal domains of the triangular lattice.

A domain is a set difference of triangles ``Delta(c)``, the degree-1 points of
the cone ``{v >= c}``.  Points of degree ``d`` are monomials of ``M_d``; the
region ``Omega(i)`` has black triangles ``supp M_i`` and white triangles
``supp M_{i+1}``.  A black ``b`` and a white ``w`` are adjacent iff
``w - b`` is a unit vector ``e_j``; the shared edge has slope label ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Sequence

import networkx as nx

from .errors import (ContainmentViolated, DomainError, NotSimplyConnected, NotTileable,
                     SlopeCycleViolated, UnsupportedMove)
from .ncalg import UNIT, Exp, add, sub

Color = Literal["white", "black"]
Point = Exp


@dataclass(frozen=True, order=True)
class TriangleSpec:
    c: Exp

    def __post_init__(self):
        c = tuple(int(x) for x in self.c)
        if len(c) != 3:
            raise DomainError(f"triangle needs three coordinates, got {self.c!r}")
        if sum(c) > 1:
            raise DomainError(f"triangle {c} has coordinate sum > 1 (empty support)")
        object.__setattr__(self, "c", c)

    @property
    def side(self) -> int:
        return 1 - sum(self.c)

    def contains(self, v: Point) -> bool:
        c = self.c
        return v[0] >= c[0] and v[1] >= c[1] and v[2] >= c[2]

    def points(self, d: int) -> Iterable[Point]:
        """Degree-``d`` points of the cone."""
        c = self.c
        s = d - sum(c)
        for i in range(s + 1):
            for j in range(s + 1 - i):
                yield (c[0] + i, c[1] + j, c[2] + s - i - j)


def cone_support(a_list: Sequence[TriangleSpec], b_list: Sequence[TriangleSpec], d: int) -> frozenset[Point]:
    pts: set[Point] = set()
    for t in a_list:
        pts.update(t.points(d))
    if b_list:
        pts = {v for v in pts if not any(t.contains(v) for t in b_list)}
    return frozenset(pts)


def proj(v: Point) -> tuple[int, int]:
    """Integer planar embedding (x scaled by 2, y by 2/sqrt 3)."""
    return (2 * v[0] - v[1] - v[2], v[1] - v[2])


def proj_float(v: Point) -> tuple[float, float]:
    x, y = proj(v)
    return (x / 2.0, y * math.sqrt(3) / 2.0)


def black_corners(b: Point) -> tuple[Point, Point, Point]:
    return tuple(sub(b, e) for e in UNIT)  # type: ignore[return-value]


def white_corners(w: Point) -> tuple[Point, Point, Point]:
    return tuple(sub(sub(w, (1, 1, 1)), (-e[0], -e[1], -e[2])) for e in UNIT)  # type: ignore[return-value]


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class Segment:
    """A maximal straight boundary run."""

    index: int
    slope: int
    color: Color
    length: int
    height: int | None  # x3-coordinate of the strip, horizontal runs only
    cells: tuple[Point, ...]

    @property
    def horizontal(self) -> bool:
        return self.slope == 3

    def describe(self) -> str:
        h = f" height={self.height}" if self.height is not None else ""
        return f"#{self.index} slope={self.slope} {self.color} length={self.length}{h}"


@dataclass(frozen=True)
class Region:
    """One two-colored layer ``Omega(i)``: blacks of degree i, whites of degree i+1."""

    level: int
    blacks: frozenset[Point]
    whites: frozenset[Point]

    def boundary_edges(self) -> list[tuple[Point, Point, int, Color, Point]]:
        """Boundary edges oriented counterclockwise: (start, end, slope, color, cell)."""
        edges = []
        for b in self.blacks:
            corners = black_corners(b)
            for j, e in enumerate(UNIT):
                if add(b, e) in self.whites:
                    continue
                p, r = [corners[k] for k in range(3) if k != j]
                edges.append(_orient(p, r, corners[j]) + (j + 1, "black", b))
        for w in self.whites:
            for j, e in enumerate(UNIT):
                if sub(w, e) in self.blacks:
                    continue
                # edge shared with black w - e_j: its corners w - e_j - e_m, m != j
                bb = sub(w, e)
                p, r = [sub(bb, UNIT[m]) for m in range(3) if m != j]
                # apex of the white triangle opposite that edge
                apex = sub(sub(w, UNIT[(j + 1) % 3]), UNIT[(j + 2) % 3])
                edges.append(_orient(p, r, apex) + (j + 1, "white", w))
        return edges

    def euler_characteristic(self) -> int:
        verts: set[Point] = set()
        edges: set[frozenset[Point]] = set()
        for b in self.blacks:
            cs = black_corners(b)
            verts.update(cs)
            edges.update(frozenset((cs[i], cs[k])) for i in range(3) for k in range(i + 1, 3))
        for w in self.whites:
            cs = white_corners(w)
            verts.update(cs)
            edges.update(frozenset((cs[i], cs[k])) for i in range(3) for k in range(i + 1, 3))
        return len(verts) - len(edges) + len(self.blacks) + len(self.whites)

    def is_connected(self) -> bool:
        g = self.graph()
        return g.number_of_nodes() > 0 and nx.is_connected(g)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(("b", b) for b in self.blacks)
        g.add_nodes_from(("w", w) for w in self.whites)
        for b in self.blacks:
            for e in UNIT:
                w = add(b, e)
                if w in self.whites:
                    g.add_edge(("b", b), ("w", w))
        return g

    def boundary_cycles(self) -> list[list[tuple[Point, Point, int, Color, Point]]]:
        edges = self.boundary_edges()
        out_of: dict[Point, list] = {}
        for e in edges:
            out_of.setdefault(e[0], []).append(e)
        if any(len(v) > 1 for v in out_of.values()):
            raise NotSimplyConnected("boundary touches itself at a vertex")
        seen: set[int] = set()
        cycles = []
        for e in sorted(edges):
            if id(e) in seen:
                continue
            cyc = []
            cur = e
            while id(cur) not in seen:
                seen.add(id(cur))
                cyc.append(cur)
                cur = out_of[cur[1]][0]
            cycles.append(cyc)
        return cycles

    def runs(self) -> list[Segment]:
        cycles = self.boundary_cycles()
        if len(cycles) != 1:
            raise NotSimplyConnected(f"boundary has {len(cycles)} components")
        cyc = cycles[0]
        key = lambda e: (e[2], e[3])  # noqa: E731
        # rotate so the walk starts at a run boundary, then canonically at the
        # lowest horizontal white run if any
        n = len(cyc)
        start = next((i for i in range(n) if key(cyc[i]) != key(cyc[i - 1])), 0)
        cyc = cyc[start:] + cyc[:start]
        groups: list[list] = []
        for e in cyc:
            if groups and key(groups[-1][-1]) == key(e):
                groups[-1].append(e)
            else:
                groups.append([e])
        segs = []
        for g in groups:
            slope, color = g[0][2], g[0][3]
            cells = tuple(e[4] for e in g)
            height = None
            if slope == 3:
                hs = {c[2] if color == "white" else c[2] + 1 for c in cells}
                height = hs.pop()
            segs.append(Segment(0, slope, color, len(g), height, cells))
        first = _canonical_start(segs)
        segs = segs[first:] + segs[:first]
        return [Segment(i, s.slope, s.color, s.length, s.height, s.cells) for i, s in enumerate(segs)]


def _orient(p: Point, r: Point, apex: Point) -> tuple[Point, Point]:
    if _cross(proj(p), proj(r), proj(apex)) > 0:
        return (p, r)
    return (r, p)


def _canonical_start(segs: list[Segment]) -> int:
    best = None
    for i, s in enumerate(segs):
        k = (s.slope != 3, s.color != "white", -(s.height if s.height is not None else 0),
             min(s.cells))
        if best is None or k < best[0]:
            best = (k, i)
    return best[1] if best else 0


def slope_pattern_degree(segs: Sequence[Segment]) -> int:
    """Number of cycles through the three slopes; raises if not cyclic."""
    n = len(segs)
    if n % 3 or n < 3:
        raise SlopeCycleViolated(f"boundary has {n} straight runs, not a multiple of 3")
    steps = {(segs[(i + 1) % n].slope - segs[i].slope) % 3 for i in range(n)}
    if steps not in ({1}, {2}):
        raise SlopeCycleViolated("boundary slopes do not cycle in a fixed cyclic order")
    return n // 3


@dataclass(frozen=True)
class DomainSpec:
    a_triangles: tuple[TriangleSpec, ...]
    b_triangles: tuple[TriangleSpec, ...]
    blacks: frozenset[Point]
    whites: frozenset[Point]
    segments: tuple[Segment, ...]
    deg: int
    stable_range: int
    tileable: bool
    name: str = ""
    _support_cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def horizontal_heights(self) -> list[tuple[int, Color]]:
        return [(s.height, s.color) for s in self.segments if s.horizontal]

    @property
    def horizontal_segments(self) -> list[Segment]:
        return [s for s in self.segments if s.horizontal]

    def support(self, d: int) -> frozenset[Point]:
        return support(self, d)

    def region(self, i: int) -> Region:
        return Region(i, self.support(i), self.support(i + 1))

    def segment(self, index: int) -> Segment:
        for s in self.segments:
            if s.index == index:
                return s
        raise UnsupportedMove(f"no boundary segment #{index}")

    def to_text(self) -> str:
        lines = [f"# {self.name}"] if self.name else []
        lines += [f"A {t.c[0]} {t.c[1]} {t.c[2]}" for t in self.a_triangles]
        lines += [f"B {t.c[0]} {t.c[1]} {t.c[2]}" for t in self.b_triangles]
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        return {
            "name": self.name,
            "deg": self.deg,
            "black_count": len(self.blacks),
            "white_count": len(self.whites),
            "stable_range": self.stable_range,
            "tileable": self.tileable,
            "segments": [s.describe() for s in self.segments],
            "horizontal_heights": self.horizontal_heights,
        }


def support(domain: DomainSpec, d: int) -> frozenset[Point]:
    cache = domain._support_cache
    if d not in cache:
        cache[d] = cone_support(domain.a_triangles, domain.b_triangles, d)
    return cache[d]


def has_perfect_matching(blacks: frozenset[Point], whites: frozenset[Point]) -> bool:
    if len(blacks) != len(whites):
        return False
    if not blacks:
        return True
    g = Region(0, blacks, whites).graph()
    top = [n for n in g if n[0] == "b"]
    m = nx.bipartite.hopcroft_karp_matching(g, top_nodes=top)
    return len(m) == 2 * len(blacks)


def _predicted_runs(segs: Sequence[Segment], i: int) -> list[tuple[int, Color, int]] | None:
    out = []
    for s in segs:
        length = s.length - i if s.color == "white" else s.length + i
        if length < 0:
            return None
        if length > 0:
            out.append((s.slope, s.color, length))
    return out


def _same_cyclic(a: list, b: list) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    n = len(a)
    return any(all(a[(k + t) % n] == b[t] for t in range(n)) for k in range(n))


def compute_stable_range(a_list, b_list, segs: Sequence[Segment], limit: int = 10_000) -> int:
    """Largest s with every Omega(i), i <= s, matching the predicted boundary.

    White runs shrink and black runs grow by one per step; a white run may
    reach length zero at the last stable step.
    """
    s = 0
    for i in range(1, limit):
        pred = _predicted_runs(segs, i)
        if pred is None:
            break
        reg = Region(i, cone_support(a_list, b_list, i), cone_support(a_list, b_list, i + 1))
        try:
            actual = [(r.slope, r.color, r.length) for r in reg.runs()]
        except NotSimplyConnected:
            break
        if not _same_cyclic(actual, pred):
            break
        s = i
    return s


def build_domain(a_list: Sequence, b_list: Sequence = (), *, name: str = "",
                 require_tileable: bool = True, allow_degenerate: bool = False,
                 check_containment: bool = True) -> DomainSpec:
    """Validate a triangle description and derive its boundary data."""
    a = tuple(t if isinstance(t, TriangleSpec) else TriangleSpec(tuple(t)) for t in a_list)
    b = tuple(t if isinstance(t, TriangleSpec) else TriangleSpec(tuple(t)) for t in b_list)
    if not a:
        raise DomainError("at least one A triangle is required")
    for t in (b if check_containment else ()):
        for v in t.points(1):
            if not any(s.contains(v) for s in a):
                raise ContainmentViolated(f"triangle B {t.c} is not contained in the union of A triangles")
    blacks = cone_support(a, b, 0)
    whites = cone_support(a, b, 1)
    if not whites:
        raise DomainError("domain has no triangles")
    reg = Region(0, blacks, whites)
    if not reg.is_connected():
        raise NotSimplyConnected("domain is not connected")
    if reg.euler_characteristic() != 1:
        raise NotSimplyConnected(f"Euler characteristic {reg.euler_characteristic()} != 1")
    segs = reg.runs()
    try:
        deg = slope_pattern_degree(segs)
    except SlopeCycleViolated:
        if not allow_degenerate:
            raise
        deg = 0
    if deg == 1 and not allow_degenerate:
        raise SlopeCycleViolated("boundary cycles through the slopes only once (single triangle)")
    if deg and not allow_degenerate:
        nh = sum(1 for s in segs if s.horizontal)
        if nh != deg:
            raise SlopeCycleViolated(f"{nh} horizontal runs but degree {deg}")
    tileable = has_perfect_matching(blacks, whites)
    if require_tileable and not tileable:
        raise NotTileable(f"{len(whites)} white vs {len(blacks)} black triangles, no perfect matching")
    sr = compute_stable_range(a, b, segs) if deg else 0
    return DomainSpec(a, b, blacks, whites, tuple(segs), deg, sr, tileable, name)


def shift_boundary(domain: DomainSpec, segment: int, direction: Literal["in", "out"]) -> DomainSpec:
    """Move a horizontal boundary one row: white ones in, black ones out.

    A white segment sharing its A-triangle edge with other segments is moved
    alone by re-adding an A triangle cornered at the separating notch.
    """
    seg = domain.segment(segment)
    if not seg.horizontal:
        raise UnsupportedMove(f"segment #{segment} is not horizontal")
    h = seg.height
    a = list(domain.a_triangles)
    b = list(domain.b_triangles)
    name = f"{domain.name}|{seg.color}-{direction}#{segment}"

    def make(a_new, b_new):
        return build_domain(a_new, b_new, name=name, require_tileable=False,
                            allow_degenerate=True, check_containment=False)

    if seg.color == "white" and direction == "in":
        cells = set(seg.cells)
        hit = [k for k, t in enumerate(a) if t.c[2] == h and any(t.contains(v) for v in cells)]
        if not hit:
            raise UnsupportedMove(f"segment #{segment} does not lie on a triangle edge")
        for k in hit:
            c = a[k].c
            a[k] = TriangleSpec((c[0], c[1], c[2] + 1))
        strip = _strip_component(domain, seg, h)
        expected = {d: frozenset(v for v in domain.support(d) if v not in strip) for d in (0, 1)}
        # candidate A triangles keeping the rest of the row: corners at B notches
        extra = []
        for k in hit:
            c = domain.a_triangles[k].c
            for t in b:
                extra += [TriangleSpec((t.c[0], c[1], h)), TriangleSpec((c[0], t.c[1], h))]
        tries = [[]] + [[x] for x in extra] + [[x, y] for n, x in enumerate(extra) for y in extra[n + 1:]]
        for more in tries:
            if any(sum(x.c) > 1 for x in more):
                continue
            try:
                new = make(a + more, b)
            except DomainError:
                continue
            if all(new.support(d) == expected[d] for d in expected):
                return new
        raise UnsupportedMove(f"cannot move segment #{segment} without changing other boundary rows")
    if seg.color == "black" and direction == "out":
        targets = {add(v, (0, 0, 1)) for v in seg.cells}
        hit = [k for k, t in enumerate(b) if t.c[2] == h and any(t.contains(v) for v in targets)]
        if not hit:
            raise UnsupportedMove(f"segment #{segment} does not lie on a triangle edge")
        for k in hit:
            c = b[k].c
            b[k] = TriangleSpec((c[0], c[1], c[2] + 1))
        new = make(a, b)
        for d in (0, 1):
            old = domain.support(d)
            got = new.support(d)
            if not old <= got or any(v[2] != h for v in got - old):
                raise UnsupportedMove(f"moving segment #{segment} also changes other boundary rows")
        return new
    raise UnsupportedMove(f"only white/in and black/out moves are supported, got {seg.color}/{direction}")


def _strip_component(domain: DomainSpec, seg: Segment, h: int) -> set[Point]:
    """Triangles of the row x3 = h connected to the segment within that row."""
    row = {p for p in domain.blacks | domain.whites if p[2] == h}
    seen: set[Point] = set()
    stack = [c for c in seg.cells if c in row]
    while stack:
        p = stack.pop()
        if p in seen:
            continue
        seen.add(p)
        sign = -1 if p in domain.whites else 1  # whites step down to blacks, blacks up
        for e in ((1, 0, 0), (0, 1, 0)):
            nb = add(p, tuple(sign * x for x in e))
            if nb in row:
                stack.append(nb)
    return seen


# ---------------------------------------------------------------- domain files

def parse_domain_text(text: str, name: str = "") -> DomainSpec:
    a, b = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0].upper() not in ("A", "B"):
            raise DomainError(f"line {lineno}: expected 'A c1 c2 c3' or 'B c1 c2 c3', got {raw!r}")
        try:
            c = tuple(int(x) for x in parts[1:])
        except ValueError:
            raise DomainError(f"line {lineno}: coordinates must be integers, got {raw!r}") from None
        (a if parts[0].upper() == "A" else b).append(TriangleSpec(c))
    if not a:
        raise DomainError("domain file has no A triangles")
    return build_domain(a, b, name=name)


def load_domain(path: str | Path) -> DomainSpec:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DomainError(f"cannot read domain file {p}: {exc.strerror}") from None
    return parse_domain_text(text, name=p.stem)


# ------------------------------------------------------------ standard domains

def hexagon_triangles(k1: int, k2: int, k3: int) -> tuple[list[Exp], list[Exp]]:
    """Big triangle of side k1+k2+k3 minus corners of sides k1, k2, k3."""
    big = k1 + k2 + k3
    a0 = (1 - k1, 1 - k2, -k3)
    corners = []
    for i, k in enumerate((k1, k2, k3)):
        if k:
            c = list(a0)
            c[i] += big - k
            corners.append(tuple(c))
    return [a0], corners


def hexagon(k1: int, k2: int, k3: int) -> DomainSpec:
    a, b = hexagon_triangles(k1, k2, k3)
    return build_domain(a, b, name=f"H({k1},{k2},{k3})")


def center_white(domain: DomainSpec) -> Point:
    """White triangle closest to the centroid of the domain."""
    pts = sorted(domain.whites)
    cx = sum(proj(p)[0] for p in pts) / len(pts)
    cy = sum(proj(p)[1] for p in pts) / len(pts)
    return min(pts, key=lambda p: ((proj(p)[0] - cx) ** 2 + 3 * (proj(p)[1] - cy) ** 2, p))
