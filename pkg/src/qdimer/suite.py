"""Named domains used by the self-test and the test-suite."""

from __future__ import annotations

from functools import lru_cache

from .lattice import DomainSpec, Point, build_domain, hexagon

# one A triangle with a notch in its bottom edge and a cut-off top corner:
# three horizontal boundaries (two white at the same height, one black)
DEG3_TRIANGLES = {
    "deg3-small": ([(0, 0, -6)], [(7, 0, -6), (0, 6, -6), (0, 0, -2), (4, 3, -6)]),
    "deg3-a": ([(0, 0, -8)], [(8, 0, -8), (0, 8, -8), (0, 0, -2), (4, 4, -8)]),
    "deg3-b": ([(0, 0, -10)], [(10, 0, -10), (0, 10, -10), (0, 0, -4), (5, 5, -10)]),
    "deg3-c": ([(0, 0, -11)], [(11, 0, -11), (0, 11, -11), (0, 0, -4), (5, 5, -11)]),
    # two A triangles, four B triangles
    "deg3-twoA": ([(0, 0, -4), (-4, 0, -1)], [(0, 4, -4), (-4, 5, -1), (-4, 0, 2), (4, 0, -4)]),
}


@lru_cache(maxsize=None)
def named(name: str) -> DomainSpec:
    if name.startswith("H(") and name.endswith(")"):
        k = tuple(int(x) for x in name[2:-1].split(","))
        return hexagon(*k)
    a, b = DEG3_TRIANGLES[name]
    return build_domain(a, b, name=name)


def best_white(domain: DomainSpec) -> Point:
    """White vertex whose hole stays inside the domain for the most degrees."""
    from .lattice import center_white
    from .modlab import w_stable_range
    c = center_white(domain)
    return max(sorted(domain.whites), key=lambda w: (w_stable_range(domain, w), w == c))


HILBERT_SUITE = ("H(2,2,2)", "H(3,3,3)", "H(4,4,4)", "deg3-b", "deg3-c")
