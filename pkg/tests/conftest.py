from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qdimer.lattice import hexagon
from qdimer.ncalg import NCParams


@pytest.fixture(scope="session")
def h111():
    return hexagon(1, 1, 1)


@pytest.fixture(scope="session")
def h222():
    return hexagon(2, 2, 2)


@pytest.fixture(scope="session")
def h333():
    return hexagon(3, 3, 3)


@pytest.fixture
def generic():
    return NCParams.random(random.Random(12345))


@pytest.fixture
def half():
    return NCParams.from_q(Fraction(1, 2))
