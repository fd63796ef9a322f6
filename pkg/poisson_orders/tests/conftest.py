import random

import pytest

from services import config
from services.order import matrix_order
from services.poisson import PoissonAlgebra
from services.poly import PolynomialRing
from services.session import load


def algebra(variables, entries):
    ring = PolynomialRing(tuple(variables))
    index = {name: k for k, name in enumerate(variables)}
    upper = {}
    for key, value in entries.items():
        left, right = key.split(",")
        i, j = index[left], index[right]
        upper[(i, j) if i < j else (j, i)] = value if i < j else f"-({value})"
    return PoissonAlgebra.from_upper(ring, upper)


@pytest.fixture
def sl2():
    return algebra("ehf", {"e,h": "-2*e", "e,f": "h", "h,f": "-2*f"})


@pytest.fixture
def heis():
    return algebra("xyz", {"x,y": "z"})


@pytest.fixture
def trivial():
    return algebra("xyz", {})


@pytest.fixture
def plane():
    return algebra("xy", {})


@pytest.fixture
def solvable():
    return algebra("xy", {"x,y": "y"})


@pytest.fixture
def nonjacobi():
    return algebra("xyz", {"x,y": "z", "x,z": "x", "y,z": "x"})


@pytest.fixture
def mat2_sl2(sl2):
    return matrix_order(sl2, 2)


@pytest.fixture
def mat2_heis(heis):
    return matrix_order(heis, 2)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def examples():
    return load(config.PACKAGE_ROOT / "sessions" / "examples.json")
