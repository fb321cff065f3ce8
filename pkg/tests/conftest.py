from fractions import Fraction

import pytest

from dunklkit.config import QuadratureBudget, Tolerances
from dunklkit.harness import SuiteContext
from dunklkit.rootsys import type_a, type_b, z2d


@pytest.fixture(scope="session")
def z2_half():
    return z2d([Fraction(1, 2)])


@pytest.fixture(scope="session")
def z2_pair():
    return z2d([Fraction(1, 2), 1])


@pytest.fixture(scope="session")
def a2():
    return type_a(2, 1)


@pytest.fixture(scope="session")
def b2():
    return type_b(2, Fraction(1, 2), Fraction(3, 2))


@pytest.fixture
def context():
    return SuiteContext(seed=0, tolerances=Tolerances(), budget=QuadratureBudget())


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "reports"
    path.mkdir()
    return path
