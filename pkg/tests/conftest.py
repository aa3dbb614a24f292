import os
import sys

import pytest

SRC = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src")
if SRC not in sys.path:
    sys.path.insert(0, SRC)

from lib.dispersion.grid import GridSpec  # noqa: E402
from lib.scheme_synthesis.drp_scheme import SchemeCoefficients, synthesize_drp  # noqa: E402


@pytest.fixture(scope="session")
def three_point():
    return synthesize_drp(1)


@pytest.fixture(scope="session")
def five_point():
    return synthesize_drp(2)


@pytest.fixture
def grid09():
    return GridSpec(c=1.0, h=0.01, sigma=0.9)


@pytest.fixture
def grid05():
    return GridSpec(c=1.0, h=0.01, sigma=0.5)


def random_scheme(rng, m):
    return SchemeCoefficients(m=m, gamma=tuple(rng.uniform(-1.0, 1.0, size=m)))
