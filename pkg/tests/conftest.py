import math

import numpy as np
import pytest

from kitaev_ladder.lattice import build_square_torus, build_three_leg_ladder, build_two_leg_ladder
from kitaev_ladder.spectrum import Couplings

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def ladder2():
    return build_two_leg_ladder(2)


@pytest.fixture(scope="session")
def ladder3():
    return build_two_leg_ladder(3)


@pytest.fixture(scope="session")
def three_leg2():
    return build_three_leg_ladder(2)


@pytest.fixture(scope="session")
def torus3():
    return build_square_torus(3)


@pytest.fixture
def unit():
    return Couplings(1.0, 1.0)
