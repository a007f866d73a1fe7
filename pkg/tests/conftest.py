import math
from pathlib import Path

import numpy as np
import pytest

from ghz_tangles.core.states import Ket, ghz_ket, ket_from_amplitudes, w_ket
from ghz_tangles.ghz_class.params import GhzClassParams

TEST_DATA = Path(__file__).parent / "test-data"


@pytest.fixture
def test_data() -> Path:
    return TEST_DATA


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def ghz3() -> Ket:
    return ghz_ket(3)


@pytest.fixture
def w3() -> Ket:
    return w_ket(3)


@pytest.fixture
def product3() -> Ket:
    return ket_from_amplitudes([1, 0, 0, 0, 0, 0, 0, 0])


@pytest.fixture
def bell() -> Ket:
    return ghz_ket(2)


@pytest.fixture
def sample_params() -> GhzClassParams:
    """r = 2, phi = (pi/3, pi/4, pi/2); x = sqrt(2)/8, y = sqrt(6)/8, z = 0, t = sqrt(6)/8."""
    return GhzClassParams(n=3, r=2.0, phis=(math.pi / 3, math.pi / 4, math.pi / 2), kappa=-1.0)
