import numpy as np
import pytest
from hypothesis import settings

from catdip.kernel import default_grid, gaussian_mode

settings.register_profile("catdip", max_examples=40, deadline=None)
settings.load_profile("catdip")


@pytest.fixture(scope="session")
def grid():
    return default_grid(1.0)


@pytest.fixture(scope="session")
def theta(grid):
    return gaussian_mode(1.0, grid)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
