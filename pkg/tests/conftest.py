"""
Shared fixtures for the test suite
"""
import numpy as np
import pytest

from src.borel import FlagConfig
from src.hypvol import BASE_TETRAHEDRON
from src.veronese import veronese_flag


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: optimizer and sequence runs (deselect with -m 'not slow')")


@pytest.fixture
def rng():
    """Seeded generator so every test sees the same draws"""
    return np.random.default_rng(20240611)


@pytest.fixture
def base_tetrahedron():
    return BASE_TETRAHEDRON


@pytest.fixture
def veronese_config():
    """Factory for the Veronese flags of a tetrahedron (the base one by default)"""
    def make(n, tet=BASE_TETRAHEDRON):
        return FlagConfig(tuple(veronese_flag(point, n) for point in tet))
    return make
