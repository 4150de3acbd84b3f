import numpy as np
import pytest

from exterior_wave import make_grid


@pytest.fixture
def grid():
    """Small grid, exact transforms, cheap enough for every test."""
    return make_grid(16.0, 512)


@pytest.fixture
def wide_grid():
    """Wider box for propagation tests that need truncation headroom."""
    return make_grid(32.0, 1024)


@pytest.fixture
def rng():
    return np.random.default_rng(2718)
