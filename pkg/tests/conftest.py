"""Shared fixtures for the pendlab tests."""
import sys
from pathlib import Path

import numpy as np
import pytest

# Add repo root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from pendlab.chain_model import PendulumChain  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def random_chain(rng):
    """Factory for chains with lengths and masses drawn from [0.5, 2]"""
    def make(n):
        return PendulumChain(rng.uniform(0.5, 2.0, n), rng.uniform(0.5, 2.0, n), 9.8)
    return make
