"""
Pytest configuration and fixtures for Phicrit tests.
"""
import numpy as np
import pytest
from app.factory import family_state
from app.spin import SpinSystem
from app.storage import save_state


@pytest.fixture(scope="function")
def rng():
    """Fresh seeded generator for each test."""
    return np.random.default_rng(20240607)


@pytest.fixture
def spin4():
    """Two-spin-3/2 system (N = 4)."""
    return SpinSystem.from_dimension(4)


@pytest.fixture
def spin6():
    """Spin-5/2 system (N = 6)."""
    return SpinSystem.from_dimension(6)


@pytest.fixture
def family():
    """Factory for ρ(λ) states: family(N, lam) -> DensityState."""
    def make(N, lam):
        return family_state(N, lam).state
    return make


@pytest.fixture
def state_file(tmp_path):
    """Factory writing a state to a temporary JSON file and returning its path."""
    def write(state, name="state.json"):
        path = tmp_path / name
        save_state(state, path)
        return path
    return write


@pytest.fixture
def random_kets(rng):
    """Factory for lists of normalized complex Gaussian kets."""
    def make(dim, count):
        out = []
        for _ in range(count):
            v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            out.append(v / np.linalg.norm(v))
        return out
    return make
