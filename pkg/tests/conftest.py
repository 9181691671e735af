"""Shared pytest fixtures for HC-SVD tests."""

import numpy as np
import pandas as pd
import pytest
from scipy.linalg import block_diag

from src.models import CorrelationMatrix
from src.simbench import design_b_population, replication_rng, sample_exact


def _equicorrelation(p, rho):
    block = np.full((p, p), float(rho))
    np.fill_diagonal(block, 1.0)
    return block


@pytest.fixture
def equicorrelation():
    """Factory for p x p equicorrelation matrices."""
    return _equicorrelation


@pytest.fixture
def block_correlation():
    """Factory: block_correlation([(size, rho), ...]) -> CorrelationMatrix with zero cross blocks."""
    def build(blocks):
        return CorrelationMatrix(block_diag(*[_equicorrelation(size, rho) for size, rho in blocks]))
    return build


@pytest.fixture
def two_block_correlation(block_correlation):
    """Blocks {0, 1} (rho 0.8) and {2, 3, 4} (rho 0.6)."""
    return block_correlation([(2, 0.8), (3, 0.6)])


@pytest.fixture
def rng():
    return replication_rng(20240501, 0)


@pytest.fixture
def design_b_small():
    """Design b population matrix with 4 blocks (p = 12) and its ground truth."""
    return design_b_population(12, replication_rng(7, 0))


@pytest.fixture
def exact_design_b_sample(design_b_small):
    """Standardized 40 x 12 data whose correlation equals the design b population."""
    population, _ = design_b_small
    return sample_exact(population, 40, replication_rng(7, 1))


@pytest.fixture
def random_data(rng):
    """50 x 4 Gaussian data with mild correlation."""
    z = rng.standard_normal((50, 4))
    z[:, 1] += 0.5 * z[:, 0]
    return z


@pytest.fixture
def write_csv(tmp_path):
    """Write a DataFrame (or raw text) to tmp_path/<name> and return the path."""
    def write(name, content, index=False):
        path = tmp_path / name
        if isinstance(content, str):
            path.write_text(content, encoding='utf-8')
        else:
            pd.DataFrame(content).to_csv(path, index=index)
        return path
    return write


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the full-size simulation studies")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size simulation study, runs with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
