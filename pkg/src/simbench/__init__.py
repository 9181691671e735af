"""Simulation designs, sampling, partition agreement and the benchmark driver."""

from .designs import (
    design_a_population,
    design_b_population,
    design_population,
    design_a_truth,
    design_b_truth,
)
from .sampling import replication_rng, rng_metadata, sample_mvn, sample_exact, RNG_NAME
from .metrics import adjusted_rand_index, ari_from_labels
from .benchmark import run_benchmark, run_replication, METHODS

__all__ = [
    'design_a_population',
    'design_b_population',
    'design_population',
    'design_a_truth',
    'design_b_truth',
    'replication_rng',
    'rng_metadata',
    'sample_mvn',
    'sample_exact',
    'RNG_NAME',
    'adjusted_rand_index',
    'ari_from_labels',
    'run_benchmark',
    'run_replication',
    'METHODS',
]
