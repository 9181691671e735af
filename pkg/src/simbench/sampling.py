"""
Sampling

Seeded random streams per replication, multivariate normal draws from a
population correlation matrix, and exact samples whose sample correlation
reproduces the population matrix.
"""

import logging
from typing import Optional

import numpy as np
from scipy import linalg

from ..helpers.matrixkit import cholesky
from ..models.matrices import CorrelationMatrix, RawMatrix, StandardizedMatrix

logger = logging.getLogger(__name__)

RNG_NAME = "numpy.random.PCG64"
RNG_STREAM_RULE = "SeedSequence(seed, spawn_key=(replication,))"


def replication_rng(seed: int, replication: Optional[int] = None) -> np.random.Generator:
    """
    Generator for one replication.

    Every replication owns the substream SeedSequence(seed, spawn_key=(replication,)),
    so results do not depend on the order replications run in.
    """
    spawn_key = () if replication is None else (int(replication),)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=spawn_key)))


def rng_metadata(seed: int) -> dict:
    return {'generator': RNG_NAME, 'stream_rule': RNG_STREAM_RULE, 'seed': int(seed)}


def sample_mvn(pop: CorrelationMatrix, n: int, rng: np.random.Generator) -> RawMatrix:
    """
    n i.i.d. draws from N(0, pop) as rows Z L^T with L = cholesky(pop).

    Raises:
        NotPositiveDefiniteError: if pop is not positive definite
    """
    if n < 1:
        raise ValueError(f"Need at least one observation, got {n}")
    lower = cholesky(pop)
    z = rng.standard_normal((n, pop.p))
    return RawMatrix(z @ lower.T, list(pop.column_labels))


def sample_exact(pop: CorrelationMatrix, n: int, rng: np.random.Generator) -> StandardizedMatrix:
    """
    Standardized n x p data whose sample correlation equals pop.

    X = sqrt(n - 1) Q L^T where Q holds orthonormalized, centred Gaussian columns
    and L = cholesky(pop). Needs n > p.
    """
    p = pop.p
    if n <= p:
        raise ValueError(f"An exact sample needs n > p, got n={n}, p={p}")
    lower = cholesky(pop)
    g = rng.standard_normal((n, p))
    g -= g.mean(axis=0)
    q, _ = linalg.qr(g, mode='economic')
    values = np.sqrt(n - 1) * q @ lower.T
    return StandardizedMatrix(values, list(pop.column_labels))
