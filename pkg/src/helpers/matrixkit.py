"""
Matrix Kit - Dense numerical kernels with no side effects.

Standardization, correlation, symmetric eigendecomposition, spectral norm,
Cholesky factorization and block detection used by every other module.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import linalg
from scipy.sparse.csgraph import connected_components

from ..exceptions import ConstantColumnError, ConvergenceError, NotPositiveDefiniteError
from ..models.matrices import CorrelationMatrix, RawMatrix, StandardizedMatrix
from ..models.tree import Cluster, Partition

logger = logging.getLogger(__name__)

CHOLESKY_PIVOT_TOL = 1e-12
BLOCK_TOL = 1e-12  # |r| above this links two variables into one block


def standardize(raw: RawMatrix) -> StandardizedMatrix:
    """
    Centre every column and scale it to unit sample standard deviation (divisor n-1).

    Args:
        raw: n x p data matrix with n >= 2

    Returns:
        StandardizedMatrix with the same labels

    Raises:
        ConstantColumnError: if a column has zero variance
    """
    values = raw.values
    if values.shape[0] < 2:
        raise ValueError(f"Need at least 2 observations, got {values.shape[0]}")

    centred = values - values.mean(axis=0)
    sd = centred.std(axis=0, ddof=1)
    scale = np.maximum(np.abs(values).max(axis=0), 1.0)
    for j in range(values.shape[1]):
        if not np.isfinite(sd[j]) or sd[j] <= 1e-14 * scale[j]:
            raise ConstantColumnError(j, raw.column_labels[j])

    return StandardizedMatrix(centred / sd, list(raw.column_labels))


def correlation(x: StandardizedMatrix) -> CorrelationMatrix:
    """
    Sample correlation matrix R = X^T X / (n-1) of standardized data.

    The result is symmetrized, its diagonal set to exactly one and entries
    clipped to [-1, 1] to remove floating-point dust.
    """
    values = x.values
    r = values.T @ values / (values.shape[0] - 1)
    r = (r + r.T) / 2.0
    np.clip(r, -1.0, 1.0, out=r)
    np.fill_diagonal(r, 1.0)
    return CorrelationMatrix(r, list(x.column_labels))


def sym_eigen(r: CorrelationMatrix, k: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a symmetric matrix, eigenvalues in descending order.

    Args:
        r: Symmetric matrix
        k: Return only the top k pairs (all if None)

    Returns:
        (eigenvalues, eigenvectors) with eigenvectors as columns

    Raises:
        ConvergenceError: if LAPACK fails to converge
    """
    values = r.values if isinstance(r, CorrelationMatrix) else np.asarray(r, dtype=float)
    p = values.shape[0]
    if p == 0:
        return np.empty(0), np.empty((0, 0))
    try:
        if k is not None and k < p:
            w, v = linalg.eigh(values, subset_by_index=[p - k, p - 1])
        else:
            w, v = linalg.eigh(values)
    except linalg.LinAlgError as e:
        raise ConvergenceError(f"Symmetric eigensolver failed: {e}") from e

    order = np.argsort(-w, kind='stable')
    return w[order], v[:, order]


def spectral_norm(r: CorrelationMatrix) -> float:
    """Largest eigenvalue (equals the spectral norm for PSD matrices)."""
    eigenvalues, _ = sym_eigen(r, k=1)
    return float(eigenvalues[0])


def cholesky(r: CorrelationMatrix) -> np.ndarray:
    """
    Lower-triangular L with L L^T = R.

    Raises:
        NotPositiveDefiniteError: if a pivot is not safely positive
    """
    values = r.values if isinstance(r, CorrelationMatrix) else np.asarray(r, dtype=float)
    try:
        lower = linalg.cholesky(values, lower=True)
    except linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(f"Matrix is not positive definite: {e}") from e

    pivots = np.diag(lower) ** 2
    if pivots.size and pivots.min() <= CHOLESKY_PIVOT_TOL:
        raise NotPositiveDefiniteError(
            f"Cholesky pivot {pivots.min():.3g} at index {int(pivots.argmin())} is not positive"
        )
    return lower


def is_block_diagonal_under_permutation(r: CorrelationMatrix, tol: float = BLOCK_TOL) -> Partition:
    """
    Connected components of the graph linking i and j when |r_ij| > tol.

    A partition with b components means R can be permuted into b diagonal blocks.
    """
    adjacency = np.abs(r.values) > tol
    np.fill_diagonal(adjacency, False)
    n_components, labels = connected_components(adjacency, directed=False)
    logger.debug("Found %d blocks at tol=%g", n_components, tol)
    return Partition([Cluster.of(np.flatnonzero(labels == c)) for c in range(n_components)])
