"""Helpers - Pure numerical utility functions with no side effects."""

from .matrixkit import (
    standardize,
    correlation,
    sym_eigen,
    spectral_norm,
    cholesky,
    is_block_diagonal_under_permutation,
)

__all__ = [
    'standardize',
    'correlation',
    'sym_eigen',
    'spectral_norm',
    'cholesky',
    'is_block_diagonal_under_permutation',
]
