"""Matrix containers - data, standardized data and correlation matrices."""

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
import pandas as pd


def _default_labels(p: int) -> List[str]:
    return [f"X{j + 1}" for j in range(p)]


@dataclass
class RawMatrix:
    """n x p observations (rows) of p variables (columns)."""
    values: np.ndarray
    column_labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError(f"Expected a 2-D matrix, got shape {self.values.shape}")
        if not self.column_labels:
            self.column_labels = _default_labels(self.values.shape[1])
        if len(self.column_labels) != self.values.shape[1]:
            raise ValueError(
                f"{len(self.column_labels)} labels for {self.values.shape[1]} columns"
            )

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, columns=self.column_labels)


@dataclass
class StandardizedMatrix(RawMatrix):
    """Data with zero column means and unit column standard deviations (divisor n-1)."""


@dataclass
class CorrelationMatrix:
    """p x p symmetric positive semidefinite matrix with unit diagonal."""
    values: np.ndarray
    column_labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError(f"Correlation matrix must be square, got shape {self.values.shape}")
        if not self.column_labels:
            self.column_labels = _default_labels(self.values.shape[0])
        if len(self.column_labels) != self.values.shape[0]:
            raise ValueError(
                f"{len(self.column_labels)} labels for a {self.values.shape[0]}x{self.values.shape[0]} matrix"
            )

    @property
    def p(self) -> int:
        return self.values.shape[0]

    def submatrix(self, indices: Sequence[int]) -> 'CorrelationMatrix':
        """Principal submatrix for a cluster of variables."""
        idx = list(indices)
        return CorrelationMatrix(
            self.values[np.ix_(idx, idx)],
            [self.column_labels[j] for j in idx],
        )

    def cross_block(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        """Off-diagonal block R_jj' between two clusters."""
        return self.values[np.ix_(list(rows), list(cols))]

    def invariant_violations(self, psd_tol: float = -1e-8, tol: float = 1e-12) -> List[str]:
        """
        Check the correlation-matrix invariants.

        Args:
            psd_tol: Smallest admissible eigenvalue
            tol: Tolerance for symmetry, diagonal and range checks

        Returns:
            Human-readable descriptions of every violated invariant (empty if valid)
        """
        problems = []
        v = self.values
        if not np.all(np.isfinite(v)):
            problems.append("non-finite entries")
            return problems
        if np.max(np.abs(v - v.T), initial=0.0) > tol:
            problems.append("not symmetric")
        if np.max(np.abs(np.diag(v) - 1.0), initial=0.0) > tol:
            problems.append("diagonal is not 1")
        if np.max(np.abs(v), initial=0.0) > 1.0 + tol:
            problems.append("entries outside [-1, 1]")
        smallest = float(np.linalg.eigvalsh((v + v.T) / 2.0)[0]) if self.p else 0.0
        if smallest < psd_tol:
            problems.append(f"not positive semidefinite (smallest eigenvalue {smallest:.3g})")
        return problems

    def is_valid(self, psd_tol: float = -1e-8, tol: float = 1e-12) -> bool:
        return not self.invariant_violations(psd_tol=psd_tol, tol=tol)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, index=self.column_labels, columns=self.column_labels)
