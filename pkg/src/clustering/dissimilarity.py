"""
Cluster Dissimilarities

Semidistances between two disjoint variable clusters computed from blocks of
one parent correlation matrix, and the reliability height of a single cluster.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..exceptions import CollinearityError
from ..helpers.matrixkit import spectral_norm
from ..models.matrices import CorrelationMatrix
from .config import COLLINEARITY_TOL

logger = logging.getLogger(__name__)


class SplitDistanceKind(Enum):
    """Between-cluster semidistance."""
    RV = "rv"
    AVERAGE = "average"
    SINGLE = "single"

    @classmethod
    def parse(cls, value) -> 'SplitDistanceKind':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ', '.join(k.value for k in cls)
            raise ValueError(f"Unknown distance kind {value!r} (expected one of: {choices})") from None


@dataclass
class ClusterPair:
    """Within-cluster blocks r_j, r_jprime and the cross block r_jp of two clusters."""
    r_j: np.ndarray
    r_jp: np.ndarray
    r_jprime: np.ndarray
    left_indices: Sequence[int] = ()
    right_indices: Sequence[int] = ()

    def __post_init__(self):
        self.r_j = np.atleast_2d(np.asarray(self.r_j, dtype=float))
        self.r_jp = np.atleast_2d(np.asarray(self.r_jp, dtype=float))
        self.r_jprime = np.atleast_2d(np.asarray(self.r_jprime, dtype=float))
        p_j, p_jprime = self.r_j.shape[0], self.r_jprime.shape[0]
        if self.r_jp.shape != (p_j, p_jprime):
            raise ValueError(
                f"Cross block has shape {self.r_jp.shape}, expected {(p_j, p_jprime)}"
            )

    @classmethod
    def from_correlation(
        cls,
        r: CorrelationMatrix,
        left: Sequence[int],
        right: Sequence[int],
    ) -> 'ClusterPair':
        """Extract the three blocks for index sets `left` and `right` of r."""
        left, right = list(left), list(right)
        return cls(
            r_j=r.submatrix(left).values,
            r_jp=r.cross_block(left, right),
            r_jprime=r.submatrix(right).values,
            left_indices=tuple(left),
            right_indices=tuple(right),
        )


def _check_collinearity(pair: ClusterPair) -> None:
    cross = np.abs(pair.r_jp)
    if cross.size == 0:
        return
    flat = int(np.argmax(cross))
    row, col = np.unravel_index(flat, cross.shape)
    if cross[row, col] >= 1.0 - COLLINEARITY_TOL:
        i = pair.left_indices[row] if pair.left_indices else int(row)
        j = pair.right_indices[col] if pair.right_indices else int(col)
        raise CollinearityError((int(i), int(j)), float(pair.r_jp[row, col]))


def split_distance(pair: ClusterPair, kind: SplitDistanceKind) -> float:
    """
    Semidistance between the two clusters of `pair`.

    RV:      1 - ||R_jj'||_F^2 / (||R_j||_F ||R_j'||_F)
    AVERAGE: 1 - sum |r| / (p_j p_j')
    SINGLE:  1 - max |r|

    Args:
        pair: Blocks of the two clusters
        kind: Distance kind

    Returns:
        Distance in [0, 1], symmetric in the two clusters

    Raises:
        CollinearityError: AVERAGE/SINGLE with a cross correlation of +-1
    """
    kind = SplitDistanceKind.parse(kind)
    cross = pair.r_jp

    if kind == SplitDistanceKind.RV:
        denominator = np.linalg.norm(pair.r_j) * np.linalg.norm(pair.r_jprime)
        value = 1.0 - math.fsum((cross ** 2).ravel()) / denominator
    else:
        _check_collinearity(pair)
        magnitudes = np.abs(cross)
        if kind == SplitDistanceKind.AVERAGE:
            value = 1.0 - math.fsum(magnitudes.ravel()) / magnitudes.size
        else:
            value = 1.0 - float(magnitudes.max())

    return min(max(value, 0.0), 1.0)


def distance_between(
    r: CorrelationMatrix,
    left: Sequence[int],
    right: Sequence[int],
    kind: SplitDistanceKind,
) -> float:
    """split_distance for two index sets of r. Identical sets are at distance 0."""
    if sorted(left) == sorted(right):
        return 0.0
    return split_distance(ClusterPair.from_correlation(r, left, right), kind)


def reliability_height(r_i: CorrelationMatrix) -> float:
    """1 - lambda_1(R_i) / p_i; zero for a singleton."""
    values = r_i.values if isinstance(r_i, CorrelationMatrix) else np.atleast_2d(r_i)
    p_i = values.shape[0]
    if p_i == 1:
        return 0.0
    height = 1.0 - spectral_norm(r_i) / p_i
    return max(height, 0.0)
