"""
Baselines

DIANA divisive analysis on 1 - |r| distances between variables, and an
exhaustive-search hierarchy that takes the best of all bipartitions at every
node (exponential, tiny p only).
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Tuple, Union

import numpy as np

from ..exceptions import TooLargeError
from ..models.matrices import CorrelationMatrix
from ..models.tree import (
    Cluster,
    HeightMode,
    SourceKind,
    SplitRecord,
    SplitSource,
    SplitTree,
    order_best_first,
)
from .config import BRUTE_FORCE_MAX_P
from .dissimilarity import ClusterPair, SplitDistanceKind, split_distance

logger = logging.getLogger(__name__)

DISTANCE_TOL = 1e-12


@dataclass
class VariableDistanceMatrix:
    """d_ij = 1 - |r_ij| between variables."""
    values: np.ndarray
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"Distance matrix must be square, got shape {v.shape}")
        if np.max(np.abs(v - v.T), initial=0.0) > DISTANCE_TOL:
            raise ValueError("Distance matrix is not symmetric")
        if np.max(np.abs(np.diag(v)), initial=0.0) > DISTANCE_TOL:
            raise ValueError("Distance matrix diagonal is not zero")
        if v.size and (v.min() < -DISTANCE_TOL or v.max() > 1.0 + DISTANCE_TOL):
            raise ValueError("Distances must lie in [0, 1]")
        if not self.labels:
            self.labels = [f"X{j + 1}" for j in range(v.shape[0])]

    @property
    def p(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_correlation(cls, r: CorrelationMatrix) -> 'VariableDistanceMatrix':
        d = 1.0 - np.abs(r.values)
        d = (d + d.T) / 2.0
        np.fill_diagonal(d, 0.0)
        return cls(np.clip(d, 0.0, 1.0), list(r.column_labels))


def _diameter(d: np.ndarray, members: List[int]) -> float:
    if len(members) < 2:
        return 0.0
    return float(d[np.ix_(members, members)].max())


def _splinter(d: np.ndarray, members: List[int]) -> Tuple[List[int], List[int]]:
    """Split one cluster into (splinter group, remainder)."""
    block = d[np.ix_(members, members)]
    average = block.sum(axis=1) / (len(members) - 1)
    seed = int(np.argmax(average))  # first maximum -> smallest index
    splinter = [members[seed]]
    remainder = [m for m in members if m != members[seed]]

    while len(remainder) > 1:
        best_gain, best_pos = 0.0, None
        for pos, obj in enumerate(remainder):
            others = [m for m in remainder if m != obj]
            to_remainder = d[obj, others].mean()
            to_splinter = d[obj, splinter].mean()
            gain = to_remainder - to_splinter
            if gain > best_gain:
                best_gain, best_pos = gain, pos
        if best_pos is None:
            break
        splinter.append(remainder.pop(best_pos))
    return sorted(splinter), remainder


def diana(d: VariableDistanceMatrix) -> SplitTree:
    """
    Divisive analysis clustering.

    The cluster with the largest diameter is split next (ties -> the cluster
    holding the smallest index). Its splinter group starts from the object with
    the largest average dissimilarity and absorbs, one at a time, the object
    whose average dissimilarity to the remainder exceeds that to the splinter
    group by the most, until no object gains strictly. Heights are diameters.
    """
    values = d.values
    p = d.p
    if p < 2:
        raise ValueError(f"Need at least 2 variables to cluster, got {p}")

    active = [list(range(p))]
    records: List[SplitRecord] = []
    source = SplitSource(SourceKind.DIANA)

    while True:
        splittable = [c for c in active if len(c) > 1]
        if not splittable:
            break
        members = max(splittable, key=lambda c: (_diameter(values, c), -c[0]))
        diameter = _diameter(values, members)
        splinter, remainder = _splinter(values, members)
        logger.debug("DIANA split of %d variables at diameter %.6f: %d|%d",
                     len(members), diameter, len(splinter), len(remainder))

        records.append(SplitRecord(
            parent=Cluster.of(members),
            left=Cluster.of(splinter),
            right=Cluster.of(remainder),
            distance=diameter,
            source=source,
            height=diameter,
        ))
        active.remove(members)
        active.extend([splinter, remainder])

    tree = SplitTree(records, list(d.labels), HeightMode.DIAMETER)
    tree.diagnostics = {'monotone': tree.is_monotone()}
    return tree


def diana_from_correlation(r: CorrelationMatrix) -> SplitTree:
    """DIANA on 1 - |r|."""
    return diana(VariableDistanceMatrix.from_correlation(r))


def _all_bipartitions(members: Tuple[int, ...]):
    """Every unordered bipartition exactly once (side with the smallest member first)."""
    anchor = members[0]
    for size in range(1, len(members)):
        for side in combinations(members, size):
            if anchor in side:
                rest = tuple(m for m in members if m not in side)
                yield side, rest


def brute_force_hierarchy(
    r: CorrelationMatrix,
    kind: Union[SplitDistanceKind, str] = SplitDistanceKind.SINGLE,
    max_p: Optional[int] = None,
) -> SplitTree:
    """
    Hierarchy taking, at every node, the argmax over all 2^(p_i-1) - 1 bipartitions.

    Ties go to the split with the larger smaller side, then to the
    lexicographically smallest side holding the smallest index.

    Raises:
        TooLargeError: if p exceeds the size cap (14 by default)
    """
    kind = SplitDistanceKind.parse(kind)
    cap = BRUTE_FORCE_MAX_P if max_p is None else max_p
    p = r.p
    if p > cap:
        raise TooLargeError(f"Brute-force hierarchy limited to {cap} variables, got {p}")
    if p < 2:
        raise ValueError(f"Need at least 2 variables to cluster, got {p}")

    source = SplitSource(SourceKind.EXHAUSTIVE)
    records: List[SplitRecord] = []
    queue = deque([tuple(range(p))])
    while queue:
        members = queue.popleft()
        best = None
        for left, right in _all_bipartitions(members):
            value = split_distance(ClusterPair.from_correlation(r, left, right), kind)
            key = (value, min(len(left), len(right)))
            if best is None or key > best[0] or (key == best[0] and left < best[1]):
                best = (key, left, right)
        (value, _), left, right = best
        records.append(SplitRecord(
            parent=Cluster.of(members),
            left=Cluster.of(left),
            right=Cluster.of(right),
            distance=value,
            source=source,
            height=value,
        ))
        queue.extend(side for side in (left, right) if len(side) > 1)

    tree = SplitTree(order_best_first(records, p), list(r.column_labels), HeightMode.SPLIT_DISTANCE)
    tree.diagnostics = {'monotone': tree.is_monotone()}
    return tree
