"""
Cluster Tree Models

Clusters, partitions, split records and the split tree produced by the
divisive engine and the baselines.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np


class HeightMode(Enum):
    """How internal node heights are assigned."""
    SPLIT_DISTANCE = "split"
    RELIABILITY = "reliability"
    DIAMETER = "diameter"  # DIANA


class SourceKind(Enum):
    """Where a split came from."""
    SPARSE_LOADING = "sparse_loading"
    EXHAUSTIVE = "exhaustive"
    DIANA = "diana"


@dataclass(frozen=True)
class Cluster:
    """Ordered, duplicate-free set of 0-based variable indices."""
    members: Tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(int(i) for i in self.members))
        if not members:
            raise ValueError("A cluster cannot be empty")
        if len(set(members)) != len(members):
            raise ValueError(f"Duplicate indices in cluster {members}")
        object.__setattr__(self, 'members', members)

    @classmethod
    def of(cls, indices: Iterable[int]) -> 'Cluster':
        return cls(tuple(indices))

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item) -> bool:
        return item in self.members


@dataclass
class Partition:
    """Disjoint clusters covering {0, ..., p-1}, kept in canonical order."""
    clusters: List[Cluster]

    def __post_init__(self):
        self.clusters = sorted(self.clusters, key=lambda c: c.members[0])

    @property
    def items(self) -> List[int]:
        return sorted(i for c in self.clusters for i in c.members)

    def __len__(self) -> int:
        return len(self.clusters)

    def validate(self, p: Optional[int] = None) -> None:
        """Raise ValueError unless the clusters are disjoint and cover 0..p-1."""
        items = self.items
        if len(items) != len(set(items)):
            raise ValueError("Partition clusters overlap")
        expected = list(range(p if p is not None else len(items)))
        if items != expected:
            raise ValueError("Partition does not cover every variable exactly once")

    def labels(self) -> np.ndarray:
        """Cluster id per item (ids follow canonical cluster order)."""
        out = np.empty(len(self.items), dtype=int)
        for cid, cluster in enumerate(self.clusters):
            out[list(cluster.members)] = cid
        return out

    @classmethod
    def from_labels(cls, labels: Sequence) -> 'Partition':
        groups: Dict[Any, List[int]] = {}
        for idx, lab in enumerate(labels):
            groups.setdefault(lab, []).append(idx)
        return cls([Cluster.of(g) for g in groups.values()])

    def canonical(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(c.members for c in self.clusters)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.canonical() == other.canonical()


@dataclass(frozen=True)
class SplitSource:
    """Provenance of a split: sparse loading (degree s, rank), exhaustive search or DIANA."""
    kind: SourceKind
    degree: Optional[int] = None
    rank: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, 'degree': self.degree, 'rank': self.rank}


@dataclass
class SplitRecord:
    """One binary split of a parent cluster. `left` holds the smallest index."""
    parent: Cluster
    left: Cluster
    right: Cluster
    distance: float
    source: SplitSource
    height: float = 0.0

    def __post_init__(self):
        if self.right.members[0] < self.left.members[0]:
            self.left, self.right = self.right, self.left
        if set(self.left.members) & set(self.right.members):
            raise ValueError("Split sides overlap")
        if tuple(sorted(self.left.members + self.right.members)) != self.parent.members:
            raise ValueError("Split sides do not reconstruct the parent cluster")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'parent': list(self.parent.members),
            'left': list(self.left.members),
            'right': list(self.right.members),
            'distance': self.distance,
            'height': self.height,
            'source': self.source.to_dict(),
        }


@dataclass
class SplitTree:
    """
    Binary tree over p leaves given as p-1 split records, root first.

    The record order is the cut order: the first k-1 records produce the
    k-cluster partition.
    """
    records: List[SplitRecord]
    labels: List[str]
    height_mode: HeightMode = HeightMode.SPLIT_DISTANCE
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def p(self) -> int:
        return len(self.labels)

    @property
    def heights(self) -> List[float]:
        return [r.height for r in self.records]

    def validate(self) -> None:
        """Raise ValueError unless the records describe a full binary tree over p leaves."""
        p = self.p
        if len(self.records) != max(p - 1, 0):
            raise ValueError(f"Expected {p - 1} splits, got {len(self.records)}")
        active = {Cluster.of(range(p))} if p else set()
        for record in self.records:
            if record.parent not in active:
                raise ValueError(f"Split of cluster {record.parent.members} that is not active")
            active.remove(record.parent)
            active.update({record.left, record.right})
        if any(c.size != 1 for c in active):
            raise ValueError("Tree does not end in singletons")

    def is_monotone(self, tol: float = 1e-12) -> bool:
        """True if no child node sits above its parent."""
        height_of = {r.parent: r.height for r in self.records}
        for record in self.records:
            for child in (record.left, record.right):
                if child in height_of and height_of[child] > record.height + tol:
                    return False
        return True

    def cophenetic_matrix(self) -> np.ndarray:
        """Height of the node separating each pair of variables."""
        out = np.zeros((self.p, self.p))
        for record in self.records:
            left = list(record.left.members)
            right = list(record.right.members)
            out[np.ix_(left, right)] = record.height
            out[np.ix_(right, left)] = record.height
        return out

    def merges(self) -> List[Tuple[int, int, float, int]]:
        """
        Bottom-up merges (left_node, right_node, height, size).

        Leaves are -(i+1) for variable i; internal nodes are numbered 1..p-1
        in merge order.
        """
        node_of = {Cluster.of([i]): -(i + 1) for i in range(self.p)}
        out: List[Tuple[int, int, float, int]] = []
        for record in reversed(self.records):
            out.append((node_of[record.left], node_of[record.right], record.height, record.parent.size))
            node_of[record.parent] = len(out)
        return out

    def to_linkage(self) -> np.ndarray:
        """SciPy linkage matrix: leaves 0..p-1, merge i creates cluster p+i."""
        p = self.p

        def index(node: int) -> int:
            return -node - 1 if node < 0 else p + node - 1

        rows = [[index(a), index(b), h, size] for a, b, h, size in self.merges()]
        return np.array(rows, dtype=float).reshape(-1, 4)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'labels': list(self.labels),
            'height_mode': self.height_mode.value,
            'splits': [r.to_dict() for r in self.records],
            'diagnostics': dict(self.diagnostics),
        }


def order_best_first(records: List[SplitRecord], p: int) -> List[SplitRecord]:
    """
    Reorder splits so the frontier cluster with the largest height splits next.

    Ties keep the original (creation) order. Parents always precede children.

    Args:
        records: Splits in creation order
        p: Number of leaves

    Returns:
        The same records in cut order
    """
    by_parent = {r.parent: (pos, r) for pos, r in enumerate(records)}
    root = Cluster.of(range(p))
    frontier = [root] if root in by_parent else []
    ordered = []
    while frontier:
        best = max(frontier, key=lambda c: (by_parent[c][1].height, -by_parent[c][0]))
        frontier.remove(best)
        record = by_parent[best][1]
        ordered.append(record)
        frontier.extend(c for c in (record.left, record.right) if c in by_parent)
    return ordered


@dataclass
class UltraDistanceMatrix:
    """p x p between-variable distances assembled split by split."""
    values: np.ndarray
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    @property
    def p(self) -> int:
        return self.values.shape[0]
