"""
HC-SVD Divisive Engine

Top-down clustering of variables. Each cluster is split by the bipartition
with the largest between-cluster distance among the candidates proposed by the
supports of its sparse loadings (or among all bipartitions for small
clusters). Every split fills the corresponding entries of the distance matrix
M, and the splits together form the dendrogram.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from ..exceptions import HCSVDError, NoValidCandidateError, ThresholdExceededError
from ..helpers.matrixkit import correlation, standardize, sym_eigen
from ..models.matrices import CorrelationMatrix, RawMatrix, StandardizedMatrix
from ..models.tree import (
    Cluster,
    HeightMode,
    Partition,
    SourceKind,
    SplitRecord,
    SplitSource,
    SplitTree,
    UltraDistanceMatrix,
    order_best_first,
)
from .config import (
    BRUTE_FORCE_MAX_P,
    DEFAULT_DISTANCE,
    DEFAULT_EXHAUSTIVE_THRESHOLD,
    DEFAULT_HEIGHTS,
    DEFAULT_LOADINGS,
    ULTRAMETRIC_TOL,
)
from .dissimilarity import SplitDistanceKind, distance_between, reliability_height
from .sparse_loadings import InitMethod, LoadingSequence, sparse_loading_grid

logger = logging.getLogger(__name__)

QueueOrder = Literal['fifo', 'lifo']
KAISER_TOL = 1e-10


@dataclass(frozen=True)
class LoadingPolicy:
    """How many sparse loadings k_i to compute per degree s."""
    kind: Literal['kaiser', 'fixed', 'all'] = 'kaiser'
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind == 'fixed' and (self.k is None or self.k < 1):
            raise ValueError(f"Fixed loading count must be a positive integer, got {self.k}")

    @classmethod
    def parse(cls, value: Union['LoadingPolicy', str, int]) -> 'LoadingPolicy':
        """Accept 'kaiser', 'all' or an integer (as int or string)."""
        if isinstance(value, cls):
            return value
        if isinstance(value, (int, np.integer)):
            return cls('fixed', int(value))
        text = str(value).strip().lower()
        if text in ('kaiser', 'all'):
            return cls(text)
        try:
            return cls('fixed', int(text))
        except ValueError:
            raise ValueError(
                f"Unknown loading policy {value!r} (expected kaiser, all or an integer)"
            ) from None

    def __str__(self) -> str:
        return str(self.k) if self.kind == 'fixed' else self.kind


@dataclass(frozen=True)
class CandidateSplit:
    """Bipartition of a cluster, `left` holding its smallest member."""
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    source: SplitSource


@dataclass
class SplitStats:
    """Instrumentation for one executed split."""
    cluster_size: int
    loading_count: int
    candidates: int
    exhaustive: bool
    skipped_degrees: List[int] = field(default_factory=list)

    @property
    def candidate_bound(self) -> int:
        """k_i (p_i - 1): the most candidates the sparse-loading path may evaluate."""
        return self.loading_count * (self.cluster_size - 1)

    def to_dict(self) -> Dict:
        return {
            'cluster_size': self.cluster_size,
            'loading_count': self.loading_count,
            'candidates': self.candidates,
            'exhaustive': self.exhaustive,
            'skipped_degrees': list(self.skipped_degrees),
        }


@dataclass
class SplitDecision:
    record: SplitRecord
    stats: SplitStats


# ---------------------------------------------------------------------------
# Loading count
# ---------------------------------------------------------------------------

def loading_count(r_i: CorrelationMatrix, policy: Union[LoadingPolicy, str, int] = DEFAULT_LOADINGS) -> int:
    """
    Number of sparse loadings k_i computed per degree of sparsity.

    kaiser -> number of eigenvalues >= 1 (at least one), fixed(k) -> min(k, p_i),
    all -> p_i.
    """
    policy = LoadingPolicy.parse(policy)
    p_i = r_i.p if isinstance(r_i, CorrelationMatrix) else np.asarray(r_i).shape[0]
    if policy.kind == 'all':
        return p_i
    if policy.kind == 'fixed':
        return min(policy.k, p_i)
    eigenvalues, _ = sym_eigen(r_i)
    return max(int(np.sum(eigenvalues >= 1.0 - KAISER_TOL)), 1)


# ---------------------------------------------------------------------------
# Candidates
# ---------------------------------------------------------------------------

def _canonical(side: Sequence[int], members: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    chosen = set(side)
    a = tuple(sorted(chosen))
    b = tuple(m for m in sorted(members) if m not in chosen)
    return (a, b) if a[0] < b[0] else (b, a)


class CandidateCache:
    """
    Sparse-loading candidates per cluster for one input matrix.

    Candidates do not depend on the split distance, so engines clustering the
    same input with different distances can share one cache.
    """

    def __init__(self):
        self._entries: Dict[Tuple, Tuple[List[CandidateSplit], List[int]]] = {}
        self.hits = 0

    def lookup(self, key: Tuple) -> Optional[Tuple[List[CandidateSplit], List[int]]]:
        entry = self._entries.get(key)
        if entry is not None:
            self.hits += 1
        return entry

    def store(self, key: Tuple, candidates: List[CandidateSplit], skipped: List[int]) -> None:
        self._entries[key] = (list(candidates), list(skipped))

    def __len__(self) -> int:
        return len(self._entries)


def candidate_splits(
    x_i: np.ndarray,
    k_i: int,
    members: Optional[Sequence[int]] = None,
    threads: int = 1,
    init: InitMethod = 'eigh',
    skipped: Optional[List[int]] = None,
) -> List[CandidateSplit]:
    """
    Bipartitions proposed by sparse loadings of degree s = 1..p_i-1.

    Each loading's support and its complement form one candidate. Duplicates
    are dropped, keeping the first (smallest s, then rank) source.

    Args:
        x_i: Matrix of the cluster (n x p_i data columns, or the p_i x p_i correlation block)
        k_i: Loadings per degree
        members: Variable indices of the cluster's columns (default 0..p_i-1)
        threads: joblib workers, each solving a contiguous range of degrees
        init: Dense initialisation of the loading solver
        skipped: Receives the degrees whose loadings failed

    Returns:
        At most k_i (p_i - 1) unique candidates
    """
    x_i = np.asarray(x_i, dtype=float)
    p_i = x_i.shape[1]
    if p_i < 2:
        raise ValueError("A cluster needs at least two variables to be split")
    members = list(range(p_i)) if members is None else list(members)

    degrees = np.arange(1, p_i)
    chunks = [c for c in np.array_split(degrees, max(1, min(threads, len(degrees)))) if len(c)]
    batches = Parallel(n_jobs=threads, prefer='threads')(
        delayed(sparse_loading_grid)(x_i, k_i, chunk, init) for chunk in chunks
    )
    results = [outcome for batch in batches for outcome in batch]

    seen: Dict[Tuple[int, ...], CandidateSplit] = {}
    for s, result in zip(degrees.tolist(), results):
        if isinstance(result, HCSVDError):
            logger.warning("Skipping degree s=%d for a cluster of %d variables: %s", s, p_i, result)
            if skipped is not None:
                skipped.append(s)
            continue
        sequence: LoadingSequence = result
        for rank, loading in enumerate(sequence, start=1):
            if not 0 < len(loading.support) < p_i:
                logger.warning("Discarding loading (s=%d, rank=%d) with trivial support", s, rank)
                continue
            left, right = _canonical([members[j] for j in loading.support], members)
            if left not in seen:
                seen[left] = CandidateSplit(
                    left, right, SplitSource(SourceKind.SPARSE_LOADING, degree=s, rank=rank)
                )
    return list(seen.values())


def exhaustive_splits(
    p_i: int,
    threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD,
    members: Optional[Sequence[int]] = None,
) -> List[CandidateSplit]:
    """
    All 2^(p_i-1) - 1 bipartitions, each listed once with the smallest member on the left.

    Raises:
        ThresholdExceededError: if p_i > threshold
    """
    if p_i > threshold:
        raise ThresholdExceededError(
            f"Exhaustive enumeration limited to {threshold} variables, got {p_i}"
        )
    members = list(range(p_i)) if members is None else sorted(members)
    anchor, rest = members[0], members[1:]
    source = SplitSource(SourceKind.EXHAUSTIVE)

    splits = []
    full = (1 << len(rest)) - 1
    for mask in range(full):  # mask == full would leave the right side empty
        left = (anchor,) + tuple(m for bit, m in enumerate(rest) if mask >> bit & 1)
        right = tuple(m for bit, m in enumerate(rest) if not mask >> bit & 1)
        splits.append(CandidateSplit(left, right, source))
    return splits


# ---------------------------------------------------------------------------
# Choosing a split
# ---------------------------------------------------------------------------

def _best(scored: List[Tuple[float, CandidateSplit]]) -> Tuple[float, CandidateSplit]:
    """Largest distance; ties -> larger smaller side, then lexicographically smallest left."""
    return min(
        scored,
        key=lambda item: (-item[0], -min(len(item[1].left), len(item[1].right)), item[1].left),
    )


def decide_split(
    x_i: np.ndarray,
    r: CorrelationMatrix,
    members: Sequence[int],
    kind: Union[SplitDistanceKind, str] = DEFAULT_DISTANCE,
    policy: Union[LoadingPolicy, str, int] = DEFAULT_LOADINGS,
    exhaustive_threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD,
    threads: int = 1,
    init: InitMethod = 'eigh',
    cache: Optional[CandidateCache] = None,
) -> SplitDecision:
    """
    Split one cluster and report what it took.

    Args:
        x_i: Matrix of the cluster's columns (data or correlation rows)
        r: Correlation matrix over all variables (distances use its blocks)
        members: Variable indices of the cluster, aligned with x_i's columns
        kind: Between-cluster distance
        policy: Loading count policy
        exhaustive_threshold: Clusters up to this size are split by full enumeration
        threads: joblib workers for candidate generation
        init: Dense initialisation of the loading solver
        cache: Candidates already generated for this input, keyed by cluster

    Returns:
        SplitDecision with the chosen record (height not yet assigned)

    Raises:
        NoValidCandidateError: if no candidate survived and enumeration is not possible
    """
    kind = SplitDistanceKind.parse(kind)
    members = list(members)
    p_i = len(members)
    r_i = r.submatrix(members)
    k_i = loading_count(r_i, policy)
    skipped: List[int] = []

    exhaustive = p_i <= exhaustive_threshold
    if exhaustive:
        candidates = exhaustive_splits(p_i, exhaustive_threshold, members)
    else:
        key = (tuple(members), k_i, init)
        cached = cache.lookup(key) if cache is not None else None
        if cached is not None:
            candidates, skipped = cached
        else:
            candidates = candidate_splits(x_i, k_i, members, threads=threads, init=init, skipped=skipped)
            if cache is not None:
                cache.store(key, candidates, skipped)
        if not candidates:
            if p_i > BRUTE_FORCE_MAX_P:
                raise NoValidCandidateError(
                    f"No sparse-loading candidate for a cluster of {p_i} variables"
                )
            logger.warning("No sparse-loading candidate for %d variables, enumerating all splits", p_i)
            exhaustive = True
            candidates = exhaustive_splits(p_i, BRUTE_FORCE_MAX_P, members)

    scored = [(distance_between(r, c.left, c.right, kind), c) for c in candidates]
    distance, chosen = _best(scored)

    logger.debug("Split cluster of %d (k=%d): %d candidates, distance %.6f, sides %d|%d",
                 p_i, k_i, len(candidates), distance, len(chosen.left), len(chosen.right))

    record = SplitRecord(
        parent=Cluster.of(members),
        left=Cluster.of(chosen.left),
        right=Cluster.of(chosen.right),
        distance=distance,
        source=chosen.source,
    )
    stats = SplitStats(p_i, k_i, len(candidates), exhaustive, skipped)
    return SplitDecision(record, stats)


def split_cluster(
    x_i: np.ndarray,
    r_i: CorrelationMatrix,
    kind: Union[SplitDistanceKind, str] = DEFAULT_DISTANCE,
    policy: Union[LoadingPolicy, str, int] = DEFAULT_LOADINGS,
    exhaustive_threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD,
    threads: int = 1,
    init: InitMethod = 'eigh',
) -> SplitRecord:
    """Best bipartition of a single cluster given its own matrix and correlation block."""
    r_i = r_i if isinstance(r_i, CorrelationMatrix) else CorrelationMatrix(r_i)
    return decide_split(x_i, r_i, range(r_i.p), kind, policy, exhaustive_threshold, threads, init).record


# ---------------------------------------------------------------------------
# Ultrametric checks and cuts
# ---------------------------------------------------------------------------

def _matrix_values(m) -> np.ndarray:
    return m.values if isinstance(m, UltraDistanceMatrix) else np.asarray(m, dtype=float)


def _violation_masks(m: Union[UltraDistanceMatrix, np.ndarray], tol: float) -> Iterator[Tuple[int, np.ndarray]]:
    """For each middle index l, the (i, j) pairs with i < j and m_ij > max(m_il, m_lj) + tol."""
    values = _matrix_values(m)
    p = values.shape[0]
    upper = np.triu(np.ones((p, p), dtype=bool), k=1)
    for l in range(p):
        bound = np.maximum(values[:, l][:, None], values[l, :][None, :]) + tol
        mask = (values > bound) & upper
        mask[l, :] = False
        mask[:, l] = False
        yield l, mask


def check_ultrametric(m: Union[UltraDistanceMatrix, np.ndarray], tol: float = ULTRAMETRIC_TOL) -> List[Tuple[int, int, int]]:
    """
    Triples (i, l, j), i < j, with m_ij > max(m_il, m_lj) + tol.

    An empty list means m is ultrametric within tol.
    """
    violations = []
    for l, mask in _violation_masks(m, tol):
        violations.extend((int(i), l, int(j)) for i, j in zip(*np.nonzero(mask)))
    return sorted(violations)


def count_ultrametric_violations(m: Union[UltraDistanceMatrix, np.ndarray], tol: float = ULTRAMETRIC_TOL) -> int:
    """Number of triples check_ultrametric would return, without building them."""
    return sum(int(mask.sum()) for _, mask in _violation_masks(m, tol))


def cut_tree(tree: SplitTree, k: int) -> Partition:
    """Partition after the first k-1 splits of the tree."""
    p = tree.p
    if not 1 <= k <= p:
        raise ValueError(f"Cut must lie in [1, {p}], got {k}")
    clusters = {Cluster.of(range(p))}
    for record in tree.records[:k - 1]:
        clusters.remove(record.parent)
        clusters.update({record.left, record.right})
    return Partition(list(clusters))


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------

class HCSVD:
    """
    Divisive clustering engine.

    Splits are executed in queue order (FIFO by default). The returned tree
    lists them best-first by height so cut_tree(k) is a dendrogram cut.
    Engines fitting the same input may share a CandidateCache.

    Usage:
        engine = HCSVD(kind='single')
        tree, m = engine.fit(standardized)
    """

    def __init__(
        self,
        kind: Union[SplitDistanceKind, str] = DEFAULT_DISTANCE,
        policy: Union[LoadingPolicy, str, int] = DEFAULT_LOADINGS,
        height_mode: Union[HeightMode, str] = DEFAULT_HEIGHTS,
        exhaustive_threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD,
        queue_order: QueueOrder = 'fifo',
        threads: int = 1,
        init: InitMethod = 'eigh',
        cache: Optional[CandidateCache] = None,
    ):
        self.kind = SplitDistanceKind.parse(kind)
        self.policy = LoadingPolicy.parse(policy)
        self.height_mode = HeightMode(height_mode) if not isinstance(height_mode, HeightMode) else height_mode
        if self.height_mode == HeightMode.DIAMETER:
            raise ValueError("Diameter heights belong to DIANA; use 'split' or 'reliability'")
        if queue_order not in ('fifo', 'lifo'):
            raise ValueError(f"Unknown queue order {queue_order!r}")
        if exhaustive_threshold < 1:
            raise ValueError(f"Exhaustive threshold must be positive, got {exhaustive_threshold}")
        self.exhaustive_threshold = exhaustive_threshold
        self.queue_order = queue_order
        self.threads = threads
        self.init = init
        self.cache = cache
        self.split_stats: List[SplitStats] = []

    @staticmethod
    def _prepare(x) -> Tuple[np.ndarray, CorrelationMatrix]:
        """Matrix the loadings are computed on, and the correlation matrix."""
        if isinstance(x, CorrelationMatrix):
            return x.values, x
        if isinstance(x, StandardizedMatrix):
            return x.values, correlation(x)
        if isinstance(x, RawMatrix):
            standardized = standardize(x)
            return standardized.values, correlation(standardized)
        raise TypeError(f"Expected RawMatrix, StandardizedMatrix or CorrelationMatrix, got {type(x).__name__}")

    def fit(self, x: Union[RawMatrix, StandardizedMatrix, CorrelationMatrix]) -> Tuple[SplitTree, UltraDistanceMatrix]:
        """
        Cluster the variables of x.

        Args:
            x: Data (standardized or raw) or a correlation matrix; a correlation
               matrix is used directly as the input of the loading solver

        Returns:
            (SplitTree, UltraDistanceMatrix)
        """
        matrix, r = self._prepare(x)
        correlation_input = isinstance(x, CorrelationMatrix)
        p = r.p
        if p < 2:
            raise ValueError(f"Need at least 2 variables to cluster, got {p}")

        logger.debug("HC-SVD on %d variables (kind=%s, policy=%s, heights=%s, input=%s)",
                     p, self.kind.value, self.policy, self.height_mode.value,
                     'correlation' if correlation_input else 'data')

        self.split_stats = []
        m = np.zeros((p, p))
        records: List[SplitRecord] = []
        queue = deque([tuple(range(p))])

        while queue:
            members = list(queue.popleft() if self.queue_order == 'fifo' else queue.pop())
            if correlation_input:
                x_i = matrix[np.ix_(members, members)]
            else:
                x_i = matrix[:, members]

            decision = decide_split(
                x_i, r, members,
                kind=self.kind,
                policy=self.policy,
                exhaustive_threshold=self.exhaustive_threshold,
                threads=self.threads,
                init=self.init,
                cache=self.cache,
            )
            record = decision.record
            if self.height_mode == HeightMode.RELIABILITY:
                record.height = reliability_height(r.submatrix(members))
            else:
                record.height = record.distance

            left, right = list(record.left.members), list(record.right.members)
            m[np.ix_(left, right)] = record.distance
            m[np.ix_(right, left)] = record.distance

            records.append(record)
            self.split_stats.append(decision.stats)
            for child in (record.left, record.right):
                if child.size > 1:
                    queue.append(child.members)

        tree = SplitTree(order_best_first(records, p), list(r.column_labels), self.height_mode)
        distances = UltraDistanceMatrix(m, list(r.column_labels))
        tree.diagnostics = self._diagnostics(tree, distances)
        return tree, distances

    def _diagnostics(self, tree: SplitTree, distances: UltraDistanceMatrix) -> Dict:
        violations = count_ultrametric_violations(distances)
        height_violations = (
            violations if self.height_mode == HeightMode.SPLIT_DISTANCE
            else count_ultrametric_violations(tree.cophenetic_matrix())
        )
        monotone = tree.is_monotone()
        if violations:
            logger.warning("Distance matrix has %d ultrametric violations", violations)
        if not monotone:
            logger.warning("Dendrogram heights are not monotone")
        return {
            'ultrametric_violations': violations,
            'height_ultrametric_violations': height_violations,
            'monotone': monotone,
            'exhaustive_splits': sum(1 for s in self.split_stats if s.exhaustive),
            'sparse_splits': sum(1 for s in self.split_stats if not s.exhaustive),
        }


def hcsvd(
    x: Union[RawMatrix, StandardizedMatrix, CorrelationMatrix],
    kind: Union[SplitDistanceKind, str] = DEFAULT_DISTANCE,
    policy: Union[LoadingPolicy, str, int] = DEFAULT_LOADINGS,
    height_mode: Union[HeightMode, str] = DEFAULT_HEIGHTS,
    **kwargs,
) -> Tuple[SplitTree, UltraDistanceMatrix]:
    """Run HC-SVD with a fresh engine."""
    return HCSVD(kind=kind, policy=policy, height_mode=height_mode, **kwargs).fit(x)
