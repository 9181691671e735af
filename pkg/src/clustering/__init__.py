"""Clustering - Sparse loadings, split distances, the HC-SVD engine and baselines."""

from .sparse_loadings import (
    SparseLoading,
    DeflationState,
    LoadingSequence,
    sparse_rank1,
    sparse_loading_sequence,
    sparse_loading_grid,
)
from .dissimilarity import (
    SplitDistanceKind,
    ClusterPair,
    split_distance,
    distance_between,
    reliability_height,
)
from .divisive import (
    HCSVD,
    LoadingPolicy,
    CandidateCache,
    CandidateSplit,
    SplitStats,
    hcsvd,
    loading_count,
    candidate_splits,
    exhaustive_splits,
    split_cluster,
    check_ultrametric,
    count_ultrametric_violations,
    cut_tree,
)
from .baselines import (
    VariableDistanceMatrix,
    diana,
    diana_from_correlation,
    brute_force_hierarchy,
)

__all__ = [
    'SparseLoading',
    'DeflationState',
    'LoadingSequence',
    'sparse_rank1',
    'sparse_loading_sequence',
    'sparse_loading_grid',
    'SplitDistanceKind',
    'ClusterPair',
    'split_distance',
    'distance_between',
    'reliability_height',
    'HCSVD',
    'LoadingPolicy',
    'CandidateCache',
    'CandidateSplit',
    'SplitStats',
    'hcsvd',
    'loading_count',
    'candidate_splits',
    'exhaustive_splits',
    'split_cluster',
    'check_ultrametric',
    'count_ultrametric_violations',
    'cut_tree',
    'VariableDistanceMatrix',
    'diana',
    'diana_from_correlation',
    'brute_force_hierarchy',
]
