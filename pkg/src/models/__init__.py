"""Data models - Dataclass definitions for matrices, trees and benchmark records."""

from .matrices import RawMatrix, StandardizedMatrix, CorrelationMatrix
from .tree import (
    Cluster,
    Partition,
    SplitSource,
    SourceKind,
    SplitRecord,
    SplitTree,
    HeightMode,
    UltraDistanceMatrix,
    order_best_first,
)
from .bench import Design, DesignSpec, GroundTruth, BenchRow, BenchFailure, BenchResult, BENCH_COLUMNS

__all__ = [
    'RawMatrix',
    'StandardizedMatrix',
    'CorrelationMatrix',
    'Cluster',
    'Partition',
    'SplitSource',
    'SourceKind',
    'SplitRecord',
    'SplitTree',
    'HeightMode',
    'UltraDistanceMatrix',
    'order_best_first',
    'Design',
    'DesignSpec',
    'GroundTruth',
    'BenchRow',
    'BenchFailure',
    'BenchResult',
    'BENCH_COLUMNS',
]
