"""Simulation and benchmark records."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..exceptions import InvalidDesignError
from .tree import Partition


class Design(Enum):
    """Simulation designs: deep caterpillar nesting (A) or many flat 3-blocks (B)."""
    A = "a"
    B = "b"


# Benchmark CSV column order
BENCH_COLUMNS = ['design', 'p', 'n', 'replication', 'method', 'distance_kind', 'cut_k', 'ari', 'seconds']


@dataclass
class DesignSpec:
    """Parameters of one simulation study. n=None feeds the population matrix directly."""
    design: Design
    p: int
    n: Optional[int] = None
    seed: int = 0
    replications: int = 1

    def validate(self) -> None:
        if self.design == Design.A and (self.p <= 0 or self.p % 100 != 0):
            raise InvalidDesignError(f"Design a needs p divisible by 100, got {self.p}")
        if self.design == Design.B and (self.p <= 0 or self.p % 3 != 0):
            raise InvalidDesignError(f"Design b needs p divisible by 3, got {self.p}")
        if self.n is not None and self.n < 2:
            raise InvalidDesignError(f"Need n >= 2 observations, got {self.n}")
        if self.replications < 1:
            raise InvalidDesignError(f"Need at least one replication, got {self.replications}")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidDesignError(f"Seed must be an unsigned 64-bit integer, got {self.seed}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'design': self.design.value,
            'p': self.p,
            'n': self.n,
            'seed': self.seed,
            'replications': self.replications,
        }


@dataclass
class GroundTruth:
    """Known partitions keyed by cluster count."""
    partitions: Dict[int, Partition]

    @property
    def counts(self) -> List[int]:
        return sorted(self.partitions)

    def __getitem__(self, k: int) -> Partition:
        return self.partitions[k]


@dataclass
class BenchRow:
    """One ARI measurement: method x kind x cut x replication."""
    design: str
    p: int
    n: Optional[int]
    replication: int
    method: str
    distance_kind: str
    cut_k: int
    ari: float
    seconds: float

    def to_dict(self) -> Dict[str, Any]:
        return {col: getattr(self, col) for col in BENCH_COLUMNS}


@dataclass
class BenchFailure:
    """A method that raised during one replication."""
    replication: int
    method: str
    distance_kind: str
    error: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            'replication': self.replication,
            'method': self.method,
            'distance_kind': self.distance_kind,
            'error': self.error,
        }


@dataclass
class BenchResult:
    """Per-replication ARI rows plus aggregates."""
    spec: DesignSpec
    rows: List[BenchRow] = field(default_factory=list)
    failures: List[BenchFailure] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_dict() for r in self.rows], columns=BENCH_COLUMNS)

    @property
    def failed_replications(self) -> List[int]:
        return sorted({f.replication for f in self.failures})

    @property
    def all_failed(self) -> bool:
        """True if no replication produced a single row."""
        return not self.rows and self.spec.replications > 0

    def summary(self) -> pd.DataFrame:
        """Mean/sd of ARI and mean seconds per (method, kind, cut)."""
        frame = self.to_frame()
        if frame.empty:
            return pd.DataFrame(columns=['method', 'distance_kind', 'cut_k', 'replications',
                                         'ari_mean', 'ari_sd', 'seconds_mean'])
        grouped = frame.groupby(['method', 'distance_kind', 'cut_k'], sort=True)
        summary = grouped.agg(
            replications=('ari', 'size'),
            ari_mean=('ari', 'mean'),
            ari_sd=('ari', 'std'),
            seconds_mean=('seconds', 'mean'),
        ).reset_index()
        summary['ari_sd'] = summary['ari_sd'].fillna(0.0)
        return summary

    def mean_ari(self, method: str, distance_kind: str, cut_k: int) -> float:
        frame = self.to_frame()
        mask = (
            (frame['method'] == method)
            & (frame['distance_kind'] == distance_kind)
            & (frame['cut_k'] == cut_k)
        )
        values = frame.loc[mask, 'ari']
        return float(values.mean()) if len(values) else float('nan')

    def to_dict(self, include_timings: bool = True) -> Dict[str, Any]:
        summary = self.summary()
        if not include_timings:
            summary = summary.drop(columns=['seconds_mean'])
        cells = []
        for record in summary.to_dict(orient='records'):
            cells.append({
                key: (value.item() if isinstance(value, np.generic) else value)
                for key, value in record.items()
            })
        return {
            'spec': self.spec.to_dict(),
            'metadata': dict(self.metadata),
            'summary': cells,
            'failures': [f.to_dict() for f in self.failures],
        }
