"""
CSV Tables

Reading and writing the comma-separated files the CLI exchanges: data
matrices, correlation matrices, partitions (variable,cluster_id), distance
matrices and benchmark results. All numeric validation failures raise
InputFormatError naming the offending row and column.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..clustering.dissimilarity import reliability_height
from ..exceptions import InputFormatError, PartitionMismatchError
from ..models.bench import BenchResult, GroundTruth
from ..models.matrices import CorrelationMatrix, RawMatrix
from ..models.tree import Partition, UltraDistanceMatrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SYMMETRY_TOL = 1e-8
DIAGONAL_TOL = 1e-8
PSD_TOL = -1e-8
FLOAT_FORMAT = '%.17g'
PARTITION_COLUMNS = ['variable', 'cluster_id']


def _read_frame(path: PathLike, **kwargs) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, sep=',', encoding='utf-8', float_precision='round_trip', **kwargs)
    except FileNotFoundError:
        raise InputFormatError(f"File not found: {path}") from None
    except pd.errors.EmptyDataError:
        raise InputFormatError(f"File is empty: {path}") from None
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise InputFormatError(f"Cannot parse {path}: {e}") from None
    if frame.columns.duplicated().any():
        dupes = sorted(set(frame.columns[frame.columns.duplicated()]))
        raise InputFormatError(f"Duplicate column labels: {', '.join(map(str, dupes))}")
    return frame


def _numeric(frame: pd.DataFrame) -> np.ndarray:
    """Numeric values of a frame, or InputFormatError at the first bad cell (file row numbers)."""
    converted = frame.apply(pd.to_numeric, errors='coerce')
    bad = converted.isna().to_numpy() | ~np.isfinite(converted.to_numpy(dtype=float, na_value=np.nan))
    if bad.any():
        row, col = map(int, np.argwhere(bad)[0])
        raise InputFormatError(
            f"Non-numeric or missing value {frame.iat[row, col]!r}",
            row=row + 2,  # header is line 1
            column=str(frame.columns[col]),
        )
    return converted.to_numpy(dtype=float)


def read_data_csv(path: PathLike) -> RawMatrix:
    """
    Data matrix: first row = variable labels, one observation per row.

    Raises:
        InputFormatError: malformed file, non-numeric cell or fewer than 2 rows
    """
    frame = _read_frame(path)
    if frame.shape[1] < 1:
        raise InputFormatError(f"No columns in {path}")
    values = _numeric(frame)
    if values.shape[0] < 2:
        raise InputFormatError(f"Need at least 2 observations, got {values.shape[0]}")
    logger.debug("Read %d x %d data matrix from %s", values.shape[0], values.shape[1], path)
    return RawMatrix(values, [str(c) for c in frame.columns])


def read_correlation_csv(path: PathLike) -> CorrelationMatrix:
    """
    Correlation matrix: first row = labels, then p rows of p values.

    A leading column repeating the labels is accepted and dropped. The matrix
    must be symmetric within 1e-8 (it is then symmetrized by averaging), have a
    unit diagonal, entries in [-1, 1] and be positive semidefinite.

    Raises:
        InputFormatError: any of the above violated
    """
    frame = _read_frame(path)
    labels = [str(c) for c in frame.columns]
    if frame.shape[1] == frame.shape[0] + 1:
        first = [str(v) for v in frame.iloc[:, 0]]
        if first == labels[1:]:
            frame = frame.iloc[:, 1:]
            labels = labels[1:]
    if frame.shape[0] != frame.shape[1]:
        raise InputFormatError(
            f"Correlation matrix is not square: {frame.shape[0]} rows, {frame.shape[1]} columns"
        )

    values = _numeric(frame)
    asymmetry = np.abs(values - values.T)
    if asymmetry.size and asymmetry.max() > SYMMETRY_TOL:
        row, col = map(int, np.unravel_index(int(asymmetry.argmax()), asymmetry.shape))
        raise InputFormatError(
            f"Correlation matrix is not symmetric ({values[row, col]} vs {values[col, row]})",
            row=row + 2, column=labels[col],
        )
    values = (values + values.T) / 2.0

    off_diagonal = np.abs(np.diag(values) - 1.0)
    if off_diagonal.size and off_diagonal.max() > DIAGONAL_TOL:
        j = int(off_diagonal.argmax())
        raise InputFormatError(f"Diagonal entry {values[j, j]} is not 1", row=j + 2, column=labels[j])
    if np.abs(values).max(initial=0.0) > 1.0 + DIAGONAL_TOL:
        row, col = map(int, np.unravel_index(int(np.abs(values).argmax()), values.shape))
        raise InputFormatError(f"Correlation {values[row, col]} outside [-1, 1]", row=row + 2, column=labels[col])

    np.fill_diagonal(values, 1.0)
    np.clip(values, -1.0, 1.0, out=values)
    smallest = float(np.linalg.eigvalsh(values)[0]) if values.size else 0.0
    if smallest < PSD_TOL:
        raise InputFormatError(f"Correlation matrix is not positive semidefinite (eigenvalue {smallest:.3g})")

    logger.debug("Read %d x %d correlation matrix from %s", values.shape[0], values.shape[1], path)
    return CorrelationMatrix(values, labels)


def write_data_csv(raw: RawMatrix, path: PathLike) -> None:
    raw.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT)


def write_correlation_csv(r: CorrelationMatrix, path: PathLike) -> None:
    """Header row of labels followed by the p x p values (no index column)."""
    pd.DataFrame(r.values, columns=r.column_labels).to_csv(path, index=False, float_format=FLOAT_FORMAT)


def write_distance_csv(m: UltraDistanceMatrix, path: PathLike) -> None:
    pd.DataFrame(m.values, columns=m.labels).to_csv(path, index=False, float_format=FLOAT_FORMAT)


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------

def partition_frame(partition: Partition, labels: Sequence[str]) -> pd.DataFrame:
    """variable,cluster_id rows in variable order; ids are 1-based in canonical cluster order."""
    ids = partition.labels() + 1
    return pd.DataFrame({'variable': list(labels), 'cluster_id': ids}, columns=PARTITION_COLUMNS)


def write_partition(partition: Partition, labels: Sequence[str], path: PathLike) -> None:
    partition_frame(partition, labels).to_csv(path, index=False)


def read_partition(path: PathLike) -> Tuple[List[str], List[str]]:
    """
    Partition file as (variables, cluster ids), both as strings in file order.

    Raises:
        InputFormatError: missing columns, empty file or duplicate variables
    """
    frame = _read_frame(path, dtype=str, keep_default_na=False)
    missing = [c for c in PARTITION_COLUMNS if c not in frame.columns]
    if missing:
        raise InputFormatError(f"Partition file {path} lacks column(s): {', '.join(missing)}")
    variables = frame['variable'].str.strip().tolist()
    clusters = frame['cluster_id'].str.strip().tolist()
    if not variables:
        raise InputFormatError(f"Partition file {path} has no rows")
    for pos, (variable, cluster) in enumerate(zip(variables, clusters)):
        if not variable or not cluster:
            column = 'variable' if not variable else 'cluster_id'
            raise InputFormatError("Empty value", row=pos + 2, column=column)
    seen = set()
    for pos, variable in enumerate(variables):
        if variable in seen:
            raise InputFormatError(f"Duplicate variable {variable!r}", row=pos + 2, column='variable')
        seen.add(variable)
    return variables, clusters


def read_partition_pair(path_a: PathLike, path_b: PathLike) -> Tuple[Partition, Partition]:
    """
    Two partition files over the same variables, aligned on the first file's order.

    Raises:
        PartitionMismatchError: if the variable sets differ
    """
    variables_a, clusters_a = read_partition(path_a)
    variables_b, clusters_b = read_partition(path_b)
    if set(variables_a) != set(variables_b):
        only_a = sorted(set(variables_a) - set(variables_b))
        only_b = sorted(set(variables_b) - set(variables_a))
        raise PartitionMismatchError(
            f"Partition files list different variables (only in first: {only_a[:5]}, only in second: {only_b[:5]})"
        )
    lookup_b: Dict[str, str] = dict(zip(variables_b, clusters_b))
    aligned_b = [lookup_b[v] for v in variables_a]
    return Partition.from_labels(clusters_a), Partition.from_labels(aligned_b)


def write_ground_truth(truth: GroundTruth, labels: Sequence[str], directory: PathLike, prefix: str = 'truth') -> List[Path]:
    """One partition file per known cluster count: <prefix>_k<count>.csv."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for k in truth.counts:
        path = directory / f"{prefix}_k{k}.csv"
        write_partition(truth[k], labels, path)
        written.append(path)
    return written


def cluster_summary(partition: Partition, r: CorrelationMatrix) -> pd.DataFrame:
    """Size, members and reliability height of every cluster of a cut."""
    rows = []
    for cid, cluster in enumerate(partition.clusters, start=1):
        members = list(cluster.members)
        rows.append({
            'cluster_id': cid,
            'size': cluster.size,
            'reliability': reliability_height(r.submatrix(members)),
            'variables': ' '.join(r.column_labels[j] for j in members),
        })
    return pd.DataFrame(rows, columns=['cluster_id', 'size', 'reliability', 'variables'])


# ---------------------------------------------------------------------------
# Benchmark output
# ---------------------------------------------------------------------------

def write_bench_csv(result: BenchResult, path: PathLike, include_timings: bool = True) -> None:
    """One row per replication x method x kind x cut."""
    frame = result.to_frame()
    if not include_timings:
        frame['seconds'] = ''
    frame['n'] = frame['n'].map(lambda n: '' if n is None or pd.isna(n) else int(n))
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)


def write_bench_json(result: BenchResult, path: PathLike, include_timings: bool = True) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(result.to_dict(include_timings=include_timings), f, indent=2, sort_keys=True)
        f.write('\n')
