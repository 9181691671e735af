"""Tests for CSV reading and writing (tables.py)."""

import json

import numpy as np
import pandas as pd
import pytest

from src.exceptions import InputFormatError, PartitionMismatchError
from src.formats.tables import (
    cluster_summary,
    read_correlation_csv,
    read_data_csv,
    read_partition,
    read_partition_pair,
    write_bench_csv,
    write_bench_json,
    write_correlation_csv,
    write_data_csv,
    write_ground_truth,
    write_partition,
)
from src.models import Design, DesignSpec, Partition, RawMatrix
from src.simbench import run_benchmark
from src.simbench.designs import design_b_truth


# Data matrices

class TestReadDataCsv:
    def test_reads_labels_and_values(self, write_csv):
        path = write_csv('data.csv', "a,b\n1,2\n3,4.5\n")
        raw = read_data_csv(path)
        assert raw.column_labels == ['a', 'b']
        assert raw.values == pytest.approx(np.array([[1.0, 2.0], [3.0, 4.5]]))

    def test_non_numeric_cell(self, write_csv):
        path = write_csv('data.csv', "a,b\n1,2\n3,oops\n")
        with pytest.raises(InputFormatError) as exc:
            read_data_csv(path)
        assert exc.value.row == 3
        assert exc.value.column == 'b'

    def test_missing_cell(self, write_csv):
        path = write_csv('data.csv', "a,b\n1,\n3,4\n")
        with pytest.raises(InputFormatError) as exc:
            read_data_csv(path)
        assert exc.value.row == 2

    def test_single_row(self, write_csv):
        with pytest.raises(InputFormatError, match="at least 2"):
            read_data_csv(write_csv('data.csv', "a,b\n1,2\n"))

    def test_empty_file(self, write_csv):
        with pytest.raises(InputFormatError, match="empty"):
            read_data_csv(write_csv('data.csv', ""))

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputFormatError, match="not found"):
            read_data_csv(tmp_path / 'absent.csv')

    def test_round_trip(self, tmp_path):
        raw = RawMatrix(np.array([[0.1, 1e-17], [2.0 / 3.0, -5.0]]), ['x', 'y'])
        write_data_csv(raw, tmp_path / 'out.csv')
        again = read_data_csv(tmp_path / 'out.csv')
        assert np.array_equal(again.values, raw.values)


# Correlation matrices

class TestReadCorrelationCsv:
    def test_plain_matrix(self, write_csv):
        r = read_correlation_csv(write_csv('r.csv', "a,b\n1,0.5\n0.5,1\n"))
        assert r.column_labels == ['a', 'b']
        assert r.values[0, 1] == 0.5

    def test_index_column_dropped(self, write_csv):
        frame = pd.DataFrame([[1.0, 0.2], [0.2, 1.0]], index=['a', 'b'], columns=['a', 'b'])
        r = read_correlation_csv(write_csv('r.csv', frame, index=True))
        assert r.column_labels == ['a', 'b']
        assert r.p == 2

    def test_symmetrized(self, write_csv):
        r = read_correlation_csv(write_csv('r.csv', "a,b\n1,0.5\n0.500000001,1\n"))
        assert r.values[0, 1] == r.values[1, 0]

    def test_not_square(self, write_csv):
        with pytest.raises(InputFormatError, match="not square"):
            read_correlation_csv(write_csv('r.csv', "a,b,c\n1,0.5,0.1\n0.5,1,0.2\n"))

    def test_not_symmetric(self, write_csv):
        with pytest.raises(InputFormatError, match="not symmetric") as exc:
            read_correlation_csv(write_csv('r.csv', "a,b\n1,0.5\n0.4,1\n"))
        assert exc.value.row is not None

    def test_bad_diagonal(self, write_csv):
        with pytest.raises(InputFormatError, match="Diagonal"):
            read_correlation_csv(write_csv('r.csv', "a,b\n0.9,0.5\n0.5,1\n"))

    def test_out_of_range(self, write_csv):
        with pytest.raises(InputFormatError, match="outside"):
            read_correlation_csv(write_csv('r.csv', "a,b\n1,1.5\n1.5,1\n"))

    def test_not_positive_semidefinite(self, write_csv):
        text = "a,b,c\n1,0.9,-0.9\n0.9,1,0.9\n-0.9,0.9,1\n"
        with pytest.raises(InputFormatError, match="positive semidefinite"):
            read_correlation_csv(write_csv('r.csv', text))

    def test_round_trip(self, tmp_path, two_block_correlation):
        write_correlation_csv(two_block_correlation, tmp_path / 'r.csv')
        again = read_correlation_csv(tmp_path / 'r.csv')
        assert np.array_equal(again.values, two_block_correlation.values)


# Partitions

class TestPartitions:
    def test_write_uses_one_based_ids(self, tmp_path):
        write_partition(Partition.from_labels([5, 5, 2]), ['a', 'b', 'c'], tmp_path / 'p.csv')
        frame = pd.read_csv(tmp_path / 'p.csv')
        assert list(frame.columns) == ['variable', 'cluster_id']
        assert frame['cluster_id'].tolist() == [1, 1, 2]

    def test_read(self, write_csv):
        variables, clusters = read_partition(write_csv('p.csv', "variable,cluster_id\nx,1\ny,2\n"))
        assert variables == ['x', 'y']
        assert clusters == ['1', '2']

    def test_read_missing_column(self, write_csv):
        with pytest.raises(InputFormatError, match="lacks"):
            read_partition(write_csv('p.csv', "name,cluster\nx,1\n"))

    def test_read_duplicate_variable(self, write_csv):
        with pytest.raises(InputFormatError, match="Duplicate"):
            read_partition(write_csv('p.csv', "variable,cluster_id\nx,1\nx,2\n"))

    def test_pair_aligned_on_variables(self, write_csv):
        a = write_csv('a.csv', "variable,cluster_id\nx,1\ny,1\nz,2\n")
        b = write_csv('b.csv', "variable,cluster_id\nz,9\nx,4\ny,4\n")
        first, second = read_partition_pair(a, b)
        assert first == second

    def test_pair_mismatch(self, write_csv):
        a = write_csv('a.csv', "variable,cluster_id\nx,1\ny,1\n")
        b = write_csv('b.csv', "variable,cluster_id\nx,1\nw,1\n")
        with pytest.raises(PartitionMismatchError):
            read_partition_pair(a, b)

    def test_ground_truth_files(self, tmp_path):
        paths = write_ground_truth(design_b_truth(6), [f"X{j + 1}" for j in range(6)], tmp_path)
        assert [p.name for p in paths] == ['truth_k2.csv', 'truth_k4.csv']
        frame = pd.read_csv(paths[1])
        assert frame['cluster_id'].tolist() == [1, 1, 2, 3, 3, 4]


class TestClusterSummary:
    def test_sizes_and_reliability(self, two_block_correlation):
        summary = cluster_summary(Partition.from_labels([0, 0, 1, 1, 1]), two_block_correlation)
        assert summary['size'].tolist() == [2, 3]
        assert summary['reliability'].tolist() == pytest.approx([1 - 1.8 / 2, 1 - 2.2 / 3])
        assert summary['variables'].tolist() == ['X1 X2', 'X3 X4 X5']


# Benchmark output

class TestBenchOutput:
    @pytest.fixture
    def result(self):
        return run_benchmark(DesignSpec(Design.B, 6, None, 1, 2), methods=['diana'])

    def test_csv_columns(self, tmp_path, result):
        write_bench_csv(result, tmp_path / 'bench.csv')
        frame = pd.read_csv(tmp_path / 'bench.csv', keep_default_na=False)
        assert list(frame.columns) == ['design', 'p', 'n', 'replication', 'method',
                                       'distance_kind', 'cut_k', 'ari', 'seconds']
        assert len(frame) == 4
        assert set(frame['n']) == {''}

    def test_csv_without_timings(self, tmp_path, result):
        write_bench_csv(result, tmp_path / 'bench.csv', include_timings=False)
        frame = pd.read_csv(tmp_path / 'bench.csv', keep_default_na=False)
        assert set(frame['seconds']) == {''}

    def test_json(self, tmp_path, result):
        write_bench_json(result, tmp_path / 'bench.json', include_timings=False)
        data = json.loads((tmp_path / 'bench.json').read_text())
        assert data['spec']['design'] == 'b'
        assert data['metadata']['mode'] == 'population'
        assert all('seconds_mean' not in cell for cell in data['summary'])
