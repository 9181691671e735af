"""Tests for seeded streams and samplers (sampling.py)."""

import numpy as np
import pytest

from src.exceptions import NotPositiveDefiniteError
from src.helpers.matrixkit import correlation
from src.models import CorrelationMatrix
from src.simbench.sampling import (
    RNG_NAME,
    replication_rng,
    rng_metadata,
    sample_exact,
    sample_mvn,
)


class TestReplicationRng:
    def test_same_stream_for_same_key(self):
        a = replication_rng(42, 3).standard_normal(5)
        b = replication_rng(42, 3).standard_normal(5)
        assert np.array_equal(a, b)

    def test_streams_differ_by_replication(self):
        a = replication_rng(42, 0).standard_normal(5)
        b = replication_rng(42, 1).standard_normal(5)
        assert not np.array_equal(a, b)

    def test_stream_does_not_depend_on_run_order(self):
        later_first = [replication_rng(7, rep).random() for rep in (2, 1, 0)]
        in_order = [replication_rng(7, rep).random() for rep in (0, 1, 2)]
        assert later_first == in_order[::-1]

    def test_metadata(self):
        meta = rng_metadata(9)
        assert meta['generator'] == RNG_NAME
        assert meta['seed'] == 9
        assert 'spawn_key' in meta['stream_rule']


class TestSampleMvn:
    def test_identity_correlations_near_zero(self):
        raw = sample_mvn(CorrelationMatrix(np.eye(4)), 10_000, replication_rng(1, 0))
        r = np.corrcoef(raw.values, rowvar=False)
        assert np.abs(r[~np.eye(4, dtype=bool)]).max() < 0.05

    def test_shape(self):
        raw = sample_mvn(CorrelationMatrix(np.eye(1)), 2, replication_rng(1, 0))
        assert raw.values.shape == (2, 1)

    def test_deterministic(self, two_block_correlation):
        a = sample_mvn(two_block_correlation, 20, replication_rng(5, 0))
        b = sample_mvn(two_block_correlation, 20, replication_rng(5, 0))
        assert np.array_equal(a.values, b.values)
        assert a.column_labels == two_block_correlation.column_labels

    def test_singular_population(self):
        with pytest.raises(NotPositiveDefiniteError):
            sample_mvn(CorrelationMatrix(np.ones((2, 2))), 10, replication_rng(1, 0))


class TestSampleExact:
    def test_reproduces_population(self, two_block_correlation):
        x = sample_exact(two_block_correlation, 12, replication_rng(2, 0))
        assert np.abs(correlation(x).values - two_block_correlation.values).max() < 1e-10

    def test_standardized(self, two_block_correlation):
        x = sample_exact(two_block_correlation, 12, replication_rng(2, 0))
        assert np.abs(x.values.mean(axis=0)).max() < 1e-10
        assert x.values.std(axis=0, ddof=1) == pytest.approx(np.ones(5), abs=1e-10)

    def test_needs_more_rows_than_columns(self, two_block_correlation):
        with pytest.raises(ValueError, match="n > p"):
            sample_exact(two_block_correlation, 5, replication_rng(2, 0))
