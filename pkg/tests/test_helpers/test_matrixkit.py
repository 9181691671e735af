"""Tests for dense matrix kernels (matrixkit.py)."""

import numpy as np
import pytest
from scipy import linalg

from src.exceptions import ConstantColumnError, NotPositiveDefiniteError
from src.helpers.matrixkit import (
    cholesky,
    correlation,
    is_block_diagonal_under_permutation,
    spectral_norm,
    standardize,
    sym_eigen,
)
from src.models import CorrelationMatrix, RawMatrix, StandardizedMatrix
from src.simbench import design_b_population, replication_rng


# standardize

class TestStandardize:
    def test_three_point_column(self):
        x = standardize(RawMatrix(np.array([[1.0], [2.0], [3.0]])))
        assert x.values[:, 0] == pytest.approx([-1.0, 0.0, 1.0], abs=1e-12)

    def test_moments(self, random_data):
        x = standardize(RawMatrix(random_data))
        assert np.abs(x.values.mean(axis=0)).max() < 1e-10
        assert x.values.std(axis=0, ddof=1) == pytest.approx(np.ones(4), abs=1e-10)

    def test_idempotent(self, random_data):
        once = standardize(RawMatrix(random_data))
        twice = standardize(once)
        assert np.abs(once.values - twice.values).max() < 1e-12

    def test_keeps_labels(self):
        raw = RawMatrix(np.array([[1.0, 4.0], [2.0, 1.0], [3.0, 0.0]]), ['a', 'b'])
        assert standardize(raw).column_labels == ['a', 'b']

    def test_constant_column(self):
        raw = RawMatrix(np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]]), ['a', 'b'])
        with pytest.raises(ConstantColumnError) as exc:
            standardize(raw)
        assert exc.value.index == 1
        assert exc.value.label == 'b'

    def test_single_observation(self):
        with pytest.raises(ValueError):
            standardize(RawMatrix(np.array([[1.0, 2.0]])))


# correlation

class TestCorrelation:
    def test_identical_columns(self):
        x = standardize(RawMatrix(np.array([[1.0, 1.0], [2.0, 2.0], [4.0, 4.0]])))
        assert correlation(x).values[0, 1] == pytest.approx(1.0)

    def test_orthogonal_columns(self):
        raw = RawMatrix(np.array([[-1.0, 1.0], [0.0, -2.0], [1.0, 1.0]]))
        assert correlation(standardize(raw)).values[0, 1] == pytest.approx(0.0, abs=1e-12)

    def test_matches_pairwise_pearson(self, random_data):
        r = correlation(standardize(RawMatrix(random_data)))
        assert np.abs(r.values - np.corrcoef(random_data, rowvar=False)).max() < 1e-12

    def test_result_is_valid_correlation_matrix(self, random_data):
        r = correlation(standardize(RawMatrix(random_data)))
        assert r.is_valid()
        assert np.all(np.diag(r.values) == 1.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_invariant_under_positive_affine_maps(self, seed):
        rng = np.random.default_rng(seed)
        data = rng.standard_normal((40, 6))
        scale = rng.uniform(0.1, 10.0, size=6)
        shift = rng.uniform(-100.0, 100.0, size=6)
        before = correlation(standardize(RawMatrix(data))).values
        after = correlation(standardize(RawMatrix(data * scale + shift))).values
        assert np.abs(before - after).max() < 1e-10


# sym_eigen / spectral_norm

class TestSymEigen:
    def test_identity(self):
        values, vectors = sym_eigen(CorrelationMatrix(np.eye(4)))
        assert values == pytest.approx([1.0, 1.0, 1.0, 1.0])
        assert vectors.T @ vectors == pytest.approx(np.eye(4))

    def test_two_by_two(self):
        values, _ = sym_eigen(CorrelationMatrix(np.array([[1.0, 0.3], [0.3, 1.0]])))
        assert values == pytest.approx([1.3, 0.7])

    def test_equicorrelation(self, equicorrelation):
        values, _ = sym_eigen(CorrelationMatrix(equicorrelation(5, 0.4)))
        assert values == pytest.approx([2.6, 0.6, 0.6, 0.6, 0.6])

    def test_descending_and_matches_scipy(self, random_data):
        r = correlation(standardize(RawMatrix(random_data)))
        values, vectors = sym_eigen(r)
        assert np.all(np.diff(values) <= 0)
        assert values == pytest.approx(linalg.eigh(r.values, eigvals_only=True)[::-1])
        assert r.values @ vectors == pytest.approx(vectors * values)

    def test_top_k(self, equicorrelation):
        values, vectors = sym_eigen(CorrelationMatrix(equicorrelation(4, 0.5)), k=1)
        assert values == pytest.approx([2.5])
        assert vectors.shape == (4, 1)

    @pytest.mark.parametrize("seed", range(5))
    def test_eigenvalues_sum_to_dimension(self, seed):
        data = np.random.default_rng(seed).standard_normal((30, 8))
        values, _ = sym_eigen(correlation(standardize(RawMatrix(data))))
        assert values.sum() == pytest.approx(8.0, abs=1e-10)
        assert values.min() > -1e-10


class TestSpectralNorm:
    def test_identity(self):
        assert spectral_norm(CorrelationMatrix(np.eye(3))) == pytest.approx(1.0)

    def test_two_by_two(self):
        assert spectral_norm(CorrelationMatrix(np.array([[1.0, 0.6], [0.6, 1.0]]))) == pytest.approx(1.6)

    def test_equicorrelation(self, equicorrelation):
        assert spectral_norm(CorrelationMatrix(equicorrelation(3, 0.5))) == pytest.approx(2.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_between_one_and_dimension(self, seed):
        data = np.random.default_rng(seed).standard_normal((25, 7))
        norm = spectral_norm(correlation(standardize(RawMatrix(data))))
        assert 1.0 - 1e-12 <= norm <= 7.0 + 1e-12

    def test_all_ones_reaches_dimension(self):
        assert spectral_norm(CorrelationMatrix(np.ones((5, 5)))) == pytest.approx(5.0)


# cholesky

class TestCholesky:
    def test_identity(self):
        assert cholesky(CorrelationMatrix(np.eye(3))) == pytest.approx(np.eye(3))

    def test_two_by_two(self):
        lower = cholesky(CorrelationMatrix(np.array([[1.0, 0.8], [0.8, 1.0]])))
        assert lower == pytest.approx(np.array([[1.0, 0.0], [0.8, 0.6]]))

    def test_duplicate_rows(self):
        with pytest.raises(NotPositiveDefiniteError):
            cholesky(CorrelationMatrix(np.ones((2, 2))))

    def test_indefinite(self):
        r = np.array([[1.0, 0.9, -0.9], [0.9, 1.0, 0.9], [-0.9, 0.9, 1.0]])
        with pytest.raises(NotPositiveDefiniteError):
            cholesky(CorrelationMatrix(r))


# is_block_diagonal_under_permutation

class TestBlockDetection:
    def test_identity(self):
        partition = is_block_diagonal_under_permutation(CorrelationMatrix(np.eye(4)))
        assert len(partition) == 4

    def test_two_blocks(self, block_correlation):
        partition = is_block_diagonal_under_permutation(block_correlation([(3, 0.5), (3, 0.7)]))
        assert partition.canonical() == ((0, 1, 2), (3, 4, 5))

    def test_permuted_blocks(self, block_correlation):
        r = block_correlation([(2, 0.5), (2, 0.7)])
        order = [0, 2, 1, 3]
        permuted = CorrelationMatrix(r.values[np.ix_(order, order)])
        assert is_block_diagonal_under_permutation(permuted).canonical() == ((0, 2), (1, 3))

    def test_design_b(self):
        population, _ = design_b_population(60, replication_rng(1, 0))
        partition = is_block_diagonal_under_permutation(population, tol=1e-12)
        assert len(partition) == 20
        assert all(cluster.size == 3 for cluster in partition.clusters)
