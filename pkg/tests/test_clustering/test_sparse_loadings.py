"""Tests for the sparse loading solver (sparse_loadings.py)."""

import numpy as np
import pytest

from src.clustering.sparse_loadings import (
    DeflationState,
    leading_right_vector,
    soft_threshold_top,
    sparse_loading_grid,
    sparse_loading_sequence,
    sparse_rank1,
)
from src.exceptions import DegenerateResidualError, ZeroMatrixError
from src.models import CorrelationMatrix
from src.simbench import replication_rng, sample_exact


# soft_threshold_top

class TestSoftThresholdTop:
    def test_shrinks_by_next_magnitude(self):
        v, support = soft_threshold_top(np.array([3.0, -1.0, 2.0, 0.5]), 2)
        assert support == (0, 2)
        assert v == pytest.approx([2.0, 0.0, 1.0, 0.0])

    def test_keeps_sign(self):
        v, support = soft_threshold_top(np.array([-3.0, 1.0, 0.5]), 1)
        assert support == (0,)
        assert v == pytest.approx([-2.0, 0.0, 0.0])

    def test_magnitude_tie_prefers_smaller_index(self):
        v, support = soft_threshold_top(np.array([2.0, 2.0, 2.0]), 1)
        assert support == (0,)
        # a tie at the threshold keeps the raw value
        assert v == pytest.approx([2.0, 0.0, 0.0])

    def test_rounding_noise_counts_as_tie(self):
        v, support = soft_threshold_top(np.array([1.0, 3.0 * (1 - 1e-13), 3.0]), 1)
        assert support == (1,)
        assert v == pytest.approx([0.0, 3.0, 0.0])

    def test_full_support_is_unshrunk(self):
        z = np.array([0.3, -0.4])
        v, support = soft_threshold_top(z, 2)
        assert support == (0, 1)
        assert v == pytest.approx(z)


# sparse_rank1

class TestSparseRank1:
    def test_single_direction_matrix(self):
        x = np.zeros((5, 3))
        x[:, 1] = [1.0, -2.0, 0.5, 3.0, 1.0]
        loading = sparse_rank1(x, 1)
        assert loading.support == (1,)
        assert loading.vector == pytest.approx([0.0, 1.0, 0.0])

    def test_support_is_dominant_block(self, block_correlation):
        population = block_correlation([(3, 0.7), (2, 0.3)])
        x = sample_exact(population, 30, replication_rng(3, 0)).values
        loading = sparse_rank1(x, 3)
        assert loading.support == (0, 1, 2)
        assert loading.degree_s == 3
        assert np.linalg.norm(loading.vector) == pytest.approx(1.0)
        assert np.all(loading.vector[[3, 4]] == 0.0)

    def test_correlation_input(self, block_correlation):
        r = block_correlation([(3, 0.8), (2, 0.5)])
        loading = sparse_rank1(r.values, 3)
        assert loading.support == (0, 1, 2)
        # R v = (1 + 2 * 0.8) v on the leading block
        assert loading.quasi_singular_value == pytest.approx(2.6)

    def test_full_degree_equals_leading_singular_vector(self, random_data):
        x = random_data - random_data.mean(axis=0)
        loading = sparse_rank1(x, x.shape[1])
        _, singular_values, vt = np.linalg.svd(x)
        dense = vt[0] if vt[0][np.argmax(np.abs(vt[0]))] > 0 else -vt[0]
        assert loading.vector == pytest.approx(dense, abs=1e-6)
        assert loading.quasi_singular_value == pytest.approx(singular_values[0])

    def test_power_init_agrees_with_eigh(self, block_correlation):
        x = sample_exact(block_correlation([(3, 0.7), (3, 0.4)]), 25, replication_rng(5, 0)).values
        by_eigh = sparse_rank1(x, 3, init='eigh')
        by_power = sparse_rank1(x, 3, init='power')
        assert by_eigh.support == by_power.support
        assert by_eigh.vector == pytest.approx(by_power.vector, abs=1e-5)

    def test_zero_matrix(self):
        with pytest.raises(ZeroMatrixError):
            sparse_rank1(np.zeros((4, 3)), 1)

    @pytest.mark.parametrize("s", [0, 4])
    def test_degree_out_of_range(self, s):
        with pytest.raises(ValueError):
            sparse_rank1(np.eye(3), s)


class TestLeadingRightVector:
    def test_sign_convention(self, random_data):
        v = leading_right_vector(random_data)
        assert v[np.argmax(np.abs(v))] > 0

    def test_power_matches_eigh(self, random_data):
        assert leading_right_vector(random_data, 'power') == pytest.approx(
            leading_right_vector(random_data, 'eigh'), abs=1e-6
        )


# sparse_loading_sequence

class TestSparseLoadingSequence:
    def test_orthogonal_columns_give_distinct_singletons(self, rng):
        x = sample_exact(CorrelationMatrix(np.eye(4)), 20, rng).values
        sequence = sparse_loading_sequence(x, 2, 1)
        supports = [loading.support for loading in sequence]
        assert len(supports) == 2
        assert all(len(s) == 1 for s in supports)
        assert supports[0] != supports[1]

    def test_supports_tile_design_b_blocks(self, exact_design_b_sample):
        sequence = sparse_loading_sequence(exact_design_b_sample.values, 4, 3)
        supports = sorted(loading.support for loading in sequence)
        assert supports == [(0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11)]
        assert not sequence.degenerate

    def test_single_loading_equals_rank1(self, random_data):
        first = sparse_loading_sequence(random_data, 1, 2)[0]
        direct = sparse_rank1(random_data, 2)
        assert first.support == direct.support
        assert first.vector == pytest.approx(direct.vector)

    def test_degenerate_residual(self):
        x = np.outer([1.0, -2.0, 0.5, 1.5, 3.0], [1.0, 2.0, 0.0])
        sequence = sparse_loading_sequence(x, 2, 2)
        assert sequence.degenerate
        assert len(sequence) == 1

    def test_degenerate_residual_strict(self):
        x = np.outer([1.0, -2.0, 0.5, 1.5, 3.0], [1.0, 2.0, 0.0])
        with pytest.raises(DegenerateResidualError) as exc:
            sparse_loading_sequence(x, 2, 2, strict=True)
        assert len(exc.value.loadings) == 1

    def test_invalid_counts(self):
        with pytest.raises(ValueError):
            sparse_loading_sequence(np.eye(3), 4, 1)
        with pytest.raises(ValueError):
            sparse_loading_sequence(np.eye(3), 1, 3)


class TestDeflationState:
    def test_deflate_removes_rank_one_part(self, block_correlation):
        r = block_correlation([(2, 0.7), (2, 0.3)]).values
        x = sample_exact(CorrelationMatrix(r), 10, replication_rng(2, 0)).values
        loading = sparse_rank1(x, 2)
        state = DeflationState(residual=x.copy())
        before = state.frobenius_norm
        images = state.deflate(loading.vector[None, :])
        assert state.rank_extracted == 1
        assert images[0] == pytest.approx(x @ loading.vector)
        assert state.frobenius_norm[0] < before
        assert np.abs(state.residual[0] @ loading.vector).max() < 1e-8

    def test_gram_follows_residual(self, random_data):
        state = DeflationState(residual=random_data.copy())
        state.deflate(np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 0.6, 0.8, 0.0]]))
        assert state.gram.shape == (2, 4, 4)
        assert state.gram[1] == pytest.approx(state.residual[1].T @ state.residual[1])
        state.keep(np.array([False, True]))
        assert state.residual.shape == (1, 50, 4)


# sparse_loading_grid

def _update(x, v, s):
    z = x.T @ (x @ v)
    thresholded, _ = soft_threshold_top(z, s)
    return thresholded / np.linalg.norm(thresholded)


class TestSparseLoadingGrid:
    def test_matches_single_degree_sequences(self, exact_design_b_sample):
        x = exact_design_b_sample.values
        degrees = [2, 3, 5, 8]
        grid = sparse_loading_grid(x, 3, degrees)
        for s, sequence in zip(degrees, grid):
            single = sparse_loading_sequence(x, 3, s)
            assert [l.support for l in sequence] == [l.support for l in single]
            for batched, alone in zip(sequence, single):
                assert batched.vector == pytest.approx(alone.vector, abs=1e-7)

    def test_every_loading_is_a_fixed_point(self, exact_design_b_sample):
        x = exact_design_b_sample.values
        for s, sequence in zip(range(1, 12), sparse_loading_grid(x, 1, range(1, 12))):
            loading = sequence[0]
            assert loading.degree_s == s
            assert _update(x, loading.vector, s) == pytest.approx(loading.vector, abs=1e-5)

    def test_near_tie_prefers_smaller_index(self):
        # columns 0 and 2 are the same variable up to rounding noise
        base = np.array([1.0, -0.5, 0.25, 2.0, -1.5])
        x = np.column_stack([base, np.array([0.1, 0.2, -0.3, 0.1, 0.0]), base * (1 + 1e-15)])
        assert sparse_rank1(x, 1).support == (0,)

    def test_zero_matrix_reported_per_degree(self):
        outcomes = sparse_loading_grid(np.zeros((5, 3)), 1, [1, 2])
        assert all(isinstance(o, ZeroMatrixError) for o in outcomes)

    def test_degree_out_of_range(self):
        with pytest.raises(ValueError):
            sparse_loading_grid(np.eye(3), 1, [1, 4])


class TestQuasiSingularValues:
    def test_dense_degree_gives_singular_values(self, random_data):
        x = random_data - random_data.mean(axis=0)
        sequence = sparse_loading_grid(x, 3, [x.shape[1]])[0]
        singular_values = np.linalg.svd(x, compute_uv=False)
        sigmas = [loading.quasi_singular_value for loading in sequence]
        assert sigmas == pytest.approx(singular_values[:3], rel=1e-6)
        assert all(a >= b - 1e-8 for a, b in zip(sigmas, sigmas[1:]))

    def test_non_increasing_on_exact_blocks(self, exact_design_b_sample):
        sequence = sparse_loading_sequence(exact_design_b_sample.values, 4, 3)
        sigmas = [loading.quasi_singular_value for loading in sequence]
        assert all(a >= b - 1e-8 for a, b in zip(sigmas, sigmas[1:]))
