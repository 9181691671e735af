"""Tests for the adjusted Rand index (metrics.py)."""

import pytest

from src.exceptions import PartitionMismatchError
from src.models import Cluster, Partition
from src.simbench import replication_rng
from src.simbench.metrics import adjusted_rand_index, ari_from_labels


class TestAdjustedRandIndex:
    def test_identical(self):
        a = Partition.from_labels([0, 0, 1, 1, 2])
        assert adjusted_rand_index(a, a) == 1.0

    def test_singletons_against_one_cluster(self):
        singletons = Partition.from_labels([0, 1, 2, 3])
        whole = Partition.from_labels([0, 0, 0, 0])
        assert adjusted_rand_index(singletons, whole) == pytest.approx(0.0, abs=1e-12)

    def test_crossed_pairs(self):
        # {12|34} vs {13|24}
        a = Partition.from_labels([0, 0, 1, 1])
        b = Partition.from_labels([0, 1, 0, 1])
        assert adjusted_rand_index(a, b) == pytest.approx(-0.5, abs=1e-12)

    def test_label_names_do_not_matter(self):
        assert ari_from_labels(['x', 'x', 'y'], [7, 7, 3]) == 1.0

    def test_single_item(self):
        a = Partition([Cluster.of([0])])
        assert adjusted_rand_index(a, a) == 1.0

    def test_both_trivial_but_different(self):
        assert ari_from_labels([0, 1], [0, 0]) == 0.0

    def test_symmetric_and_at_most_one(self):
        rng = replication_rng(8, 0)
        for _ in range(300):
            n = int(rng.integers(2, 30))
            labels_a = rng.integers(0, int(rng.integers(1, 6)), size=n).tolist()
            labels_b = rng.integers(0, int(rng.integers(1, 6)), size=n).tolist()
            forward = ari_from_labels(labels_a, labels_b)
            assert forward == pytest.approx(ari_from_labels(labels_b, labels_a), abs=1e-12)
            assert forward <= 1.0 + 1e-12

    def test_different_items(self):
        a = Partition([Cluster.of([0, 1])])
        b = Partition([Cluster.of([0, 2])])
        with pytest.raises(PartitionMismatchError):
            adjusted_rand_index(a, b)

    def test_label_length_mismatch(self):
        with pytest.raises(PartitionMismatchError):
            ari_from_labels([0, 1], [0, 1, 1])
