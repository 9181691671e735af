"""Partition agreement."""

from sklearn.metrics import adjusted_rand_score

from ..exceptions import PartitionMismatchError
from ..models.tree import Partition


def adjusted_rand_index(a: Partition, b: Partition) -> float:
    """
    Hubert-Arabie adjusted Rand index of two partitions of the same items.

    When the chance-corrected denominator vanishes (fewer than two items, or
    both partitions trivial) the result is 1 for identical partitions, else 0.

    Raises:
        PartitionMismatchError: if the partitions cover different items
    """
    if a.items != b.items:
        raise PartitionMismatchError("Partitions do not cover the same items")
    return float(adjusted_rand_score(a.labels(), b.labels()))


def ari_from_labels(labels_a, labels_b) -> float:
    """adjusted_rand_index for two label sequences over the same items."""
    if len(labels_a) != len(labels_b):
        raise PartitionMismatchError(
            f"Label sequences differ in length ({len(labels_a)} vs {len(labels_b)})"
        )
    return adjusted_rand_index(Partition.from_labels(list(labels_a)), Partition.from_labels(list(labels_b)))
