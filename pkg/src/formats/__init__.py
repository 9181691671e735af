"""Formats - CSV tables and dendrogram serialization."""

from .tables import (
    read_data_csv,
    read_correlation_csv,
    write_data_csv,
    write_correlation_csv,
    write_distance_csv,
    partition_frame,
    write_partition,
    read_partition,
    read_partition_pair,
    write_ground_truth,
    cluster_summary,
    write_bench_csv,
    write_bench_json,
)
from .dendrogram import (
    SCHEMA,
    Merge,
    DendrogramDocument,
    linkage_table,
    to_tree_node,
    to_newick,
    parse_newick,
    document_from_newick,
)

__all__ = [
    'read_data_csv',
    'read_correlation_csv',
    'write_data_csv',
    'write_correlation_csv',
    'write_distance_csv',
    'partition_frame',
    'write_partition',
    'read_partition',
    'read_partition_pair',
    'write_ground_truth',
    'cluster_summary',
    'write_bench_csv',
    'write_bench_json',
    'SCHEMA',
    'Merge',
    'DendrogramDocument',
    'linkage_table',
    'to_tree_node',
    'to_newick',
    'parse_newick',
    'document_from_newick',
]
