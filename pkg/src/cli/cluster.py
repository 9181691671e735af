"""Cluster command: HC-SVD on a data or correlation CSV."""

import click
import logging
from pathlib import Path
from typing import List, Optional

from src import __version__
from src.clustering import HCSVD, cut_tree
from src.config import DISTANCES, HEIGHTS, OUTPUT_FORMATS, RunConfig
from src.formats import (
    DendrogramDocument,
    cluster_summary,
    linkage_table,
    read_correlation_csv,
    read_data_csv,
    to_newick,
    write_distance_csv,
    write_partition,
)
from src.helpers import correlation, standardize
from src.models import SplitTree
from src.monitoring import capture_errors, track_performance, with_run_context
from src.simbench import rng_metadata

from .errors import USER_ERRORS, fail

logger = logging.getLogger(__name__)


def _parse_cuts(text: str) -> List[int]:
    if not text:
        return []
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}", param_hint='--cut')


def _build_config(corr, distance, heights, loadings, exhaustive_threshold, cuts, output_format, threads, seed) -> RunConfig:
    """Environment defaults overridden by the flags that were given."""
    config = RunConfig.from_env()
    config.input_kind = 'correlation' if corr else 'data'
    config.cut_counts = _parse_cuts(cuts)
    config.output_format = output_format
    overrides = {
        'distance': distance,
        'heights': heights,
        'loadings': loadings,
        'exhaustive_threshold': exhaustive_threshold,
        'threads': threads,
        'seed': seed,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    config.validate()
    return config


@capture_errors(step_name="cluster", ignore=USER_ERRORS)
@track_performance(operation_name="cluster")
def run_cluster(config: RunConfig, input_path: str):
    """Load the input, run HC-SVD and return (document, tree, distances, correlation)."""
    if config.input_kind == 'correlation':
        r = read_correlation_csv(input_path)
        x = r
    else:
        x = standardize(read_data_csv(input_path))
        r = correlation(x)

    for k in config.cut_counts:
        if k > r.p:
            raise ValueError(f"Cannot cut {r.p} variables into {k} clusters")

    engine = HCSVD(
        kind=config.distance,
        policy=config.loadings,
        height_mode=config.heights,
        exhaustive_threshold=config.exhaustive_threshold,
        threads=config.threads,
    )
    tree, distances = engine.fit(x)
    tree.diagnostics['max_candidates'] = max((s.candidates for s in engine.split_stats), default=0)

    metadata = {
        'version': __version__,
        'config': config.echo(),
        'rng': rng_metadata(config.seed),
        'input': Path(input_path).name,
    }
    return DendrogramDocument.from_tree(tree, metadata), tree, distances, r


def _render(doc: DendrogramDocument, tree: SplitTree, output_format: str) -> str:
    if output_format == 'newick':
        return to_newick(doc) + '\n'
    if output_format == 'csv':
        return linkage_table(tree).to_csv(index=False, float_format='%.17g')
    return doc.to_json()


@click.command()
@click.argument('input_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--corr', is_flag=True, help='Input is a correlation matrix (default: data matrix)')
@click.option('--distance', type=click.Choice(DISTANCES), default=None, help='Split distance (default: single)')
@click.option('--heights', type=click.Choice(HEIGHTS), default=None, help='Dendrogram heights (default: split)')
@click.option('--loadings', default=None, help='Loadings per degree: kaiser, all or an integer')
@click.option('--exhaustive-threshold', type=int, default=None,
              help='Enumerate every split for clusters up to this size (default: 6)')
@click.option('--cut', 'cuts', default='', help='Comma-separated cluster counts to write cut files for')
@click.option('--format', 'output_format', type=click.Choice(OUTPUT_FORMATS), default='json',
              help='Dendrogram format')
@click.option('--threads', type=int, default=None, help='Worker threads for candidate generation')
@click.option('--seed', type=int, default=None, help='Seed recorded in the output metadata')
@click.option('-o', '--output', type=click.Path(dir_okay=False), default=None,
              help='Dendrogram file (default: stdout)')
@click.option('--cut-dir', type=click.Path(file_okay=False), default=None,
              help='Directory for cut_k<k>.csv files (default: next to --output, else cwd)')
@click.option('--distances', 'distances_path', type=click.Path(dir_okay=False), default=None,
              help='Also write the distance matrix M as CSV')
@click.pass_context
@with_run_context("cluster")
def cluster(ctx, input_path, corr, distance, heights, loadings, exhaustive_threshold, cuts,
            output_format, threads, seed, output, cut_dir, distances_path):
    """Cluster the variables of INPUT_PATH with HC-SVD."""
    try:
        config = _build_config(corr, distance, heights, loadings, exhaustive_threshold,
                               cuts, output_format, threads, seed)
        doc, tree, distances, r = run_cluster(config, input_path)
    except ValueError as e:
        fail(ctx, e)
        return

    rendered = _render(doc, tree, config.output_format)
    if output:
        Path(output).write_text(rendered, encoding='utf-8')
        click.echo(f"Dendrogram written to {output}", err=True)
    else:
        click.echo(rendered, nl=False)

    if distances_path:
        write_distance_csv(distances, distances_path)

    directory = Path(cut_dir) if cut_dir else (Path(output).parent if output else Path('.'))
    if config.cut_counts:
        directory.mkdir(parents=True, exist_ok=True)
    for k in config.cut_counts:
        path = directory / f"cut_k{k}.csv"
        write_partition(cut_tree(tree, k), tree.labels, path)
        click.echo(f"Cut at {k} clusters written to {path}", err=True)

    _print_diagnostics(doc, tree, r, config.cut_counts[0] if config.cut_counts else None)


def _print_diagnostics(doc: DendrogramDocument, tree, r, first_cut: Optional[int]):
    if logging.getLogger().level > logging.INFO:
        return
    diagnostics = doc.diagnostics
    violations = diagnostics.get('ultrametric_violations', 0)
    monotone = diagnostics.get('monotone', True)

    click.echo(f"\nVariables: {tree.p}   Splits: {len(tree.records)}   Heights: {doc.height_mode}", err=True)
    status = click.style("OK", fg='green') if not violations else click.style(str(violations), fg='red')
    click.echo(f"Ultrametric violations: {status}", err=True)
    click.echo(f"Monotone heights: {click.style('yes', fg='green') if monotone else click.style('no', fg='yellow')}",
               err=True)

    if first_cut is not None:
        summary = cluster_summary(cut_tree(tree, first_cut), r)
        click.echo(f"\nClusters at k={first_cut}:", err=True)
        click.echo(summary.to_string(index=False, float_format=lambda v: f"{v:.4f}"), err=True)
