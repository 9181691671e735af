"""Simulate command: sampled data, population matrix and ground truths for a design."""

import click
import logging
from pathlib import Path

from src.formats import write_correlation_csv, write_data_csv, write_ground_truth
from src.models import Design, DesignSpec
from src.monitoring import capture_errors, with_run_context
from src.simbench import design_population, replication_rng, sample_exact, sample_mvn

from .errors import USER_ERRORS, fail

logger = logging.getLogger(__name__)


@capture_errors(step_name="simulate", ignore=USER_ERRORS)
def run_simulation(spec: DesignSpec, replication: int, exact: bool, out_dir: Path):
    """Write data.csv, population.csv and truth_k<k>.csv files; returns the written paths."""
    spec.validate()
    rng = replication_rng(spec.seed, replication)
    population, truth = design_population(spec.design, spec.p, rng)
    if exact:
        data = sample_exact(population, spec.n, rng)
    else:
        data = sample_mvn(population, spec.n, rng)

    out_dir.mkdir(parents=True, exist_ok=True)
    data_path = out_dir / 'data.csv'
    population_path = out_dir / 'population.csv'
    write_data_csv(data, data_path)
    write_correlation_csv(population, population_path)
    truth_paths = write_ground_truth(truth, population.column_labels, out_dir)
    return data_path, population_path, truth_paths


@click.command()
@click.option('--design', type=click.Choice(['a', 'b']), required=True, help='Simulation design')
@click.option('--p', 'p', type=int, required=True, help='Number of variables')
@click.option('--n', 'n', type=int, required=True, help='Number of observations')
@click.option('--seed', type=int, default=0, show_default=True, help='Random seed (unsigned 64-bit)')
@click.option('--replication', type=int, default=0, show_default=True,
              help='Replication stream (matches the bench replication with this index)')
@click.option('--exact', is_flag=True, help='Sample data whose correlation equals the population matrix')
@click.option('-o', '--out', 'out_dir', type=click.Path(file_okay=False), required=True,
              help='Output directory')
@click.pass_context
@with_run_context("simulate")
def simulate(ctx, design, p, n, seed, replication, exact, out_dir):
    """Write a simulated data set with its population matrix and ground truths."""
    spec = DesignSpec(design=Design(design), p=p, n=n, seed=seed, replications=1)
    try:
        data_path, population_path, truth_paths = run_simulation(spec, replication, exact, Path(out_dir))
    except ValueError as e:
        fail(ctx, e)
        return

    click.echo(f"Design {design}, p={p}, n={n}, seed={seed}, replication={replication}")
    click.echo(f"  Data:       {data_path}")
    click.echo(f"  Population: {population_path}")
    for path in truth_paths:
        click.echo(f"  Truth:      {path}")
