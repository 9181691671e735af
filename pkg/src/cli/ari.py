"""ARI command: agreement of two partition files."""

import click

from src.formats import read_partition_pair
from src.simbench import adjusted_rand_index

from .errors import fail


@click.command()
@click.argument('partition_a', type=click.Path(exists=True, dir_okay=False))
@click.argument('partition_b', type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def ari(ctx, partition_a, partition_b):
    """Print the adjusted Rand index of two variable,cluster_id files."""
    try:
        a, b = read_partition_pair(partition_a, partition_b)
        value = adjusted_rand_index(a, b)
    except ValueError as e:
        fail(ctx, e)
        return
    click.echo(f"{value:.6f}")
