"""
HC-SVD CLI

Divisive hierarchical clustering of variables, simulation designs and benchmarks.

Usage:
    hcsvd [OPTIONS] COMMAND [ARGS]...

Commands:
    cluster   Cluster the variables of a data or correlation CSV
    simulate  Write a simulated data set with its population matrix and truths
    bench     Run a benchmark study from a key = value spec file
    ari       Adjusted Rand index of two partition files

Exit codes:
    0 success, 1 every benchmark replication failed, 2 invalid input or
    design, 3 perfect collinearity, 4 convergence failure
"""

import click
import logging
import os
import sys
from dotenv import load_dotenv

# Load .env file
load_dotenv()

# Add project root to path
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, PROJECT_ROOT)

from src import __version__
from src.monitoring import init_sentry


def setup_logging(verbose: bool, quiet: bool = False):
    """Configure logging to stderr so stdout stays machine-readable."""
    if quiet:
        level = logging.WARNING
    else:
        level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format='%(message)s',  # Simple format for CLI
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


@click.group()
@click.version_option(__version__, prog_name='hcsvd')
@click.option('-v', '--verbose', is_flag=True, help='Verbose output (show DEBUG logs)')
@click.option('-q', '--quiet', is_flag=True, help='Quiet mode (only show warnings/errors)')
@click.pass_context
def cli(ctx, verbose, quiet):
    """HC-SVD - Hierarchical variable clustering via sparse loadings."""
    setup_logging(verbose, quiet)
    init_sentry()

    ctx.ensure_object(dict)
    ctx.obj['verbose'] = verbose
    ctx.obj['quiet'] = quiet


# Import and register commands
from .cluster import cluster
from .simulate import simulate
from .bench import bench
from .ari import ari

cli.add_command(cluster)
cli.add_command(simulate)
cli.add_command(bench)
cli.add_command(ari)


if __name__ == '__main__':
    cli()
