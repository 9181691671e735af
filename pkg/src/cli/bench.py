"""Bench command: replicated simulation study from a key = value spec file."""

import click
import logging
from pathlib import Path

from src.config import BenchConfig
from src.formats import write_bench_csv, write_bench_json
from src.monitoring import capture_errors, capture_message, track_performance, with_run_context
from src.simbench import run_benchmark

from .errors import EXIT_ALL_FAILED, USER_ERRORS, fail

logger = logging.getLogger(__name__)


@capture_errors(step_name="bench", ignore=USER_ERRORS)
@track_performance(operation_name="bench")
def run_bench(config: BenchConfig):
    config.validate()
    return run_benchmark(
        config.to_design_spec(),
        methods=config.methods,
        kinds=config.kinds,
        policy=config.loadings,
        exhaustive_threshold=config.exhaustive_threshold,
        threads=config.threads,
        progress=lambda rep: logger.debug("Replication %d done", rep),
    )


@click.command()
@click.argument('spec_file', type=click.Path(exists=True, dir_okay=False))
@click.option('-o', '--out', 'out_dir', type=click.Path(file_okay=False), default='.', show_default=True,
              help='Directory for bench_results.csv and bench_summary.json')
@click.option('--threads', type=int, default=None, help='Worker threads over replications (overrides the spec file)')
@click.option('--no-timings', is_flag=True, help='Leave timings out of the output files')
@click.pass_context
@with_run_context("bench")
def bench(ctx, spec_file, out_dir, threads, no_timings):
    """Run the benchmark described by SPEC_FILE."""
    try:
        config = BenchConfig.from_spec_file(spec_file)
        if threads is not None:
            config.threads = threads
        result = run_bench(config)
    except ValueError as e:
        fail(ctx, e)
        return

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / 'bench_results.csv'
    json_path = out / 'bench_summary.json'
    write_bench_csv(result, csv_path, include_timings=not no_timings)
    write_bench_json(result, json_path, include_timings=not no_timings)

    click.echo("=" * 60)
    click.echo(f"Benchmark: design {config.design}, p={config.p}, "
               f"n={config.n if config.n is not None else 'population'}, "
               f"{config.replications} replications")
    click.echo("=" * 60)
    summary = result.summary()
    if not summary.empty:
        click.echo(summary.to_string(index=False, float_format=lambda v: f"{v:.4f}"))

    if result.failures:
        click.echo(click.style(
            f"\n{len(result.failures)} method runs failed in replications {result.failed_replications}",
            fg='yellow'))
    click.echo(f"\nResults: {csv_path}\nSummary: {json_path}")

    if result.all_failed:
        click.echo(click.style("Every replication failed", fg='red'), err=True)
        capture_message("Every benchmark replication failed", level="error", tags={"design": config.design})
        ctx.exit(EXIT_ALL_FAILED)
