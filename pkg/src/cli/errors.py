"""Exit codes and error reporting shared by the commands."""

import logging

import click

from src.exceptions import (
    CollinearityError,
    ConstantColumnError,
    ConvergenceError,
    DegenerateResidualError,
    InputFormatError,
    InvalidDesignError,
    NoValidCandidateError,
    PartitionMismatchError,
    ZeroMatrixError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ALL_FAILED = 1
EXIT_INPUT = 2
EXIT_COLLINEARITY = 3
EXIT_NUMERIC = 4

NUMERIC_ERRORS = (ConvergenceError, NoValidCandidateError, DegenerateResidualError, ZeroMatrixError)

# Problems with the user's input; not reported to Sentry
USER_ERRORS = (InputFormatError, PartitionMismatchError, InvalidDesignError, ConstantColumnError, CollinearityError)


def exit_code_for(error: Exception) -> int:
    """Collinearity -> 3, solver failures -> 4, everything else (input, design) -> 2."""
    if isinstance(error, CollinearityError):
        return EXIT_COLLINEARITY
    if isinstance(error, NUMERIC_ERRORS):
        return EXIT_NUMERIC
    return EXIT_INPUT


def fail(ctx: click.Context, error: Exception) -> None:
    """Report an error on stderr and exit with its code."""
    code = exit_code_for(error)
    click.echo(click.style(f"Error: {error}", fg='red'), err=True)
    logger.debug("Exiting with code %d after %s", code, type(error).__name__)
    ctx.exit(code)
