"""
Error Types

Every failure the clustering library can raise derives from HCSVDError so the
CLI can translate it into a stable exit code.
"""

from typing import List, Optional, Tuple


class HCSVDError(ValueError):
    """Base class for all library errors."""


class InputFormatError(HCSVDError):
    """Malformed CSV input. Carries the offending row/column when known."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column!r}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class ConstantColumnError(HCSVDError):
    """A column has zero sample variance and cannot be standardized."""

    def __init__(self, index: int, label: Optional[str] = None):
        name = f" ({label})" if label is not None else ""
        super().__init__(f"Column {index}{name} is constant")
        self.index = index
        self.label = label


class ConvergenceError(HCSVDError):
    """An iterative solver did not converge."""


class NotPositiveDefiniteError(HCSVDError):
    """A matrix expected to be positive definite is not."""


class ZeroMatrixError(HCSVDError):
    """The input matrix is numerically zero."""


class DegenerateResidualError(HCSVDError):
    """Deflation exhausted the residual before all loadings were extracted."""

    def __init__(self, message: str, loadings: Optional[List] = None):
        super().__init__(message)
        self.loadings = loadings or []


class CollinearityError(HCSVDError):
    """Two variables on opposite sides of a split are perfectly collinear."""

    def __init__(self, pair: Tuple[int, int], value: float):
        super().__init__(
            f"Perfect collinearity between variables {pair[0]} and {pair[1]} (r = {value:.12g})"
        )
        self.pair = pair
        self.value = value


class ThresholdExceededError(HCSVDError):
    """Exhaustive enumeration requested for a cluster above the threshold."""


class NoValidCandidateError(HCSVDError):
    """No candidate split survived for a cluster."""


class TooLargeError(HCSVDError):
    """Brute-force search requested above its hard size cap."""


class DesignInfeasibleError(HCSVDError):
    """A simulation design could not produce a positive definite matrix."""


class PartitionMismatchError(HCSVDError):
    """Two partitions do not cover the same set of items."""


class InvalidDesignError(HCSVDError):
    """Simulation design parameters violate the design's preconditions."""
