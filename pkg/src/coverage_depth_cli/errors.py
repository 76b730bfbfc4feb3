"""
Exception hierarchy for coverage-depth computations.

Every error is a ``ValueError`` so callers that only care about bad input can
catch the builtin; the CLI maps the concrete classes to exit codes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Union


class CoverageDepthError(ValueError):
    """Base class for all errors raised by this package."""


class PreconditionError(CoverageDepthError):
    """A computation was asked to run outside its documented domain."""


class FieldError(PreconditionError):
    """Invalid field parameters or mixing elements of different fields."""


class MatrixError(PreconditionError):
    """Malformed, rank-deficient or otherwise unusable generator matrix."""


class CapExceededError(PreconditionError):
    """An exhaustive enumeration would exceed its configured size cap."""

    def __init__(self, what: str, size: int, cap: int) -> None:
        super().__init__(f"{what} = {size} exceeds the configured cap of {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class InconsistentDataError(PreconditionError):
    """Input tables contradict each other (non-integral inversion, negative counts)."""


class SimulationError(PreconditionError):
    """A sampled trial did not terminate within the draw cap."""


class MatrixFileError(CoverageDepthError):
    """Parse failure in a matrix text file, located by line and column."""

    def __init__(
        self,
        message: str,
        path: Optional[Union[str, Path]] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ) -> None:
        location = str(path) if path is not None else "<matrix>"
        if line is not None:
            location += f":{line}"
            if column is not None:
                location += f":{column}"
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line = line
        self.column = column
