"""Exception hierarchy shared by every susceptinet module.

Each error class carries the process exit code the CLI reports for it.
"""

from typing import Optional


class SusceptError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 2


class UsageError(SusceptError, ValueError):
    """Invalid flags or configuration, detected before any computation."""

    exit_code = 1


class DataError(SusceptError, ValueError):
    """Input data cannot support the requested computation."""

    exit_code = 2


class ParseError(DataError):
    """A malformed record in a line-delimited input."""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class InsufficientDataError(DataError):
    """Too few observations for the statistic or model."""


class ConstantInputError(DataError):
    """A vector or column has zero variance where variance is required."""


class InvariantError(SusceptError, RuntimeError):
    """A computed result violated one of its stated invariants."""

    exit_code = 3

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)
