"""
Exception hierarchy shared by every entlifepy module.

The CLI maps these onto process exit codes (see entlifeTypes.ExitCode):
DomainError / ValidationError / ResourceError -> 1, NumericError -> 2.
"""

from typing import Optional, Tuple


class EntlifeError(Exception):
    """Base class for all library errors."""


class DomainError(EntlifeError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ValidationError(EntlifeError, ValueError):
    """Malformed input data (weights, graphs, files, dimensions)."""


class ResourceError(EntlifeError):
    """Request exceeds what the dense oracle is allowed to allocate."""


class NumericError(EntlifeError, ArithmeticError):
    """Root finding or scanning failed to locate a crossing."""

    def __init__(self, message: str, bracket: Optional[Tuple[float, float]] = None):
        if bracket is not None:
            message = f"{message} (bracket [{bracket[0]!r}, {bracket[1]!r}])"
        super().__init__(message)
        self.bracket = bracket
