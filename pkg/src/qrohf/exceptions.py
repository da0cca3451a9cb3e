from __future__ import annotations


class QROHFError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QROHFError, ValueError):
    """Input data violates a structural invariant.

    ``report`` carries the individual violations when they are known.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class LPError(QROHFError, ValueError):
    """Malformed linear program (unknown variable, inverted bounds, ...)."""


class SolverError(QROHFError, RuntimeError):
    """A linear program that should be solvable was not."""
