"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class LevyGenError(Exception):
    """Base class for every error raised by :mod:`levygen`."""


class DomainError(LevyGenError, ValueError):
    """An argument lies outside the domain of the operation (poles, bands)."""


class UnsupportedSchemeError(DomainError):
    """The requested scheme is not defined for the given parameters."""


class ContractError(LevyGenError, ValueError):
    """Inputs are individually valid but inconsistent with each other."""


class AccuracyError(LevyGenError, ArithmeticError):
    """A series or quadrature failed to reach its accuracy target.

    ``partial`` carries the best available value, ``estimate`` the error
    estimate at the point of failure (either may be ``None``).
    """

    def __init__(self, message: str, partial: float | None = None, estimate: float | None = None):
        super().__init__(message)
        self.partial = partial
        self.estimate = estimate


class SolverError(LevyGenError, ArithmeticError):
    """A linear solve failed or produced an unacceptable residual."""

    def __init__(self, message: str, condition: float | None = None):
        super().__init__(message)
        self.condition = condition


class EstimateError(LevyGenError, ArithmeticError):
    """A Monte Carlo estimate could not be formed (e.g. every path censored)."""
