"""Shared exception types for the fpgreen package."""

from __future__ import annotations


class FpgreenError(Exception):
    """Base class for all package-specific errors."""


class OrderLimitError(FpgreenError):
    """Requested generation order exceeds the default cap and was not forced."""


class BasisError(FpgreenError):
    """Operation applied to a polynomial in the wrong jet basis."""


class ParseError(FpgreenError):
    """Expression text could not be parsed."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class PotentialError(FpgreenError):
    """Invalid or inconsistent potential specification."""


class DistributionProductError(FpgreenError):
    """A coefficient would require the product of two singular factors.

    This occurs only beyond the validity cap of a discontinuous potential,
    where the expansion coefficients are genuinely ill-defined.
    """


class EvaluationDomainError(FpgreenError):
    """Evaluation requested at a point where the quantity is ambiguous."""


class ConvergenceError(FpgreenError):
    """A numerical procedure failed to converge within its budget."""


class UnsupportedDomainError(FpgreenError):
    """A closed-form evaluation was requested outside its supported domain."""
