"""Exception types raised across the package."""

from __future__ import annotations


class JacobiError(Exception):
    """Base class for every error raised by :mod:`jacobiheat`."""


class InputError(JacobiError, ValueError):
    """Malformed input: bad grid, wrong shapes, too few nodes."""


class DomainError(JacobiError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ParameterError(DomainError):
    """Inadmissible parameters, e.g. an order (alpha, beta) or a c-pole in 2F1."""


class PoleError(DomainError):
    """Evaluation at (or within tolerance of) a pole.

    Attributes
    ----------
    location : complex
        The pole that was hit.
    """

    def __init__(self, message: str, location: complex):
        super().__init__(message)
        self.location = location


class RangeError(JacobiError, OverflowError):
    """Result would overflow double precision.

    Attributes
    ----------
    exponent : float
        Real part of the dominating exponent (natural log of the magnitude).
    """

    def __init__(self, message: str, exponent: float):
        super().__init__(message)
        self.exponent = exponent


class AccuracyError(JacobiError, ArithmeticError):
    """A numerical procedure could not reach its tolerance.

    Attributes
    ----------
    partial : object
        Best value obtained.
    estimate : float
        Estimated error of ``partial``.
    """

    def __init__(self, message: str, partial=None, estimate: float = float("nan")):
        super().__init__(message)
        self.partial = partial
        self.estimate = estimate


class RegionError(DomainError):
    """Spectral parameter outside the region Omega_theta (strip condition violated)."""


class SlitError(DomainError):
    """Spectral parameter on the excluded real slit of Omega_theta."""
