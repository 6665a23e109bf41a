"""Exception types raised across the package."""

from __future__ import annotations


class AbcError(Exception):
    """Base class for all package errors."""


class DependentRows(AbcError, ValueError):
    """Lattice basis rows are linearly dependent."""


class ZeroDenominator(AbcError, ZeroDivisionError):
    """A continued fraction was requested for x/0."""


class IncompleteFactorization(AbcError):
    """Factoring gave up before the effort budget ran out.

    ``factored`` holds the prime powers found so far and ``cofactor`` the
    composite part that could not be split.
    """

    def __init__(self, n: int, factored, cofactor: int):
        self.n = n
        self.factored = factored
        self.cofactor = cofactor
        super().__init__(f"could not factor {n}: cofactor {cofactor} left unsplit")


class BoundsTooLarge(AbcError):
    """A smooth-number enumeration would exceed the member cap."""


class DegenerateRelation(AbcError, ValueError):
    """A relation vector has a zero entry, so it gives no triple."""


class RadicalIsOne(AbcError, ValueError):
    """log rad = 0, the metrics are undefined."""


class ParseError(AbcError, ValueError):
    """Malformed factored expression or fixture row."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class OutputUnwritable(AbcError, OSError):
    """The search output file cannot be opened for appending."""
