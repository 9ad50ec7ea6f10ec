"""Exception types raised across the package."""

from __future__ import annotations


class BraidflipError(Exception):
    """Base class for all package errors."""


class DegenerateConfiguration(BraidflipError):
    """Four points cocircular/collinear, all points collinear, or duplicates.

    Signals that the queried time is singular; perturb it and retry.
    """


class NonGenericBraid(BraidflipError):
    """The motion has an event that is not a single Delaunay flip."""


class InvalidStrandSystem(BraidflipError, ValueError):
    """Trajectories are discontinuous, not closed, or collide."""


class InadmissibleTriple(BraidflipError, ValueError):
    pass


class InfiniteLabelSet(BraidflipError):
    """Coloring enumeration requested for a tuple without a finite label list."""


class PtolemyZeroDivision(BraidflipError, ZeroDivisionError):
    def __init__(self, message: str, event_index: int | None = None):
        super().__init__(message)
        self.event_index = event_index


class BasisMismatch(BraidflipError):
    """Consecutive operators do not share a coloring basis."""


class BraidFormatError(BraidflipError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
