"""Exception hierarchy shared by every module."""

from __future__ import annotations


class MatroidError(Exception):
    """Base class for all errors raised by matroidlab."""


class InputError(MatroidError, ValueError):
    """Malformed input: out-of-range edges, bad DSL, mismatched ground sets."""


class PreconditionError(InputError):
    """An operation was called outside its documented precondition.

    ``wave`` carries a witness set when the failed precondition is a
    wave condition (for example a nontrivial largest wave).
    """

    def __init__(self, message: str, wave: frozenset[int] | None = None):
        super().__init__(message)
        self.wave = wave


class CapacityError(MatroidError):
    """A brute-force routine was asked to run above its size bound."""

    def __init__(self, message: str, bound: int):
        super().__init__(message)
        self.bound = bound


class TheoryViolation(MatroidError, AssertionError):
    """A run-time check of a proven statement failed.

    Raised when, for instance, an augmentation does not preserve the arcs
    it must, or a common base that must exist is not found.  Seeing one
    means an implementation bug (or a broken oracle), never bad input.
    """
