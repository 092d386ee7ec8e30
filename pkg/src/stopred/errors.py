"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes): precondition
failures, which mean the input is outside an operation's domain, and budget
failures, which mean the input is valid but the requested enumeration or
search is too large for the configured cap.
"""

from __future__ import annotations


class StopredError(Exception):
    pass


class PreconditionViolated(StopredError, ValueError):
    pass


class UnsupportedLength(PreconditionViolated):
    pass


class BadDimension(PreconditionViolated):
    pass


class EmptySet(PreconditionViolated):
    pass


class NoSuchCodeword(PreconditionViolated):
    pass


class BudgetExceeded(StopredError):
    pass


class SearchExhausted(BudgetExceeded):
    pass


class RowCapExceeded(BudgetExceeded):
    pass


class ConstructionError(StopredError, AssertionError):
    """A built-in construction failed its own self-check (an implementation bug)."""
