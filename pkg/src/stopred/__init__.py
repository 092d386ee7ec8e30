"""Stopping sets, stopping redundancy bounds, and the combinatorial designs behind them."""

from __future__ import annotations

from .errors import (
    BadDimension,
    BudgetExceeded,
    ConstructionError,
    EmptySet,
    NoSuchCodeword,
    PreconditionViolated,
    RowCapExceeded,
    SearchExhausted,
    StopredError,
    UnsupportedLength,
)

__version__ = "0.1.0"

__all__ = [
    "BadDimension",
    "BudgetExceeded",
    "ConstructionError",
    "EmptySet",
    "NoSuchCodeword",
    "PreconditionViolated",
    "RowCapExceeded",
    "SearchExhausted",
    "StopredError",
    "UnsupportedLength",
]
