"""Exact q-oscillator representations, R matrices and characters."""

from .errors import (
    EigenvalueMismatch,
    InsufficientCap,
    NonGeneric,
    NotSorted,
    PoleAtPoint,
    QoscError,
    WordMismatch,
)
from .scalar import RF_ONE, RF_ZERO, RatFunc, q_binom, q_fact, q_int, rf

__all__ = [
    "EigenvalueMismatch",
    "InsufficientCap",
    "NonGeneric",
    "NotSorted",
    "PoleAtPoint",
    "QoscError",
    "WordMismatch",
    "RatFunc",
    "RF_ONE",
    "RF_ZERO",
    "q_binom",
    "q_fact",
    "q_int",
    "rf",
]
