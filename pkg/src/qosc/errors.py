"""Exceptions shared across the package."""


class QoscError(Exception):
    """Base class for all package errors."""


class PoleAtPoint(QoscError, ArithmeticError):
    """Evaluation of a rational function at a zero of its denominator."""


class InsufficientCap(QoscError):
    """The degree cap D is too small to assert anything for some check."""


class NonGeneric(QoscError):
    """The intertwining system is not uniquely solvable at this point."""


class EigenvalueMismatch(QoscError):
    """A highest weight vector has an eigenvalue outside the predicted set."""


class WordMismatch(QoscError):
    """Two reduced words of the longest element gave different operators."""


class NotSorted(QoscError):
    """Tableau rows were not supplied in weakly increasing degree order."""
