"""Exception hierarchy shared by every module of the package."""


class ProlateError(Exception):
    """Base class for all errors raised by :mod:`prolate`."""


class DomainError(ProlateError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(ProlateError, ValueError):
    """A request falls outside the range covered by the available data."""


class BracketError(ProlateError, ValueError):
    """Root bracket without a sign change."""


class FormatError(ProlateError, ValueError):
    """Malformed input file. ``line`` is 1-based, ``None`` for whole-file problems."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class AccuracyError(ProlateError, ArithmeticError):
    """Requested accuracy not reached.

    The best available estimate and its error bound are attached so callers
    can decide whether to accept them.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class IntegrationError(ProlateError, ArithmeticError):
    """ODE integration broke down; ``last_x`` is the last accepted abscissa."""

    def __init__(self, message, last_x=None):
        super().__init__(message)
        self.last_x = last_x
