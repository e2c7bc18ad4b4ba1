class RadoError(Exception):
    """Base class for all package errors."""


class InputError(RadoError, ValueError):
    """Malformed arguments: bad index sets, dimension mismatches, parse errors."""


class NotRadoError(RadoError):
    """A matrix failed Rado validation (not partition-regular, redundant, degenerate density)."""


class OrderingError(RadoError):
    """m(A) < m(B) where the caller promised m(A) >= m(B)."""


class GuardError(RadoError):
    """A size or memory guard refused the computation."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
