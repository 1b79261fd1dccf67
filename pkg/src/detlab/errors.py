"""Exception hierarchy shared by every detlab module."""


class DetlabError(Exception):
    """Base class for all detlab errors."""


class ContextError(DetlabError):
    """Polynomials or ideals living over different variable tables were mixed."""


class DomainError(DetlabError, ValueError):
    """An operation was asked for a value it is undefined on (zero polynomial, unit ideal, ...)."""


class NotDivisible(DetlabError):
    """Raised by exact division when the divisor does not divide the dividend."""


class SpecError(DetlabError, ValueError):
    """A matrix specification or scenario configuration is invalid."""


class RetryWithNewPrime(DetlabError):
    """A coefficient denominator vanishes modulo the chosen prime."""


class BudgetExceeded(DetlabError):
    """A computation hit its resource cap. This is not a mathematical failure."""

    def __init__(self, message, *, what=None):
        super().__init__(message)
        self.what = what


class InternalInconsistency(DetlabError):
    """Exact and probabilistic evidence disagree; treated as fatal."""
