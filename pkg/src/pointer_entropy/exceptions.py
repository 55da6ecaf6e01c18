"""Error types used across the library.

The distinction matters operationally: a DomainError means the caller asked
for something outside an operation's mathematical domain, while a
NumericalConsistencyError means an internal cross-check failed and the
result cannot be trusted.
"""


class PointerEntropyError(Exception):
    """Base class for all library-specific errors."""


class DomainError(PointerEntropyError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapabilityError(PointerEntropyError):
    """The request exceeds a supported size or truncation limit."""


class TruncationError(PointerEntropyError):
    """A grid clips off more probability mass than the accuracy budget allows."""

    def __init__(self, message: str, deficit: float):
        super().__init__(f"{message} (truncated mass {deficit:.3e})")
        self.deficit = deficit


class NumericalConsistencyError(PointerEntropyError):
    """An internal numerical cross-check failed beyond its tolerance."""


class SearchError(PointerEntropyError):
    """The optimizer hit a non-finite objective value mid-search.

    Carries the best point and value seen before the failure.
    """

    def __init__(self, message: str, best_point=None, best_value=None):
        super().__init__(message)
        self.best_point = best_point
        self.best_value = best_value


class NonConvergenceError(PointerEntropyError):
    """No optimizer restart converged.  Carries the best result found."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result
