"""Exception hierarchy.

``DomainError`` subclasses signal bad input (CLI exit 1);
``VerificationError`` subclasses signal a failed mathematical check (exit 2).
"""


class QDimerError(Exception):
    """Base class for all package errors."""


class DomainError(QDimerError):
    """Invalid domain or usage."""


class ContainmentViolated(DomainError):
    pass


class NotSimplyConnected(DomainError):
    pass


class NotTileable(DomainError):
    pass


class SlopeCycleViolated(DomainError):
    pass


class UnsupportedMove(DomainError):
    pass


class ParamMismatch(DomainError):
    pass


class NotAdjacent(DomainError):
    pass


class VerificationError(QDimerError):
    """A computed structure disagrees with its predicted shape."""


class Singular(VerificationError):
    pass


class SurjectivityFailed(VerificationError):
    pass


class NongenericQ(VerificationError):
    """Raised with the observed resolution data attached, if any."""

    def __init__(self, message: str, observed=None):
        super().__init__(message)
        self.observed = observed


class DecompositionMismatch(VerificationError):
    pass


class NotFound(VerificationError):
    pass
