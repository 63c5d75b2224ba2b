"""Exception hierarchy shared by every module."""


class ArtinError(Exception):
    pass


class DomainError(ArtinError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ResourceError(ArtinError):
    """A request would exceed a configured memory or enumeration cap."""


class InternalError(ArtinError, AssertionError):
    """A consistency check failed; indicates a bug rather than bad input."""


class PoleError(DomainError, ZeroDivisionError):
    """Evaluation of a rational function at a root of its denominator."""


class PoleAtOrigin(PoleError):
    pass


class PoleAtPoint(PoleError):
    pass


class MismatchError(ArtinError, ValueError):
    """Two tables describe different bases or statistics."""
