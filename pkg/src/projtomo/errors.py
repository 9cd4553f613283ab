"""Exception hierarchy shared by every module."""


class ProjTomoError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(ProjTomoError, ValueError):
    """An argument lies outside the operation's domain."""


class ValidityError(DomainError):
    """Parameters fall outside the window where a bound is proven."""


class CapacityError(ProjTomoError):
    """The requested computation exceeds a configured size limit."""


class DegenerateRestrictionError(ProjTomoError):
    """Restriction onto a subspace that carries (numerically) no weight."""


class ProtocolViolationError(ProjTomoError):
    """A learner returned an estimate outside its declared error budget."""
