"""Exception types. Messages follow a fixed vocabulary so callers can match on them."""


class QpviError(Exception):
    """Base class for library errors."""


class DomainError(QpviError, ZeroDivisionError):
    """Division by a zero polynomial or evaluation at a pole."""


class ResonanceError(QpviError, ArithmeticError):
    pass


class PreconditionError(QpviError, ValueError):
    """An operation's documented precondition does not hold."""


class BasePointError(QpviError, ArithmeticError):
    pass


class InfiniteFieldError(QpviError, ArithmeticError):
    pass


class LeftOkamotoSpace(QpviError, RuntimeError):
    pass


class ConfluenceViolation(QpviError, AssertionError):
    pass


class ResourceCapError(QpviError, MemoryError):
    """Raised when a rational function exceeds the configured degree cap."""
