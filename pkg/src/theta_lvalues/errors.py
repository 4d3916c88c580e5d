"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation supports."""


class TruncationError(ValueError):
    """A coefficient was requested at or beyond a series' truncation order."""


class PrecisionError(ArithmeticError):
    """A numeric routine failed to reach the requested accuracy.

    Callers may retry with a larger working precision.
    """


class WrongFamilyError(ValueError):
    """A Jacobi routine got a Borwein kind or vice versa."""


class PatternError(ValueError):
    """Parameters do not have the shape a summation theorem requires."""


class UnsupportedEntryError(ValueError):
    """No symbolic reduction is implemented for this catalog entry."""


class DivergenceError(DomainError):
    """A hypergeometric series does not converge at the requested argument."""
