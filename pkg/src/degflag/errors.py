"""Exception hierarchy shared by all modules."""


class DegFlagError(Exception):
    """Base class for library errors."""


class InvalidRankError(DegFlagError, ValueError):
    pass


class StructuralError(DegFlagError, ValueError):
    """Input is malformed (wrong set size, support, dimension or shape)."""


class PreconditionError(DegFlagError, ValueError):
    """Input is well-formed but violates an operation's precondition."""


class CapacityError(DegFlagError):
    """A configured size guard was exceeded."""


class ResampleRequired(DegFlagError, ZeroDivisionError):
    """An evaluation point makes some denominator vanish."""


class InternalConsistencyError(DegFlagError, AssertionError):
    """A result that is guaranteed by theory failed to materialise."""
