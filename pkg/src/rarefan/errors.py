"""Semantic exception types shared across the package."""


class RarefanError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(RarefanError, ValueError):
    """A constructor or operation parameter violates its constraint."""


class DomainError(RarefanError, ValueError):
    """An evaluation point lies outside the natural domain of a map or law."""


class DriftError(DomainError):
    """The comparison walks do not both have strictly negative drift.

    Raised when the requested intensity sits at or outside the open interval
    where the supremum comparison is well posed.  The comparison law may be
    discontinuous at the boundary, so boundary inputs are refused rather than
    silently evaluated.
    """


class StabilityError(RarefanError, ValueError):
    """The queue implied by the boundary pattern is not positive recurrent."""


class UnsupportedTailError(RarefanError, ValueError):
    """A tail descriptor does not expose the quantity being asked for."""


class WindowExhaustedError(RarefanError, RuntimeError):
    """A simulated object left the finite window it was given."""


class PreconditionError(RarefanError, ValueError):
    """An operation precondition does not hold for the supplied arguments."""


class CancellationError(RarefanError, ArithmeticError):
    """A series evaluation lost too many digits to cancellation."""
