"""Exception hierarchy shared by all modules."""


class InfoOrderError(Exception):
    """Base class for package errors."""


class ValidationError(InfoOrderError, ValueError):
    """An object violates its invariants (non-stochastic row, negative mass, ...)."""


class DimensionError(ValidationError):
    """Label sets or tensor shapes do not line up."""


class PriorMismatchError(ValidationError):
    """Two measures that must share the state prior do not."""


class AbsoluteContinuityError(ValidationError):
    """Positive joint mass where the reference product measure vanishes."""


class DegenerateDensityError(ValidationError):
    """A quantized density row integrates to a non-positive number."""


class ArithmeticFailure(InfoOrderError, ArithmeticError):
    """The float LP path stalled or lost accuracy; rerun in rational mode."""


class NotApplicableError(InfoOrderError):
    """An operation was called outside its precondition (e.g. witness on ordered inputs)."""
