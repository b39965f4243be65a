"""Exception hierarchy shared by all modules."""


class PointProcessError(Exception):
    """Base class for every error raised by this package."""


class PatternError(PointProcessError, ValueError):
    pass


class DuplicateTime(PatternError):
    pass


class OutOfWindow(PatternError):
    pass


class MixedMarks(PatternError):
    pass


class NonFiniteValue(PatternError):
    pass


class ModelSpecError(PointProcessError, ValueError):
    """Invalid model family, parameter name or parameter value."""


class UnmarkedModel(PointProcessError, TypeError):
    pass


class MarkMismatch(PointProcessError, ValueError):
    pass


class NumericalError(PointProcessError, ArithmeticError):
    """Base class for failures of the numerical machinery."""


class NonFiniteResult(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class EventCapExceeded(NumericalError):
    pass


class InvalidEnvelope(NumericalError):
    pass


class QuadratureFailure(NumericalError):
    pass


class NonFiniteObjectiveAtStart(NumericalError):
    pass


class EmptySample(PointProcessError, ValueError):
    pass


class ReplicateError(PointProcessError):
    """Wraps an error raised while simulating one replicate of a batch."""

    def __init__(self, index, error):
        super().__init__(f"replicate {index}: {type(error).__name__}: {error}")
        self.index = index
        self.error = error
