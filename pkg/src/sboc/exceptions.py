"""Exception hierarchy. Every error raised on purpose derives from SbocError."""


class SbocError(Exception):
    pass


class OutOfBounds(SbocError, ValueError):
    pass


class EmptyDataset(SbocError, ValueError):
    pass


class DimensionUnsupported(SbocError, ValueError):
    pass


class TooFewPoints(SbocError, ValueError):
    pass


class SingularSystem(SbocError, ArithmeticError):
    pass


class IllConditioned(SbocError, ArithmeticError):
    pass


class DegenerateSpread(SbocError):
    pass


class BelowOptimum(SbocError, ValueError):
    pass


class ObjectiveFailure(SbocError):
    """The objective raised or returned a non-finite value.

    ``partial`` holds the RunResult accumulated before the failure, when the
    failure happened inside an engine run.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SurrogateFailure(SbocError):
    pass


class BlackBoxError(ObjectiveFailure):
    pass


class Timeout(BlackBoxError):
    pass


class NonNumericOutput(BlackBoxError):
    pass


class NonZeroExit(BlackBoxError):
    pass
