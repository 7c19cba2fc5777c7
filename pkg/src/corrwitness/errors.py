"""Exception hierarchy. Every error raised deliberately by the package
derives from :class:`CorrWitnessError`."""


class CorrWitnessError(Exception):
    pass


class DimensionMismatch(CorrWitnessError, ValueError):
    pass


class DimensionTooLarge(CorrWitnessError, ValueError):
    pass


class NotHermitian(CorrWitnessError, ValueError):
    pass


class ConvergenceFailure(CorrWitnessError, ArithmeticError):
    pass


class InvalidState(CorrWitnessError, ValueError):
    pass


class ZeroVector(InvalidState):
    pass


class InvalidAmplitudes(CorrWitnessError, ValueError):
    pass


class BoundViolation(CorrWitnessError, ArithmeticError):
    """A reduced trace-distance increase exceeded the inaccessible information.

    This can only happen through a numerical bug, never physically.
    """
