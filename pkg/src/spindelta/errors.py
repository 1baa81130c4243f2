"""Exception types shared across the package."""


class SpinDeltaError(Exception):
    """Base class for all errors raised by spindelta."""


class SingularMatrix(SpinDeltaError, ArithmeticError):
    """A pivot fell below the relative tolerance during inversion."""


class NoConvergence(SpinDeltaError, ArithmeticError):
    """An eigensolver could not meet its residual contract."""


class DimensionMismatch(SpinDeltaError, ValueError):
    pass


class IndexOutOfRange(SpinDeltaError, IndexError):
    pass


class DegenerateMomenta(SpinDeltaError, ValueError):
    pass


class PathInconsistency(SpinDeltaError, ArithmeticError):
    """Two factorizations of the same permutation gave different amplitudes.

    Carries the relative defect so callers can report it.
    """

    def __init__(self, message, defect=float("nan")):
        super().__init__(message)
        self.defect = defect


class OnContactPlane(SpinDeltaError, ValueError):
    pass


class NoSimultaneousEigenvector(SpinDeltaError, ArithmeticError):
    pass


class GridTooCoarse(SpinDeltaError, ValueError):
    pass


class ParseError(SpinDeltaError, ValueError):
    pass
