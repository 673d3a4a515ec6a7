"""Exception types shared across the package."""


class VarboundError(Exception):
    """Base class for all package-specific errors."""


class HermiticityError(VarboundError):
    """Input matrix deviates from its conjugate transpose beyond tolerance."""


class DimensionMismatchError(VarboundError):
    """Operators or states of incompatible dimensions were combined."""


class EigenConvergenceError(VarboundError):
    """The dense eigensolver failed to converge (pathological conditioning)."""


class GridCoverageError(VarboundError):
    """A sector grid does not contain every eigenvalue of the target operator."""


class GridCapError(VarboundError):
    """Grid refinement hit the size cap before reaching the requested error."""

    def __init__(self, message, achieved_error=None):
        super().__init__(message)
        self.achieved_error = achieved_error


class OriginNotInteriorError(VarboundError):
    """The origin is not interior to the numerical range, so the dual set is unbounded."""


class BudgetExceededError(VarboundError):
    """Symbolic computation exceeded the configured term or degree budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ZeroResultantError(VarboundError):
    """The resultant vanished identically: the inputs share a common factor."""


class ReconstructionError(VarboundError):
    """Rational coefficient recovery failed (insufficient precision or irrational data)."""


class CertificationError(VarboundError):
    """No isolated root of the eliminant could be certified against the numeric bound."""

    def __init__(self, message, candidates=None, numeric_value=None):
        super().__init__(message)
        self.candidates = candidates or []
        self.numeric_value = numeric_value
