"""Exception types shared across the library."""


class PolyselError(Exception):
    """Base class for all polysel errors."""


class DimensionMismatchError(PolyselError):
    """A point or vector does not match the ambient dimension."""


class ZeroPolynomialError(PolyselError):
    """The operation needs a nonzero polynomial."""


class DegenerateInstanceError(PolyselError):
    """Two candidate polynomials are identical; collapse duplicates first."""


class InconsistentValueError(PolyselError):
    """A claimed selection value does not match any candidate at the point."""


class SelectionSpecError(PolyselError):
    """Malformed or incompatible selection specification."""


class MinNormConvergenceError(PolyselError):
    """Nearest-point iteration hit its cap; carries the best iterate found."""

    def __init__(self, message, best=None, violation=None):
        super().__init__(message)
        self.best = best
        self.violation = violation


class SubsetGuardError(PolyselError):
    """Too many polynomials for exhaustive active-set enumeration."""


class NonIsolatedCriticalSetError(PolyselError):
    """A stratum contains a continuum of stationary points."""


class NotCriticalError(PolyselError):
    """The point is not a stationary point of the given selection."""


class EmptySublevelSetError(PolyselError):
    """The selection is everywhere positive; no sublevel set to measure."""


class CenterNotZeroError(PolyselError):
    """The expansion center must be a zero of the selection."""


class InstanceFormatError(PolyselError):
    """Malformed instance file or record."""
