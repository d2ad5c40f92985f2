"""Exception types raised across the package."""


class SigmaLabError(Exception):
    """Base class for all package errors."""


class DegenerateLatticeError(SigmaLabError, ValueError):
    """Basis vectors are zero or collinear."""


class PoleError(SigmaLabError, ValueError):
    """Evaluation point coincides with a pole (a lattice point)."""


class DivergentSumError(SigmaLabError, ValueError):
    """Requested lattice sum does not converge absolutely."""


class ParameterError(SigmaLabError, ValueError):
    """Argument outside the supported parameter range."""


class TableExhaustedError(SigmaLabError, IndexError):
    """Requested index exceeds a precomputed table."""


class DegenerateNormalizationError(SigmaLabError, ArithmeticError):
    """A normalizing lattice sum is indistinguishable from zero."""
