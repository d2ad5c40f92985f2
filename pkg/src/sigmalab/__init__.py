"""Weierstrass sigma function via Hermite-Gauss lattice sums.

Classical lattice sums (Eisenstein series, quasi-periods, the canonical
product) are checked against a theta-series representation of sigma, its
exact Taylor recursion and a Gauss-Hermite reproducing-kernel quadrature.
"""
from .classical import EllipticInvariants, eisenstein, invariants, sigma_product, sigma_reduced, zeta_series
from .errors import (
    DegenerateLatticeError,
    DegenerateNormalizationError,
    DivergentSumError,
    ParameterError,
    PoleError,
    SigmaLabError,
    TableExhaustedError,
)
from .lattice import PANEL, PRESETS, Lattice, LatticePoint, TruncationPolicy, make_lattice, preset

__version__ = "0.1.0"

__all__ = [
    "EllipticInvariants",
    "Lattice",
    "LatticePoint",
    "TruncationPolicy",
    "PANEL",
    "PRESETS",
    "make_lattice",
    "preset",
    "invariants",
    "eisenstein",
    "sigma_product",
    "sigma_reduced",
    "zeta_series",
    "SigmaLabError",
    "DegenerateLatticeError",
    "DegenerateNormalizationError",
    "DivergentSumError",
    "ParameterError",
    "PoleError",
    "TableExhaustedError",
]
