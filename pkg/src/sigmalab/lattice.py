"""Lattices in the complex plane, sup-norm shell enumeration and the
Weierstrass pseudo-character.

A lattice is stored through an *oriented* basis, ``Im(omega2/omega1) > 0``.
Points are enumerated by shells ``max(|m|, |n|) = k``; shell ``k >= 1``
holds exactly ``8k`` points.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import DegenerateLatticeError

__all__ = [
    "Lattice",
    "LatticePoint",
    "TruncationPolicy",
    "PRESETS",
    "PANEL",
    "make_lattice",
    "preset",
    "chi_w",
    "enumerate_points",
    "theta_space_dimension",
    "shell_indices",
    "lattice_arrays",
    "shell_radius_lower_bound",
]


@dataclass(frozen=True)
class Lattice:
    """Lattice ``Z*omega1 + Z*omega2`` with an oriented basis.

    Use :func:`make_lattice` to build one from an arbitrary basis; the
    constructor itself rejects a negatively oriented basis.
    """

    omega1: complex
    omega2: complex

    def __post_init__(self):
        object.__setattr__(self, "omega1", complex(self.omega1))
        object.__setattr__(self, "omega2", complex(self.omega2))
        if self.omega1 == 0 or self.omega2 == 0:
            raise DegenerateLatticeError("basis vectors must be nonzero")
        if not (self.omega2 / self.omega1).imag > 0:
            raise DegenerateLatticeError(
                f"basis ({self.omega1}, {self.omega2}) is not oriented; "
                "use make_lattice() to normalize it"
            )

    @property
    def cell_area(self) -> float:
        """Area ``S = Im(conj(omega1) * omega2)`` of a fundamental cell."""
        return (self.omega1.conjugate() * self.omega2).imag

    @property
    def nu(self) -> float:
        """Magnitude ``pi / S``."""
        return math.pi / self.cell_area

    def point(self, m: int, n: int) -> "LatticePoint":
        return LatticePoint(m, n, m * self.omega1 + n * self.omega2)

    def coordinates(self, z):
        """Real coordinates ``(s, t)`` with ``z = s*omega1 + t*omega2``."""
        z = np.asarray(z, dtype=complex)
        w1, w2 = self.omega1, self.omega2
        det = (w1.conjugate() * w2).imag
        s = (z * w2.conjugate()).imag / -det
        t = (z * w1.conjugate()).imag / det
        return s, t


@dataclass(frozen=True)
class LatticePoint:
    m: int
    n: int
    gamma: complex

    @property
    def chi(self) -> int:
        return chi_w(self)


@dataclass(frozen=True)
class TruncationPolicy:
    """Truncation controls shared by every lattice sum.

    ``max_shell`` bounds the Gaussian-weighted sums. The algebraically
    decaying sums (Eisenstein series, the zeta partial fractions, the sigma
    product) use at least ``algebraic_shells`` shells followed by a fitted
    shell-asymptotic tail correction.
    """

    max_shell: int = 12
    target_tol: float = 1e-10
    algebraic_shells: int = 32

    def __post_init__(self):
        if self.max_shell < 0:
            raise ValueError("max_shell must be >= 0")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")
        if self.algebraic_shells < 1:
            raise ValueError("algebraic_shells must be >= 1")

    @property
    def shells_for_algebraic(self) -> int:
        return max(self.max_shell, self.algebraic_shells)


def make_lattice(omega1: complex, omega2: complex) -> Lattice:
    """Build a lattice from any basis, swapping it into positive orientation."""
    omega1, omega2 = complex(omega1), complex(omega2)
    if omega1 == 0 or omega2 == 0:
        raise DegenerateLatticeError("basis vectors must be nonzero")
    orient = (omega2 / omega1).imag
    # relative test: collinear up to rounding is still degenerate
    if abs(orient) <= 1e-14 * abs(omega2 / omega1):
        raise DegenerateLatticeError(f"collinear basis ({omega1}, {omega2})")
    if orient < 0:
        omega1, omega2 = omega2, omega1
    return Lattice(omega1, omega2)


PRESETS = {
    "square": (1.0, 1j),
    "hexagonal": (1.0, cmath.exp(1j * math.pi / 3)),
    "generic": (1.0, 0.3 + 1.2j),
    "generic_scaled": (2.0, 0.6 + 2.4j),
}

# Audit panel, in report order.
PANEL = ("square", "hexagonal", "generic", "generic_scaled")


def preset(name: str) -> Lattice:
    try:
        return make_lattice(*PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown lattice preset {name!r}; choose from {sorted(PRESETS)}") from None


def chi_w(p: LatticePoint) -> int:
    """Weierstrass pseudo-character: +1 iff ``gamma/2`` lies in the lattice."""
    return 1 if (p.m % 2 == 0 and p.n % 2 == 0) else -1


@lru_cache(maxsize=None)
def shell_indices(k: int) -> np.ndarray:
    """Integer pairs ``(m, n)`` with ``max(|m|, |n|) = k`` in a fixed order.

    Order: bottom row left to right, then the right column upwards, the top
    row right to left and the left column downwards (counter-clockwise).
    """
    if k < 0:
        raise ValueError("shell index must be >= 0")
    if k == 0:
        out = np.zeros((1, 2), dtype=np.int64)
    else:
        r = np.arange(-k, k, dtype=np.int64)
        bottom = np.stack([r, np.full_like(r, -k)], axis=1)
        right = np.stack([np.full_like(r, k), r], axis=1)
        top = np.stack([-r, np.full_like(r, k)], axis=1)
        left = np.stack([np.full_like(r, -k), -r], axis=1)
        out = np.concatenate([bottom, right, top, left])
    out.setflags(write=False)
    return out


def enumerate_points(lat: Lattice, policy: TruncationPolicy | int) -> list[LatticePoint]:
    """All points with ``max(|m|, |n|) <= max_shell``, grouped by shell."""
    max_shell = policy if isinstance(policy, int) else policy.max_shell
    return list(_iter_points(lat, max_shell))


def _iter_points(lat: Lattice, max_shell: int) -> Iterator[LatticePoint]:
    for k in range(max_shell + 1):
        for m, n in shell_indices(k):
            yield lat.point(int(m), int(n))


@lru_cache(maxsize=64)
def lattice_arrays(lat: Lattice, max_shell: int):
    """Vectorized enumeration up to ``max_shell``.

    Returns ``(m, n, gamma, chi, shell)`` as read-only arrays, in the same
    order as :func:`enumerate_points`.
    """
    idx = np.concatenate([shell_indices(k) for k in range(max_shell + 1)])
    m, n = idx[:, 0], idx[:, 1]
    gamma = m * lat.omega1 + n * lat.omega2
    chi = np.where((m % 2 == 0) & (n % 2 == 0), 1.0, -1.0)
    shell = np.concatenate(
        [np.full(len(shell_indices(k)), k, dtype=np.int64) for k in range(max_shell + 1)]
    )
    arrays = (m, n, gamma, chi, shell)
    for a in arrays:
        a.setflags(write=False)
    return arrays


def shell_radius_lower_bound(lat: Lattice) -> float:
    """``lam`` such that every point of shell ``k`` has ``|gamma| >= k*lam``.

    ``lam`` is the distance from 0 to the boundary of the parallelogram
    ``{s*omega1 + t*omega2 : max(|s|, |t|) = 1}``.
    """
    w1, w2 = lat.omega1, lat.omega2
    best = math.inf
    # four edges: +-omega1 + t*omega2 and s*omega1 +- omega2, |s|,|t| <= 1
    for base, direction in ((w1, w2), (-w1, w2), (w2, w1), (-w2, w1)):
        d2 = abs(direction) ** 2
        t = -((base * direction.conjugate()).real) / d2
        t = min(1.0, max(-1.0, t))
        best = min(best, abs(base + t * direction))
    return best


def theta_space_dimension(lat: Lattice) -> float:
    """Dimension ``(nu/pi) * S`` of the space of (Gamma, chi_W)-theta functions."""
    return lat.nu / math.pi * lat.cell_area
