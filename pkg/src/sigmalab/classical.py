"""Classical Weierstrass machinery, independent of the theta-series results.

sigma via the canonical product, zeta via partial fractions, quasi-periods,
Eisenstein series and the pair ``(nu, mu)`` from the linear system
``nu*conj(omega_j) + mu*omega_j = eta_j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergentSumError, PoleError
from .lattice import Lattice, TruncationPolicy, lattice_arrays
from .summation import LatticeSumResult, extrapolated_shell_sum

__all__ = [
    "EllipticInvariants",
    "sigma_product",
    "zeta_series",
    "eisenstein",
    "invariants",
    "quasi_period",
    "sigma_reduced",
]

_NU_CHECK_TOL = 1e-8


@dataclass(frozen=True)
class EllipticInvariants:
    omega1: complex
    omega2: complex
    g2: complex
    g3: complex
    G: dict = field(hash=False)
    eta1: complex
    eta2: complex
    mu: complex
    nu: float
    nu_system: complex

    @property
    def legendre_residual(self) -> float:
        """``|eta1*omega2 - eta2*omega1 - 2*pi*i|``."""
        return abs(self.eta1 * self.omega2 - self.eta2 * self.omega1 - 2j * math.pi)

    def linear_system_residual(self) -> float:
        r1 = self.nu * self.omega1.conjugate() + self.mu * self.omega1 - self.eta1
        r2 = self.nu * self.omega2.conjugate() + self.mu * self.omega2 - self.eta2
        return max(abs(r1), abs(r2))

    @property
    def mu_closed_form(self) -> complex:
        """``(i/S)(zeta(omega1/2)conj(omega2) - zeta(omega2/2)conj(omega1))``."""
        S = (self.omega1.conjugate() * self.omega2).imag
        return 1j / S * (self.eta1 / 2 * self.omega2.conjugate() - self.eta2 / 2 * self.omega1.conjugate())


def _log_factor(u: np.ndarray) -> np.ndarray:
    """``log(1-u) + u + u**2/2`` without cancellation for small ``u``."""
    u = np.asarray(u, dtype=complex)
    small = np.abs(u) < 0.25
    out = np.empty_like(u)
    us = np.where(small, u, 0)
    # -sum_{j>=3} u^j/j, Horner; |u|^31/31 < 1e-19
    acc = np.zeros_like(us)
    for j in range(31, 2, -1):
        acc = acc * us + 1.0 / j
    out = np.where(small, -acc * us**3, 0)
    ub = np.where(small, 0, u)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = np.log(1 - ub) + ub + ub * ub / 2
    return np.where(small, out, big)


def _scalar_or_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def sigma_product(lat: Lattice, z, policy: TruncationPolicy) -> LatticeSumResult:
    """Weierstrass sigma from the canonical product.

    The product of the primary factors is accumulated as a sum of complex
    logarithms (log-modulus plus phase), shell by shell, and the slowly
    decaying tail (shell totals ``O(k**-3)``) is extrapolated. ``z`` may be an
    array. Exactly zero when ``z`` hits an enumerated lattice point.
    """
    zarr, scalar = _scalar_or_array(z)
    flat = zarr.reshape(-1)
    K = policy.shells_for_algebraic
    _, _, gamma, _, _ = lattice_arrays(lat, K)
    hits = np.any(flat[:, None] == gamma[None, :], axis=1) | (flat == 0)
    zs = np.where(hits, 0.5 * lat.omega1, flat)  # harmless placeholder
    res = extrapolated_shell_sum(lat, lambda g: _log_factor(zs[:, None] / g[None, :]), K, 3)
    value = np.where(hits, 0, zs * np.exp(res.value))
    value = value.reshape(zarr.shape)
    tail = float(np.max(np.abs(value))) * res.tail_estimate if value.size else 0.0
    raw = np.where(hits, 0, zs * np.exp(res.raw)).reshape(zarr.shape)
    if scalar:
        value, raw = complex(value), complex(raw)
    return LatticeSumResult(value=value, tail_estimate=tail, shells_used=K, raw=raw)


def zeta_series(lat: Lattice, z, policy: TruncationPolicy) -> LatticeSumResult:
    """Weierstrass zeta, ``1/z + sum' [1/(z-g) + 1/g + z/g**2]``.

    Each bracket equals ``z**2 / (g**2 (z - g))``, which is how it is
    evaluated. Raises :class:`PoleError` if ``z`` is an enumerated lattice
    point (including 0).
    """
    zarr, scalar = _scalar_or_array(z)
    flat = zarr.reshape(-1)
    K = policy.shells_for_algebraic
    _, _, gamma, _, _ = lattice_arrays(lat, K)
    scale = abs(lat.omega1) + abs(lat.omega2)
    dist = np.min(np.abs(flat[:, None] - gamma[None, :]), axis=1)
    if np.any(dist <= 1e-13 * scale):
        raise PoleError(f"zeta has a pole at lattice point(s) {flat[dist <= 1e-13 * scale]}")
    res = extrapolated_shell_sum(lat, lambda g: flat[:, None] ** 2 / (g**2 * (flat[:, None] - g)), K, 3)
    value = (1 / flat + res.value).reshape(zarr.shape)
    raw = (1 / flat + res.raw).reshape(zarr.shape)
    if scalar:
        value, raw = complex(value), complex(raw)
    return LatticeSumResult(value=value, tail_estimate=res.tail_estimate, shells_used=K, raw=raw)


def eisenstein(lat: Lattice, n: int, policy: TruncationPolicy) -> LatticeSumResult:
    """Eisenstein sum ``G_{2n} = sum' gamma**(-2n)``, ``n >= 2``.

    ``value`` is tail-extrapolated; ``raw`` is the plain truncated sum.
    """
    if n < 2:
        raise DivergentSumError(f"G_{2 * n} does not converge absolutely (need n >= 2)")
    K = policy.shells_for_algebraic
    res = extrapolated_shell_sum(lat, lambda g: g ** (-2 * n), K, 2 * n - 1)
    return res


def invariants(lat: Lattice, policy: TruncationPolicy = TruncationPolicy()) -> EllipticInvariants:
    """Quasi-periods, ``(nu, mu)``, ``g2``, ``g3`` and ``G_4 .. G_12``.

    ``(nu, mu)`` solve the 2x2 system; the solved ``nu`` must agree with
    ``pi/S`` (checked), and the exact ``pi/S`` is stored.
    """
    w1, w2 = lat.omega1, lat.omega2
    eta1 = 2 * complex(zeta_series(lat, w1 / 2, policy).value)
    eta2 = 2 * complex(zeta_series(lat, w2 / 2, policy).value)
    A = np.array([[w1.conjugate(), w1], [w2.conjugate(), w2]], dtype=complex)
    nu_sys, mu = np.linalg.solve(A, np.array([eta1, eta2]))
    nu = lat.nu
    if abs(nu_sys - nu) > _NU_CHECK_TOL * nu:
        raise ArithmeticError(f"linear-system nu={nu_sys} disagrees with pi/S={nu}")
    G = {2 * k: complex(eisenstein(lat, k, policy).value) for k in range(2, 7)}
    return EllipticInvariants(
        omega1=w1,
        omega2=w2,
        g2=60 * G[4],
        g3=140 * G[6],
        G=G,
        eta1=eta1,
        eta2=eta2,
        mu=complex(mu),
        nu=nu,
        nu_system=complex(nu_sys),
    )


def quasi_period(inv: EllipticInvariants, m, n):
    """``eta(m*omega1 + n*omega2) = m*eta1 + n*eta2``."""
    return m * inv.eta1 + n * inv.eta2


def sigma_reduced(lat: Lattice, z, policy: TruncationPolicy, inv: EllipticInvariants | None = None):
    """sigma via reduction to the cell centred at 0.

    ``z = z0 + gamma`` with ``z0`` in the centred cell, then
    ``sigma(z) = chi(gamma) exp((z0 + gamma/2) eta(gamma)) sigma(z0)``.
    Accepts arrays.
    """
    if inv is None:
        inv = invariants(lat, policy)
    zarr, scalar = _scalar_or_array(z)
    s, t = lat.coordinates(zarr)
    m, n = np.rint(s), np.rint(t)
    gamma = m * lat.omega1 + n * lat.omega2
    z0 = zarr - gamma
    base = np.asarray(sigma_product(lat, z0, policy).value)
    chi = np.where((m % 2 == 0) & (n % 2 == 0), 1.0, -1.0)
    out = chi * np.exp((z0 + gamma / 2) * quasi_period(inv, m, n)) * base
    return complex(out) if scalar else out
