"""Hermite-Gauss lattice series and the Weierstrass theta series.

Notation: ``e(gamma) = chi(gamma) |gamma|**2 exp(-nu |gamma|**2 / 2)``.

The combination ``mu**r F(-r; 3/2; y/mu)`` is a polynomial in ``mu`` and
``y``, ``sum_k c_k mu**(r-k) y**k``, and is always evaluated in that form.
It is regular at ``mu = 0``, where only the top term
``y**r (-1)**r / (3/2)_r`` survives.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DegenerateNormalizationError, ParameterError
from .lattice import Lattice, TruncationPolicy, lattice_arrays
from .summation import LatticeSumResult, gaussian_lattice_sum

__all__ = [
    "confluent_coefficients",
    "confluent_f",
    "scaled_confluent",
    "hermite_odd",
    "expand_exp_quadratic",
    "weight_map",
    "theta_w",
    "theta_w_prime",
    "theta_w_derivatives_at0",
    "conj_moment",
    "hermite_gauss_block",
    "hermite_gauss_prefactor",
    "h_r",
    "w_r_series_route",
    "sigma_series",
    "mu_series",
    "g2_g3_series",
    "poincare_periodize",
    "perelomov_check",
]

_SUPPORTED_C = {Fraction(1, 2), Fraction(3, 2)}


@lru_cache(maxsize=None)
def confluent_coefficients(r: int, c: Fraction = Fraction(3, 2)) -> tuple[Fraction, ...]:
    """Coefficients of the terminating series ``F(-r; c; x)`` in powers of x.

    ``x**k`` carries ``(-r)_k / ((c)_k k!)``.
    """
    if r < 0:
        raise ParameterError("r must be >= 0")
    c = Fraction(c)
    out = [Fraction(1)]
    for k in range(r):
        out.append(out[-1] * (k - r) / ((c + k) * (k + 1)))
    return tuple(out)


def confluent_f(r: int, c_num: int, c_den: int, x):
    """``F(-r; c_num/c_den; x)`` by Horner over exact coefficients."""
    c = Fraction(c_num, c_den)
    if c not in _SUPPORTED_C:
        raise ParameterError(f"c={c} not supported; use 1/2 or 3/2")
    coeffs = confluent_coefficients(r, c)
    x = np.asarray(x, dtype=complex)
    acc = np.zeros_like(x)
    for ck in reversed(coeffs):
        acc = acc * x + float(ck)
    return complex(acc) if acc.ndim == 0 else acc


def scaled_confluent(r: int, mu: complex, y, c: Fraction = Fraction(3, 2)):
    """``mu**r F(-r; c; y/mu)`` written as ``sum_k c_k mu**(r-k) y**k``."""
    coeffs = confluent_coefficients(r, Fraction(c))
    y = np.asarray(y, dtype=complex)
    acc = np.zeros_like(y)
    # Horner in y with mu powers attached: sum_k c_k mu^(r-k) y^k
    for k in range(r, -1, -1):
        acc = acc * y + float(coeffs[k]) * mu ** (r - k)
    return complex(acc) if acc.ndim == 0 else acc


def hermite_odd(r: int, z):
    """``H_{2r+1}(z) = (-1)**r (2r+1)!/r! * 2z * F(-r; 3/2; z**2)``."""
    z = np.asarray(z, dtype=complex)
    pref = (-1) ** r * math.factorial(2 * r + 1) / math.factorial(r)
    out = pref * 2 * z * confluent_f(r, 3, 2, z * z)
    return complex(out) if np.ndim(out) == 0 else out


def expand_exp_quadratic(a: complex, b: complex, max_power: int) -> list[complex]:
    """Taylor coefficients of ``exp(a z**2 + b z)`` through ``z**max_power``.

    Even powers: ``a**r/r! F(-r; 1/2; -b**2/(4a))``; odd powers:
    ``b a**r/r! F(-r; 3/2; -b**2/(4a))``.
    """
    if a == 0:
        raise ParameterError("a = 0: use b**k/k! directly")
    y = -b * b / 4
    out = []
    for p in range(max_power + 1):
        r, odd = divmod(p, 2)
        if odd:
            out.append(b * scaled_confluent(r, a, y, Fraction(3, 2)) / math.factorial(r))
        else:
            out.append(scaled_confluent(r, a, y, Fraction(1, 2)) / math.factorial(r))
    return out


def weight_map(lat: Lattice, gamma, chi=None):
    """``e(gamma) = |gamma|**2 chi(gamma) exp(-nu|gamma|**2/2)``."""
    gamma = np.asarray(gamma, dtype=complex)
    if chi is None:
        s, t = lat.coordinates(gamma)
        m, n = np.rint(s).astype(int), np.rint(t).astype(int)
        chi = np.where((m % 2 == 0) & (n % 2 == 0), 1.0, -1.0)
    a2 = np.abs(gamma) ** 2
    return a2 * chi * np.exp(-0.5 * lat.nu * a2)


def _zpoints(z):
    z = np.asarray(z, dtype=complex)
    return z.reshape(-1), z.shape


def _shape(value, shape):
    value = np.asarray(value).reshape(shape)
    return complex(value) if value.ndim == 0 else value


def theta_w(lat: Lattice, z, policy: TruncationPolicy) -> LatticeSumResult:
    """Weierstrass theta series ``sum chi g exp(-nu|g|^2/2 + nu z conj(g))``."""
    nu = lat.nu
    flat, shape = _zpoints(z)

    def term(g, chi):
        return chi * g * np.exp(-0.5 * nu * np.abs(g) ** 2 + nu * flat[:, None] * g.conj())

    res = gaussian_lattice_sum(lat, term, policy, degree=1, growth=nu * float(np.max(np.abs(flat), initial=0)))
    return LatticeSumResult(_shape(res.value, shape), res.tail_estimate, res.shells_used, abs_sum=res.abs_sum)


def theta_w_prime(lat: Lattice, z, policy: TruncationPolicy) -> LatticeSumResult:
    """z-derivative of :func:`theta_w`."""
    nu = lat.nu
    flat, shape = _zpoints(z)

    def term(g, chi):
        return chi * nu * np.abs(g) ** 2 * np.exp(-0.5 * nu * np.abs(g) ** 2 + nu * flat[:, None] * g.conj())

    res = gaussian_lattice_sum(lat, term, policy, degree=2, coef=nu, growth=nu * float(np.max(np.abs(flat), initial=0)))
    return LatticeSumResult(_shape(res.value, shape), res.tail_estimate, res.shells_used)


def conj_moment(lat: Lattice, k: int, policy: TruncationPolicy) -> LatticeSumResult:
    """``M_k = sum conj(g)**k e(g)``."""
    nu = lat.nu

    def term(g, chi):
        a2 = np.abs(g) ** 2
        return chi * g.conj() ** k * a2 * np.exp(-0.5 * nu * a2)

    return gaussian_lattice_sum(lat, term, policy, degree=k + 2)


def theta_w_derivatives_at0(lat: Lattice, max_j: int, policy: TruncationPolicy) -> list[complex]:
    """Odd derivatives ``theta_W^(2j+1)(0) = nu**(2j+1) M_{2j}``, j = 0..max_j."""
    nu = lat.nu
    return [nu ** (2 * j + 1) * complex(conj_moment(lat, 2 * j, policy).value) for j in range(max_j + 1)]


def hermite_gauss_block(lat: Lattice, mu: complex, r: int, policy: TruncationPolicy) -> LatticeSumResult:
    """``B_r = sum mu**r F(-r; 3/2; -nu**2 conj(g)**2/(2 mu)) e(g)``.

    The bare lattice sum, without the ``nu (2r+1)!/(2**r r!)`` prefactor.
    """
    nu = lat.nu
    coeffs = confluent_coefficients(r)
    coef = sum(abs(float(c)) * abs(mu) ** (r - k) * (nu * nu / 2) ** k for k, c in enumerate(coeffs))

    def term(g, chi):
        a2 = np.abs(g) ** 2
        y = -0.5 * nu * nu * g.conj() ** 2
        return chi * a2 * scaled_confluent(r, mu, y) * np.exp(-0.5 * nu * a2)

    return gaussian_lattice_sum(lat, term, policy, degree=2 + 2 * r, coef=max(coef, 1.0))


def hermite_gauss_prefactor(r: int) -> int:
    """``(2r+1)! / (2**r r!)``, the odd double factorial ``(2r+1)!!``."""
    return math.factorial(2 * r + 1) // (2**r * math.factorial(r))


def h_r(lat: Lattice, inv, r: int, policy: TruncationPolicy) -> LatticeSumResult:
    """Hermite-Gauss series ``H_r = nu (2r+1)!/(2**r r!) B_r``."""
    if r < 0:
        raise ParameterError("r must be >= 0")
    block = hermite_gauss_block(lat, inv.mu, r, policy)
    f = lat.nu * hermite_gauss_prefactor(r)
    return LatticeSumResult(
        value=f * block.value,
        tail_estimate=f * block.tail_estimate,
        shells_used=block.shells_used,
        abs_sum=f * block.abs_sum,
    )


def _checked_h0(lat, inv, policy) -> LatticeSumResult:
    h0 = h_r(lat, inv, 0, policy)
    if abs(h0.value) <= 1e3 * max(h0.tail_estimate, 1e-16 * h0.abs_sum):
        raise DegenerateNormalizationError(f"H_0 = {h0.value} is below the noise floor")
    return h0


def w_r_series_route(lat: Lattice, inv, r: int, policy: TruncationPolicy) -> complex:
    """``W_r = H_r / H_0``."""
    h0 = _checked_h0(lat, inv, policy)
    if r == 0:
        return 1.0 + 0j
    return complex(h_r(lat, inv, r, policy).value) / complex(h0.value)


def sigma_series(lat: Lattice, inv, z, policy: TruncationPolicy):
    """sigma from the theta series: ``exp(mu z**2/2) theta_W(z) / H_0``."""
    h0 = complex(_checked_h0(lat, inv, policy).value)
    z = np.asarray(z, dtype=complex)
    out = np.exp(0.5 * inv.mu * z * z) * np.asarray(theta_w(lat, z, policy).value) / h0
    return complex(out) if out.ndim == 0 else out


def mu_series(lat: Lattice, policy: TruncationPolicy) -> complex:
    """``mu = -(nu**2/3) M_2 / M_0``, a lattice-intrinsic formula for mu."""
    m2 = complex(conj_moment(lat, 2, policy).value)
    m0 = complex(conj_moment(lat, 0, policy).value)
    return -(lat.nu**2) / 3 * m2 / m0


def g2_g3_series(lat: Lattice, mu: complex, policy: TruncationPolicy) -> tuple[complex, complex]:
    """``g2 = -30 B_2/B_0`` and ``g3 = -(35/2) B_3/B_0``."""
    b0 = complex(hermite_gauss_block(lat, mu, 0, policy).value)
    b2 = complex(hermite_gauss_block(lat, mu, 2, policy).value)
    b3 = complex(hermite_gauss_block(lat, mu, 3, policy).value)
    return -30 * b2 / b0, -17.5 * b3 / b0


def poincare_periodize(
    lat: Lattice, f: Callable, z, policy: TruncationPolicy, *, growth: float = 0.0
) -> LatticeSumResult:
    """Poincare periodization ``sum chi(g) exp(-nu|g|^2/2 + nu z conj(g)) f(z - g)``.

    ``f`` must be entire with sub-Gaussian growth and accept arrays.
    ``growth`` is the declared exponential rate of ``|f|`` along rays, used
    only for the tail majorant.
    """
    nu = lat.nu
    flat, shape = _zpoints(z)

    def term(g, chi):
        zz = flat[:, None]
        with np.errstate(over="raise"):
            return chi * np.exp(-0.5 * nu * np.abs(g) ** 2 + nu * zz * g.conj()) * f(zz - g)

    zmax = float(np.max(np.abs(flat), initial=0))
    res = gaussian_lattice_sum(lat, term, policy, degree=4, growth=nu * zmax + growth)
    return LatticeSumResult(_shape(res.value, shape), res.tail_estimate, res.shells_used, abs_sum=res.abs_sum)


def perelomov_check(lat: Lattice, k_max: int, policy: TruncationPolicy) -> list[tuple[int, float]]:
    """``|sum chi(g) g**k exp(-nu|g|^2/2)|`` for k = 0..k_max (all vanish).

    The terms reach ~1e5 on coarse lattices, so they are formed in extended
    precision (``np.longdouble``, including ``nu``) to keep the cancellation
    residual far below double rounding of the individual terms.
    """
    m, n, _, chi, _ = lattice_arrays(lat, policy.max_shell)
    ld = np.longdouble
    w1r, w1i, w2r, w2i = (ld(x) for x in (lat.omega1.real, lat.omega1.imag, lat.omega2.real, lat.omega2.imag))
    gr = m * w1r + n * w2r
    gi = m * w1i + n * w2i
    nu = 4 * np.arctan(ld(1)) / (w1r * w2i - w1i * w2r)
    weight = chi * np.exp(-nu * (gr * gr + gi * gi) / 2)
    g = gr + 1j * gi.astype(np.clongdouble)
    power = np.ones_like(g)
    out = []
    for k in range(k_max + 1):
        # outermost shells first, smallest terms added first
        out.append((k, float(abs(np.sum((weight * power)[::-1])))))
        power = power * g
    return out
