"""Lattice-sum accumulation shared by every module.

Two regimes occur:

* Gaussian-weighted sums (theta series, Hermite-Gauss series) converge
  super-exponentially. They are summed shell by shell up to
  ``policy.max_shell`` with an explicit majorant for the omitted tail.
* Algebraically decaying sums (Eisenstein series, zeta partial fractions,
  the sigma product) converge like a power of the shell index. Their shell
  totals have an Euler-Maclaurin expansion ``s_k ~ sum_j c_j k**-(p + 2j)``
  (the shells are trapezoidal rules on a parallelogram boundary), so the
  tail is fitted from the outer shells and summed with Hurwitz zeta values.

All accumulation is compensated (Neumaier) and runs in a fixed order,
outermost shell first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .lattice import Lattice, TruncationPolicy, lattice_arrays, shell_radius_lower_bound

__all__ = [
    "LatticeSumResult",
    "neumaier_sum",
    "gaussian_tail_bound",
    "gaussian_lattice_sum",
    "extrapolated_shell_sum",
]


@dataclass(frozen=True)
class LatticeSumResult:
    """Value of a truncated lattice sum.

    ``tail_estimate`` bounds (Gaussian sums) or estimates (extrapolated
    sums) the modulus of what the truncation leaves out. ``raw`` is the
    plain truncated sum before extrapolation and ``abs_sum`` the sum of term
    moduli, the natural noise scale for cancellation checks.
    """

    value: complex | np.ndarray
    tail_estimate: float
    shells_used: int
    raw: complex | np.ndarray | None = None
    abs_sum: float | np.ndarray | None = None

    def __complex__(self):
        return complex(self.value)


def neumaier_sum(a, axis: int = -1):
    """Compensated sum of a (complex) array along ``axis``, in index order."""
    a = np.moveaxis(np.asarray(a), axis, 0)
    if a.shape[0] == 0:
        return np.zeros(a.shape[1:], dtype=a.dtype)
    if a.ndim == 1:
        if np.iscomplexobj(a):
            return complex(math.fsum(a.real), math.fsum(a.imag))
        return math.fsum(a)
    s = a[0].copy()
    c = np.zeros_like(s)
    for x in a[1:]:
        t = s + x
        c += _twosum_err(s, x, t)
        s = t
    return s + c


def _twosum_err(s, x, t):
    if np.iscomplexobj(t):
        return _twosum_err(s.real, x.real, t.real) + 1j * _twosum_err(s.imag, x.imag, t.imag)
    big = np.abs(s) >= np.abs(x)
    return np.where(big, (s - t) + x, (x - t) + s)


def gaussian_tail_bound(
    lat: Lattice,
    last_shell: int,
    *,
    degree: float = 0.0,
    growth: float = 0.0,
    coef: float = 1.0,
) -> float:
    """Majorant of ``sum_{shell > last_shell} |term|``.

    Assumes ``|term(gamma)| <= coef * |gamma|**degree * exp(-nu|gamma|^2/2 +
    growth*|gamma|)`` for ``|gamma| >= 1``. Every point of shell ``k`` has
    ``|gamma| >= k*lam``, and the envelope is decreasing beyond its peak, so
    each shell is bounded by ``8k`` times the envelope at
    ``max(k*lam, peak)``.
    """
    nu = lat.nu
    lam = shell_radius_lower_bound(lat)
    peak = (growth + math.sqrt(growth * growth + 4 * nu * degree)) / (2 * nu)
    total = 0.0
    k = last_shell + 1
    while True:
        r = max(k * lam, peak, 1.0)
        log_env = degree * math.log(r) - 0.5 * nu * r * r + growth * r
        term = 8 * k * coef * math.exp(log_env) if log_env > -745 else 0.0
        total += term
        if k * lam > peak and (term == 0.0 or term < 1e-17 * total):
            break
        k += 1
    return total


def gaussian_lattice_sum(
    lat: Lattice,
    term: Callable[[np.ndarray, np.ndarray], np.ndarray],
    policy: TruncationPolicy,
    *,
    degree: float = 0.0,
    growth: float = 0.0,
    coef: float = 1.0,
) -> LatticeSumResult:
    """Sum ``term(gamma, chi)`` over shells ``0..policy.max_shell``.

    ``term`` receives 1-D arrays of lattice points and characters and returns
    values of shape ``(..., npoints)``; leading axes are kept (vectorized
    evaluation points). Summation stops early once a shell's largest term
    and the tail majorant both fall below ``target_tol / 10``.
    """
    _, _, gamma, chi, _ = lattice_arrays(lat, policy.max_shell)
    stop = policy.target_tol / 10
    shell_sums, abs_sums = [], []
    used = policy.max_shell
    for k in range(policy.max_shell + 1):
        sl = slice(*_shell_slice(k))
        vals = np.asarray(term(gamma[sl], chi[sl]))
        shell_sums.append(neumaier_sum(vals, axis=-1))
        absv = np.abs(vals)
        abs_sums.append(neumaier_sum(absv, axis=-1))
        if k >= 1 and np.max(absv) < stop:
            if gaussian_tail_bound(lat, k, degree=degree, growth=growth, coef=coef) < stop:
                used = k
                break
    value = neumaier_sum(np.stack(shell_sums[::-1]), axis=0)
    abs_total = neumaier_sum(np.stack(abs_sums[::-1]), axis=0)
    tail = gaussian_tail_bound(lat, used, degree=degree, growth=growth, coef=coef)
    return LatticeSumResult(value=value, tail_estimate=tail, shells_used=used, raw=value, abs_sum=abs_total)


def _fit_tail(shell_sums: np.ndarray, leading_power: int, nterms: int, nfit: int):
    """Fit ``s_k = sum_j c_j k**-(p+2j)`` on the last ``nfit`` shells and
    return the summed tail ``sum_{k>K} s_k`` (shape of one shell total)."""
    K = shell_sums.shape[0]
    ks = np.arange(K - nfit + 1, K + 1, dtype=float)
    powers = [leading_power + 2 * j for j in range(nterms)]
    # scaled columns keep the least-squares problem well conditioned
    design = np.stack([ks ** (leading_power - p) for p in powers], axis=1)
    rhs = shell_sums[-nfit:].reshape(nfit, -1) * ks[:, None] ** leading_power
    coeffs, *_ = np.linalg.lstsq(design.astype(complex), rhs.astype(complex), rcond=None)
    zetas = np.array([hurwitz_zeta(p, K + 1) for p in powers])
    tail = zetas @ coeffs
    return tail.reshape(shell_sums.shape[1:])


def extrapolated_shell_sum(
    lat: Lattice,
    term: Callable[[np.ndarray], np.ndarray],
    shells: int,
    leading_power: int,
    *,
    nterms: int = 4,
    nfit: int = 10,
) -> LatticeSumResult:
    """Sum ``term(gamma)`` over shells ``1..shells`` plus a fitted tail.

    The origin is excluded. ``leading_power`` is the decay exponent ``p`` of
    the shell totals, ``s_k = O(k**-p)``. The tail estimate is the change in
    the extrapolated value when one fewer asymptotic term is fitted.
    """
    if shells < 4:
        raise ValueError("extrapolation needs at least 4 shells")
    _, _, gamma, _, _ = lattice_arrays(lat, shells)
    sums = np.stack(
        [neumaier_sum(np.asarray(term(gamma[slice(*_shell_slice(k))])), axis=-1) for k in range(1, shells + 1)]
    )
    raw = neumaier_sum(sums[::-1], axis=0)
    nfit = min(nfit, shells - 2)
    nterms = min(nterms, max(1, nfit - 2))
    tail = _fit_tail(sums, leading_power, nterms, nfit)
    value = raw + tail
    if nterms > 1:
        coarse = raw + _fit_tail(sums, leading_power, nterms - 1, nfit)
        err = float(np.max(np.abs(value - coarse)))
    else:
        err = float(np.max(np.abs(tail)))
    if np.ndim(value) == 0:
        value, raw = complex(value), complex(raw)
    return LatticeSumResult(value=value, tail_estimate=err, shells_used=shells, raw=raw)


def _shell_slice(k: int) -> tuple[int, int]:
    """Index range of shell ``k`` inside :func:`lattice_arrays` output."""
    if k == 0:
        return 0, 1
    start = (2 * k - 1) ** 2
    return start, start + 8 * k
