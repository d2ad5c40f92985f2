"""Gaussian-weight quadrature over the complex plane.

A :class:`QuadratureRule` approximates ``int_C g(w) exp(-nu|w|^2) dm(w)``
by ``sum_i weight_i g(node_i)``: a tensor product of Gauss-Hermite rules
rescaled by ``1/sqrt(nu)``. It is exact for polynomials in ``(w, conj(w))``
of degree ``< 2*order`` in each real coordinate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .classical import EllipticInvariants, sigma_reduced
from .hermite import hermite_gauss_prefactor, scaled_confluent
from .lattice import Lattice, TruncationPolicy, lattice_arrays
from .summation import neumaier_sum

__all__ = [
    "QuadratureRule",
    "build_rule",
    "integrate",
    "bargmann_reproduce",
    "sigma_at_nodes",
    "sigma_reproduce",
    "w_r_integral_route",
    "kernel_trace",
    "kernel_trace_terms",
    "g2_g3_integral_route",
]


@dataclass(frozen=True)
class QuadratureRule:
    nu: float
    order: int
    points: np.ndarray = field(repr=False, compare=False)
    weights: np.ndarray = field(repr=False, compare=False)

    @property
    def nodes(self) -> list[tuple[complex, float]]:
        return list(zip(self.points.tolist(), self.weights.tolist()))

    def __hash__(self):
        return hash((self.nu, self.order))

    def __eq__(self, other):
        return isinstance(other, QuadratureRule) and (self.nu, self.order) == (other.nu, other.order)


@lru_cache(maxsize=32)
def build_rule(nu: float, order: int) -> QuadratureRule:
    if order < 2:
        raise ValueError("order must be >= 2")
    if not nu > 0:
        raise ValueError("nu must be positive")
    t, wt = hermgauss(order)
    x = t / math.sqrt(nu)
    w = wt / math.sqrt(nu)
    X, Y = np.meshgrid(x, x, indexing="ij")
    W = np.outer(w, w)
    points = (X + 1j * Y).ravel()
    weights = W.ravel()
    points.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nu=float(nu), order=order, points=points, weights=weights)


def integrate(rule: QuadratureRule, values) -> complex | np.ndarray:
    """``sum_i weight_i values[..., i]``, compensated."""
    values = np.asarray(values)
    return neumaier_sum(values * rule.weights, axis=-1)


def _check_nu(rule: QuadratureRule, nu: float):
    if not math.isclose(rule.nu, nu, rel_tol=1e-12):
        raise ValueError(f"rule built for nu={rule.nu}, asked for nu={nu}")


def bargmann_reproduce(rule: QuadratureRule, nu: float, f, z):
    """``(nu/pi) int exp(nu z conj(w)) f(w) exp(-nu|w|^2) dm(w)``."""
    _check_nu(rule, nu)
    z = np.asarray(z, dtype=complex)
    flat = z.reshape(-1)
    w = rule.points
    vals = np.exp(nu * flat[:, None] * w.conj()[None, :]) * np.asarray(f(w))[None, :]
    out = (nu / math.pi * integrate(rule, vals)).reshape(z.shape)
    return complex(out) if out.ndim == 0 else out


@lru_cache(maxsize=16)
def _sigma_nodes(lat: Lattice, rule: QuadratureRule, policy: TruncationPolicy, inv: EllipticInvariants):
    vals = sigma_reduced(lat, rule.points, policy, inv)
    vals.setflags(write=False)
    return vals


def sigma_at_nodes(lat: Lattice, inv: EllipticInvariants, rule: QuadratureRule, policy: TruncationPolicy):
    """Classical sigma at the rule's nodes (cached per lattice, rule, policy)."""
    _check_nu(rule, lat.nu)
    return _sigma_nodes(lat, rule, policy, inv)


def sigma_reproduce(
    lat: Lattice, inv: EllipticInvariants, rule: QuadratureRule, z, policy: TruncationPolicy = TruncationPolicy()
):
    """``(nu/pi) e^{mu z^2/2} int e^{nu z conj(w) - mu w^2/2} sigma(w) e^{-nu|w|^2} dm``."""
    nu, mu = lat.nu, inv.mu
    w = rule.points
    sig = sigma_at_nodes(lat, inv, rule, policy)
    z = np.asarray(z, dtype=complex)
    flat = z.reshape(-1)
    vals = np.exp(nu * flat[:, None] * w.conj()[None, :] - 0.5 * mu * w * w) * sig
    out = (nu / math.pi * np.exp(0.5 * mu * flat**2) * integrate(rule, vals)).reshape(z.shape)
    return complex(out) if out.ndim == 0 else out


def _hermite_gauss_integral(lat, inv, rule, r, policy) -> complex:
    """``int conj(w) mu^r F(-r;3/2;-nu^2 conj(w)^2/(2mu)) e^{-mu w^2/2} sigma(w) e^{-nu|w|^2} dm``."""
    nu, mu = lat.nu, inv.mu
    w = rule.points
    sig = sigma_at_nodes(lat, inv, rule, policy)
    poly = scaled_confluent(r, mu, -0.5 * nu * nu * w.conj() ** 2)
    return complex(integrate(rule, w.conj() * poly * np.exp(-0.5 * mu * w * w) * sig))


def w_r_integral_route(
    lat: Lattice, inv: EllipticInvariants, rule: QuadratureRule, r: int, policy: TruncationPolicy = TruncationPolicy()
) -> complex:
    """``W_r = (nu^2/pi) (2r+1)!/(2^r r!) * Hermite-Gauss integral``."""
    nu = lat.nu
    return nu * nu / math.pi * hermite_gauss_prefactor(r) * _hermite_gauss_integral(lat, inv, rule, r, policy)


def g2_g3_integral_route(
    lat: Lattice, inv: EllipticInvariants, rule: QuadratureRule, policy: TruncationPolicy = TruncationPolicy()
) -> tuple[complex, complex]:
    """g2 and g3 from Hermite-Gauss integrals (prefactors -30 nu^2/pi, -35 nu^2/(2 pi)).

    The Gaussian factor is the convergent ``exp(-nu|w|^2)``.
    """
    nu = lat.nu
    i2 = _hermite_gauss_integral(lat, inv, rule, 2, policy)
    i3 = _hermite_gauss_integral(lat, inv, rule, 3, policy)
    return -30 * nu * nu / math.pi * i2, -35 * nu * nu / (2 * math.pi) * i3


def kernel_trace_terms(lat: Lattice, grid: int = 48, policy: TruncationPolicy = TruncationPolicy()):
    """Per-lattice-point contributions to the kernel trace over one cell.

    Returns ``(gammas, contributions)``; midpoint rule on a ``grid x grid``
    mesh of the cell ``{s omega1 + t omega2 : 0 <= s, t < 1}``.
    """
    nu, S = lat.nu, lat.cell_area
    u = (np.arange(grid) + 0.5) / grid
    s, t = np.meshgrid(u, u, indexing="ij")
    z = (s * lat.omega1 + t * lat.omega2).ravel()
    _, _, gamma, chi, _ = lattice_arrays(lat, policy.max_shell)
    # K(z,z) e^{-nu|z|^2} = (nu/pi) sum chi e^{-nu|g|^2/2 + nu(z conj(g) - conj(z) g)}
    phase = np.exp(nu * (z[:, None] * gamma.conj()[None, :] - z.conj()[:, None] * gamma[None, :]))
    per_point = neumaier_sum(phase, axis=0) / z.size * S
    contrib = nu / math.pi * chi * np.exp(-0.5 * nu * np.abs(gamma) ** 2) * per_point
    return gamma, contrib


def kernel_trace(lat: Lattice, grid: int = 48, policy: TruncationPolicy = TruncationPolicy()) -> float:
    """``int_cell K(z,z) e^{-nu|z|^2} dm(z)``; equals ``(nu/pi) S = 1``."""
    _, contrib = kernel_trace_terms(lat, grid, policy)
    return float(neumaier_sum(contrib[::-1]).real)
