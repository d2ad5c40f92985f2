"""Eisenstein series from the odd Taylor coefficients of the theta series.

With ``X_j = theta_W^(2j+1)(0) / ((2j+1)! theta_W'(0))`` the zeta function is

    zeta(z) = mu z + (1/z) * (sum (2j+1) X_j z^2j) / (sum X_j z^2j)

and the quotient series ``sum Y_j z^2j`` gives ``Y_1 = -mu`` and
``Y_n = -G_2n`` for ``n >= 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateNormalizationError, TableExhaustedError
from .hermite import conj_moment, theta_w, theta_w_prime
from .lattice import Lattice, TruncationPolicy

__all__ = [
    "XSequence",
    "YSequence",
    "x_sequence",
    "y_sequence",
    "g2n_from_theta",
    "printed_pn",
    "check_printed_pn",
    "series_division_residual",
    "zeta_from_theta",
]


@dataclass(frozen=True)
class XSequence:
    values: tuple
    source: dict = field(default_factory=dict, hash=False)

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class YSequence:
    values: tuple

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return len(self.values)


def x_sequence(lat: Lattice, policy: TruncationPolicy, max_j: int) -> XSequence:
    """``X_j = nu**2j/(2j+1)! * M_2j / M_0`` for j = 0..max_j."""
    nu = lat.nu
    m0 = conj_moment(lat, 0, policy)
    if abs(m0.value) <= 1e3 * max(m0.tail_estimate, 1e-16 * m0.abs_sum):
        raise DegenerateNormalizationError("theta_W'(0) vanishes to working precision")
    m0v = complex(m0.value)
    vals = [1.0 + 0j]
    for j in range(1, max_j + 1):
        mj = complex(conj_moment(lat, 2 * j, policy).value)
        vals.append(nu ** (2 * j) / math.factorial(2 * j + 1) * mj / m0v)
    return XSequence(tuple(vals), {"max_shell": policy.max_shell, "target_tol": policy.target_tol})


def y_sequence(x) -> YSequence:
    """Quotient coefficients: ``Y_0 = 1``, ``Y_j = 2j X_j - sum_{k=1}^{j-1} Y_k X_{j-k}``."""
    X = list(x.values if isinstance(x, XSequence) else x)
    Y = [1.0 + 0j]
    for j in range(1, len(X)):
        Y.append(2 * j * X[j] - sum(Y[k] * X[j - k] for k in range(1, j)))
    return YSequence(tuple(Y))


def g2n_from_theta(y: YSequence, n: int) -> complex:
    """``G_2n = -Y_n``, ``n >= 2``."""
    if n < 2:
        raise ValueError("n must be >= 2 (Y_1 is -mu, not an Eisenstein series)")
    if n >= len(y):
        raise TableExhaustedError(f"Y sequence has length {len(y)}, need index {n}")
    return -y[n]


def printed_pn(x, n: int, z_coefficient: float = 5.0) -> complex:
    """The printed closed forms for ``G_2n``, n = 2..6, in terms of X_1..X_n.

    The n = 5 form carries a stray symbol ``z`` in the ``X1^3 X2`` term;
    ``z_coefficient`` is substituted for it.
    """
    X = x.values if isinstance(x, XSequence) else x
    X1, X2, X3, X4, X5, X6 = (X[j] if j < len(X) else 0 for j in range(1, 7))
    if n == 2:
        return 2 * (X1**2 - 2 * X2)
    if n == 3:
        return -2 * (X1**3 - 3 * X1 * X2 + 3 * X3)
    if n == 4:
        return 2 * (X1**4 - 4 * X1**2 * X2 + 4 * X1 * X3 + 2 * X2**2 - 4 * X4)
    if n == 5:
        return -2 * (
            X1**5 - z_coefficient * X1**3 * X2 + 5 * X1**2 * X3 + 5 * X1 * X2**2 - 5 * X1 * X4 - 5 * X2 * X3 + 5 * X5
        )
    if n == 6:
        return 2 * (
            X1**6 - 3 * X1**4 * X2 + 6 * X1**3 * X3 + 9 * X1**2 * X2**2 - 6 * X1**2 * X4
            - 12 * X1 * X2 * X3 + 6 * X1 * X5 - 2 * X2**3 + 6 * X2 * X4 + 3 * X3**2 - 6 * X6
        )
    raise ValueError("printed forms exist for n = 2..6 only")


_PN_NOTES = {
    5: "printed 'z' in the X1^3 X2 term read as 5",
    6: "printed X1^4 X2 coefficient is -3, the recursion gives -6; the forms agree only when X1 = 0",
}


def check_printed_pn(x: XSequence, tol: float = 1e-10, label: str = "") -> list:
    """Compare each printed ``P_n`` with ``-Y_n`` from the generic recursion."""
    from .audit import IdentityReport, make_report

    if len(x) < 7:
        raise ValueError("need X_0..X_6")
    y = y_sequence(x)
    reports: list[IdentityReport] = []
    for n in range(2, 7):
        generic = -y[n]
        printed = printed_pn(x, n)
        scale = max(1.0, max(abs(v) for v in x.values[1 : n + 1]) ** n)
        note = _PN_NOTES.get(n, "")
        reports.append(
            make_report(
                f"Zeta5{n}", label, printed, generic, tol * scale, mode="abs", normative=False, note=note
            )
        )
    return reports


def series_division_residual(x: XSequence, y: YSequence | None = None) -> float:
    """``max_j |(Y * X)_j - (2j+1) X_j|``: re-multiplication check."""
    X = np.asarray(x.values)
    Y = np.asarray((y or y_sequence(x)).values)
    prod = np.convolve(Y, X)[: len(X)]
    return float(np.max(np.abs(prod - (2 * np.arange(len(X)) + 1) * X)))


def zeta_from_theta(lat: Lattice, mu: complex, z, policy: TruncationPolicy):
    """``zeta(z) = mu z + theta_W'(z) / theta_W(z)``."""
    z = np.asarray(z, dtype=complex)
    out = mu * z + np.asarray(theta_w_prime(lat, z, policy).value) / np.asarray(theta_w(lat, z, policy).value)
    return complex(out) if out.ndim == 0 else out
