"""Weierstrass' recursion for the sigma Taylor coefficients.

    sigma(z) = sum_r W_r z**(2r+1) / (2r+1)!
    W_r      = sum_{2m+3n=r} a_{m,n} (g2/2)**m (2 g3)**n

Coefficients are exact :class:`fractions.Fraction` values.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import TableExhaustedError

__all__ = [
    "CoeffTable",
    "BivariatePoly",
    "build_coeff_table",
    "w_r_polynomial",
    "sigma_coefficient_polynomial",
    "w_r_value",
    "sigma_taylor_eval",
    "table_csv",
]


@dataclass(frozen=True)
class CoeffTable:
    entries: dict = field(hash=False)
    max_r: int

    def __getitem__(self, mn: tuple[int, int]) -> Fraction:
        m, n = mn
        if m < 0 or n < 0:
            return Fraction(0)
        if 2 * m + 3 * n > self.max_r:
            raise TableExhaustedError(f"a_{{{m},{n}}} lies beyond max_r={self.max_r}")
        return self.entries[(m, n)]


@dataclass(frozen=True)
class BivariatePoly:
    """Sparse polynomial in (g2, g3): ``{(i, j): coeff}`` for ``g2**i g3**j``."""

    terms: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: Fraction(v) for k, v in self.terms.items() if v != 0})

    def __call__(self, g2: complex, g3: complex) -> complex:
        return sum(complex(c) * g2**i * g3**j for (i, j), c in sorted(self.terms.items()))

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.terms == other.terms

    def scale(self, factor) -> "BivariatePoly":
        return BivariatePoly({k: v * factor for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "BivariatePoly(0)"
        parts = [f"({c})*g2^{i}*g3^{j}" for (i, j), c in sorted(self.terms.items())]
        return "BivariatePoly(" + " + ".join(parts) + ")"


def _pairs(r: int):
    """All ``(m, n)``, ``m, n >= 0`` with ``2m + 3n = r``, by increasing n."""
    return [((r - 3 * n) // 2, n) for n in range(r // 3 + 1) if (r - 3 * n) % 2 == 0]


def build_coeff_table(max_r: int) -> CoeffTable:
    """Fill ``a_{m,n}`` for all ``2m + 3n <= max_r`` by increasing weight."""
    if max_r < 0:
        raise ValueError("max_r must be >= 0")
    a: dict[tuple[int, int], Fraction] = {}

    def get(m, n):
        return a.get((m, n), Fraction(0)) if m >= 0 and n >= 0 else Fraction(0)

    for r in range(max_r + 1):
        for m, n in _pairs(r):
            if (m, n) == (0, 0):
                a[(0, 0)] = Fraction(1)
                continue
            a[(m, n)] = (
                3 * (m + 1) * get(m + 1, n - 1)
                + Fraction(16, 3) * (n + 1) * get(m - 2, n + 1)
                - Fraction(1, 3) * (2 * m + 3 * n - 1) * (4 * m + 6 * n - 1) * get(m - 1, n)
            )
    return CoeffTable(entries=a, max_r=max_r)


def w_r_polynomial(table: CoeffTable, r: int) -> BivariatePoly:
    """``W_r`` as a polynomial in (g2, g3): coefficient ``a_{m,n} 2**(n-m)``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    if r > table.max_r:
        raise TableExhaustedError(f"W_{r} needs max_r >= {r}, table has {table.max_r}")
    return BivariatePoly({(m, n): table[m, n] * Fraction(2) ** (n - m) for m, n in _pairs(r)})


def sigma_coefficient_polynomial(table: CoeffTable, r: int) -> BivariatePoly:
    """Coefficient of ``z**(2r+1)`` in sigma, i.e. ``W_r / (2r+1)!``."""
    return w_r_polynomial(table, r).scale(Fraction(1, math.factorial(2 * r + 1)))


def w_r_value(poly: BivariatePoly, inv) -> complex:
    """Evaluate at the lattice's ``(g2, g3)``."""
    return poly(inv.g2, inv.g3)


def sigma_taylor_eval(table: CoeffTable, inv, z: complex) -> tuple[complex, float]:
    """Partial Taylor sum through ``r = table.max_r``.

    Returns ``(value, |last term|)``; the caller judges whether the series
    has converged at ``z``.
    """
    total = 0j
    last = 0.0
    for r in range(table.max_r + 1):
        term = w_r_value(sigma_coefficient_polynomial(table, r), inv) * z ** (2 * r + 1)
        total += term
        last = abs(term)
    return total, last


def table_csv(table: CoeffTable) -> str:
    """CSV dump with columns m, n, numerator, denominator."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["m", "n", "numerator", "denominator"])
    for r in range(table.max_r + 1):
        for m, n in _pairs(r):
            c = table.entries[(m, n)]
            writer.writerow([m, n, c.numerator, c.denominator])
    return buf.getvalue()
