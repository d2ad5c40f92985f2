"""Truncation and quadrature convergence on the preset lattices.

Prints three tables:
  * G4 on Z[i] against the closed form, raw shell sum vs. fitted tail;
  * max |W_r(series) - W_r(recursion)| over r <= 6 as max_shell grows;
  * |W_2(quadrature) - W_2(recursion)| as the Gauss-Hermite order grows.
"""
import math

import numpy as np
from scipy.special import gamma

from sigmalab import classical, hermite, quad, taylor
from sigmalab.lattice import TruncationPolicy, preset
from sigmalab.summation import extrapolated_shell_sum


def g4_table():
    lat = preset("square")
    exact = gamma(0.25) ** 8 / (960 * math.pi ** 2)
    print("G4(Z[i])   shells   raw error    fitted error")
    for shells in (12, 16, 20, 24, 32, 48):
        res = extrapolated_shell_sum(lat, lambda g: g ** -4.0, shells, leading_power=3)
        print(f"           {shells:>6}   {abs(res.raw - exact):.2e}     {abs(res.value - exact):.2e}")


def series_table(names=("square", "hexagonal", "generic")):
    table = taylor.build_coeff_table(6)
    invs = {n: classical.invariants(preset(n)) for n in names}
    print("\nseries route, max_r<=6 relative deviation")
    print("max_shell  " + "  ".join(f"{n:>10}" for n in names))
    for k in (3, 4, 5, 6, 8, 10, 12, 16):
        pol = TruncationPolicy(max_shell=k)
        row = []
        for n in names:
            inv = invs[n]
            try:
                dev = max(
                    abs(hermite.w_r_series_route(preset(n), inv, r, pol) - taylor.w_r_value(taylor.w_r_polynomial(table, r), inv))
                    / max(1.0, abs(taylor.w_r_value(taylor.w_r_polynomial(table, r), inv)))
                    for r in range(7)
                )
                row.append(f"{dev:10.2e}")
            except ArithmeticError:
                row.append(f"{'degenerate':>10}")
        print(f"{k:>9}  " + "  ".join(row))


def quad_table(name="generic"):
    lat = preset(name)
    inv = classical.invariants(lat)
    w2 = taylor.w_r_value(taylor.w_r_polynomial(taylor.build_coeff_table(2), 2), inv)
    print(f"\nintegral route W_2 on {name}")
    for order in (8, 12, 16, 20, 24, 32, 40):
        rule = quad.build_rule(lat.nu, order)
        err = abs(quad.w_r_integral_route(lat, inv, rule, 2, TruncationPolicy()) - w2) / abs(w2)
        print(f"  order {order:>3}   rel error {err:.2e}")


if __name__ == "__main__":
    np.set_printoptions(precision=3)
    g4_table()
    series_table()
    quad_table()
