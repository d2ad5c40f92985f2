from fractions import Fraction

import pytest

from oracles import sigma_taylor_sympy, sympy_to_terms
from sigmalab import taylor
from sigmalab.errors import TableExhaustedError

EXPECTED_A = {
    (0, 0): 1,
    (1, 0): -1,
    (0, 1): -3,
    (2, 0): -9,
    (1, 1): -18,
    (3, 0): 69,
    (0, 2): -54,
}


@pytest.fixture(scope="module")
def table():
    return taylor.build_coeff_table(14)


@pytest.fixture(scope="module")
def sympy_sigma():
    return sigma_taylor_sympy(13)


@pytest.mark.parametrize("mn, value", EXPECTED_A.items())
def test_low_order_entries(table, mn, value):
    assert table[mn] == Fraction(value)
    assert isinstance(table[mn], Fraction)


def test_negative_index_is_zero(table):
    assert table[(-1, 2)] == 0


def test_exhausted():
    t = taylor.build_coeff_table(3)
    with pytest.raises(TableExhaustedError):
        t[(2, 0)]


@pytest.mark.parametrize("r", range(0, 7))
def test_sigma_coefficients_vs_laurent_route(table, sympy_sigma, r):
    coeffs, (g2, g3) = sympy_sigma
    expected = sympy_to_terms(coeffs[2 * r + 1], g2, g3)
    assert taylor.sigma_coefficient_polynomial(table, r).terms == expected


def test_even_sigma_coefficients_vanish(sympy_sigma):
    coeffs, _ = sympy_sigma
    assert all(coeffs[p] == 0 for p in range(2, 14, 2))


def test_w_polynomials(table):
    assert taylor.w_r_polynomial(table, 1).is_zero()
    assert taylor.w_r_polynomial(table, 2).terms == {(1, 0): Fraction(-1, 2)}
    assert taylor.w_r_polynomial(table, 3).terms == {(0, 1): Fraction(-6)}
    assert taylor.w_r_polynomial(table, 4).terms == {(2, 0): Fraction(-9, 4)}
    assert taylor.w_r_polynomial(table, 5).terms == {(1, 1): Fraction(-18)}
    assert taylor.w_r_polynomial(table, 6).terms == {(3, 0): Fraction(69, 8), (0, 2): Fraction(-216)}


def test_z13_denominator(table):
    p = taylor.sigma_coefficient_polynomial(table, 6)
    assert p.terms[(3, 0)] == Fraction(23, 2 ** 13 * 3 ** 4 * 5 ** 2 * 7 * 11 * 13)
    assert p.terms[(0, 2)] == Fraction(-576, 2 ** 13 * 3 ** 4 * 5 ** 2 * 7 * 11 * 13)


def test_poly_ops():
    p = taylor.BivariatePoly({(1, 0): Fraction(1, 2), (0, 1): Fraction(0)})
    assert p.terms == {(1, 0): Fraction(1, 2)}
    assert p(4, 100) == 2
    assert p.scale(2) == taylor.BivariatePoly({(1, 0): Fraction(1)})


def test_taylor_eval_matches_product(invs, lattices, policy, table):
    from sigmalab.classical import sigma_product

    lat, inv = lattices["generic"], invs["generic"]
    z = 0.12 + 0.07j
    val, last = taylor.sigma_taylor_eval(table, inv, z)
    assert abs(val - sigma_product(lat, z, policy).value) < 1e-14
    assert last < 1e-14


def test_csv_header_and_rows():
    text = taylor.table_csv(taylor.build_coeff_table(3))
    assert text.splitlines() == ["m,n,numerator,denominator", "0,0,1,1", "1,0,-1,1", "0,1,-3,1"]
