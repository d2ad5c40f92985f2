"""Property tests over random lattices, points and parameters."""
import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmalab import classical, hermite
from sigmalab.lattice import (
    TruncationPolicy,
    chi_w,
    make_lattice,
    preset,
    shell_indices,
    theta_space_dimension,
)
from sigmalab.summation import neumaier_sum

ints = st.integers(-40, 40)
unit = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def lattices(draw):
    """Reduced-ish oriented lattices: omega1 = 1, omega2 = tau with Im tau in [0.6, 2]."""
    x = draw(st.floats(-0.5, 0.5))
    y = draw(st.floats(0.6, 2.0))
    scale = draw(st.floats(0.5, 2.0))
    rot = draw(st.floats(0, 2 * math.pi))
    u = scale * cmath.exp(1j * rot)
    return make_lattice(u, u * complex(x, y))


@st.composite
def bidisk(draw):
    r1, r2 = draw(st.floats(0.05, 0.999)), draw(st.floats(0.0, 0.999))
    p1, p2 = draw(st.floats(0, 2 * math.pi)), draw(st.floats(0, 2 * math.pi))
    return cmath.rect(r1, p1), cmath.rect(r2, p2)


@given(lattices(), ints, ints, ints, ints)
def test_rdq_condition(lat, m1, n1, m2, n2):
    p, q = lat.point(m1, n1), lat.point(m2, n2)
    s = lat.point(m1 + m2, n1 + n2)
    g, h = p.gamma, q.gamma
    phase = cmath.exp(lat.nu / 2 * (g * h.conjugate() - g.conjugate() * h))
    assert abs(chi_w(s) - chi_w(p) * chi_w(q) * phase) < 1e-9


@given(st.integers(1, 30))
def test_shell_symmetric_under_negation(k):
    pts = {tuple(p) for p in shell_indices(k)}
    assert len(pts) == 8 * k
    assert pts == {(-m, -n) for m, n in pts}
    assert pts == {(-n, m) for m, n in pts}


@given(lattices())
def test_dimension_formula(lat):
    assert theta_space_dimension(lat) == pytest.approx(1.0, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(lattices(), unit, unit)
def test_sigma_is_odd(lat, s, t):
    z = s * lat.omega1 + t * lat.omega2
    policy = TruncationPolicy(max_shell=4, algebraic_shells=20)
    a = classical.sigma_product(lat, z, policy).value
    b = classical.sigma_product(lat, -z, policy).value
    assert abs(a + b) <= 1e-13 * max(abs(a), 1e-300)


@settings(max_examples=20, deadline=None)
@given(bidisk())
def test_expansion_lemma(ab):
    a, b = ab
    # Cauchy product of exp(a z^2) and exp(b z)
    N = 10
    ea = [a ** (p // 2) / math.factorial(p // 2) if p % 2 == 0 else 0 for p in range(N + 1)]
    eb = [b ** p / math.factorial(p) for p in range(N + 1)]
    oracle = [sum(ea[i] * eb[p - i] for i in range(p + 1)) for p in range(N + 1)]
    np.testing.assert_allclose(hermite.expand_exp_quadratic(a, b, N), oracle, rtol=0, atol=1e-11)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["square", "hexagonal", "generic"]), unit, unit, st.integers(-2, 2), st.integers(-2, 2))
def test_poincare_functional_equation(name, s, t, m, n):
    lat = preset(name)
    policy = TruncationPolicy()
    z = 0.5 * (s * lat.omega1 + t * lat.omega2)
    g = lat.point(m, n)

    def f(w):
        return w ** 3 + 0.5 * w

    shifted = hermite.poincare_periodize(lat, f, z + g.gamma, policy)
    base = hermite.poincare_periodize(lat, f, z, policy)
    factor = g.chi * cmath.exp(lat.nu * abs(g.gamma) ** 2 / 2 + lat.nu * z * g.gamma.conjugate())
    # both sides are cancellation-prone sums; compare at the scale of their terms
    scale = float(np.max(shifted.abs_sum)) + abs(factor) * float(np.max(base.abs_sum))
    assert abs(shifted.value - factor * base.value) <= 1e-12 * scale


@given(st.lists(st.floats(-1e12, 1e12, allow_nan=False), min_size=1, max_size=200))
def test_neumaier_is_correctly_rounded(xs):
    assert neumaier_sum(np.array(xs)) == math.fsum(xs)


@settings(max_examples=10, deadline=None)
@given(lattices())
def test_legendre_relation_random(lat):
    inv = classical.invariants(lat, TruncationPolicy())
    assert inv.legendre_residual < 1e-9
