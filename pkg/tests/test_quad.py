import math

import numpy as np
import pytest

from sigmalab import quad
from sigmalab.classical import sigma_product
from sigmalab.lattice import PANEL


@pytest.mark.parametrize("nu", [math.pi, 2.3])
@pytest.mark.parametrize("k", range(6))
def test_gaussian_moments(nu, k):
    # int |w|^2k exp(-nu|w|^2) dm = pi k! / nu^(k+1)
    rule = quad.build_rule(nu, 16)
    got = quad.integrate(rule, np.abs(rule.points) ** (2 * k))
    assert got.real == pytest.approx(math.pi * math.factorial(k) / nu ** (k + 1), rel=1e-13)


def test_rule_validation_and_cache():
    with pytest.raises(ValueError):
        quad.build_rule(1.0, 1)
    assert quad.build_rule(1.0, 8) is quad.build_rule(1.0, 8)
    assert len(quad.build_rule(1.0, 8).nodes) == 64


def test_bargmann_reproduces_polynomials():
    nu = 1.7
    rule = quad.build_rule(nu, 16)
    z = np.array([0.3 + 0.4j, -0.8j])
    np.testing.assert_allclose(quad.bargmann_reproduce(rule, nu, lambda w: w ** 3 - 2 * w, z), z ** 3 - 2 * z,
                               rtol=1e-13)


def test_nu_mismatch():
    rule = quad.build_rule(1.0, 8)
    with pytest.raises(ValueError):
        quad.bargmann_reproduce(rule, 2.0, lambda w: w, 0.1)


@pytest.mark.parametrize("name", PANEL)
def test_sigma_reproduction(name, lattices, invs, rules, policy):
    lat = lattices[name]
    z = np.array([0.25 * lat.omega1 + 0.5 * lat.omega2, 0.75 * lat.omega1 + 0.25 * lat.omega2])
    rep = quad.sigma_reproduce(lat, invs[name], rules[name], z, policy)
    np.testing.assert_allclose(rep, sigma_product(lat, z, policy).value, rtol=1e-9)


@pytest.mark.parametrize("name", PANEL)
def test_integral_route_g2_g3(name, lattices, invs, rules, policy):
    inv = invs[name]
    ig2, ig3 = quad.g2_g3_integral_route(lattices[name], inv, rules[name], policy)
    scale = abs(inv.g2) + abs(inv.g3) ** (2 / 3)
    assert abs(ig2 - inv.g2) < 1e-9 * scale
    assert abs(ig3 - inv.g3) < 1e-9 * scale ** 1.5


@pytest.mark.parametrize("name", PANEL)
def test_kernel_trace(name, lattices):
    assert quad.kernel_trace(lattices[name]) == pytest.approx(1.0, abs=1e-12)


def test_kernel_trace_off_origin_terms_vanish(lattices):
    gammas, contrib = quad.kernel_trace_terms(lattices["generic"])
    off = np.abs(np.asarray(contrib)[np.asarray(gammas) != 0])
    assert np.max(off) < 1e-12
