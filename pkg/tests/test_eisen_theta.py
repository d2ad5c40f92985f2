import numpy as np
import pytest

from sigmalab import eisen_theta as et
from sigmalab.classical import zeta_series
from sigmalab.errors import TableExhaustedError
from sigmalab.lattice import PANEL


@pytest.fixture(scope="module")
def xs(lattices):
    from conftest import DEFAULT_POLICY

    return {name: et.x_sequence(lat, DEFAULT_POLICY, 6) for name, lat in lattices.items()}


def test_x0_and_symmetry(xs):
    assert xs["square"][0] == 1
    assert xs["square"][1] == 0 and xs["square"][3] == 0
    assert abs(xs["hexagonal"][2]) < 1e-14


@pytest.mark.parametrize("name", PANEL)
def test_x1_is_minus_half_mu(name, xs, invs):
    assert abs(2 * xs[name][1] + invs[name].mu) < 1e-12 * max(1.0, abs(invs[name].mu))


@pytest.mark.parametrize("name", PANEL)
@pytest.mark.parametrize("n", range(2, 7))
def test_g2n_from_theta(name, n, xs, invs):
    y = et.y_sequence(xs[name])
    direct = invs[name].G[2 * n]
    scale = max(abs(v) for v in invs[name].G.values())
    assert abs(et.g2n_from_theta(y, n) - direct) <= 1e-10 * scale


def test_y1_is_minus_mu(xs, invs):
    y = et.y_sequence(xs["generic"])
    assert y[1] == pytest.approx(-invs["generic"].mu, rel=1e-12)


def test_g2n_bounds(xs):
    y = et.y_sequence(xs["generic"])
    with pytest.raises(ValueError):
        et.g2n_from_theta(y, 1)
    with pytest.raises(TableExhaustedError):
        et.g2n_from_theta(y, 7)


def test_series_division_residual(xs):
    assert et.series_division_residual(xs["generic"]) < 1e-14


@pytest.mark.parametrize("name", PANEL)
def test_printed_forms(name, xs):
    reports = {r.identity_id: r for r in et.check_printed_pn(xs[name], label=name)}
    for ident in ("Zeta52", "Zeta53", "Zeta54", "Zeta55"):
        assert reports[ident].verdict == "holds"
    assert not any(r.normative for r in reports.values())
    if name in ("square", "hexagonal"):
        assert reports["Zeta56"].verdict == "holds"
    else:
        assert reports["Zeta56"].verdict == "fails"
        assert "-6" in reports["Zeta56"].note


def test_literal_z_matters(xs):
    x = xs["generic"]
    assert abs(et.printed_pn(x, 5) - et.printed_pn(x, 5, z_coefficient=0.0)) > 1e-3


@pytest.mark.parametrize("name", ["square", "generic"])
def test_zeta_from_theta(name, lattices, invs, policy):
    lat = lattices[name]
    z = np.array([0.3 * lat.omega1 + 0.2 * lat.omega2, 0.6 * lat.omega1 + 0.7 * lat.omega2])
    ours = et.zeta_from_theta(lat, invs[name].mu, z, policy)
    np.testing.assert_allclose(ours, zeta_series(lat, z, policy).value, rtol=1e-10)
