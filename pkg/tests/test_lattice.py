import cmath
import math

import numpy as np
import pytest

from sigmalab.errors import DegenerateLatticeError
from sigmalab.lattice import (
    PANEL,
    Lattice,
    TruncationPolicy,
    chi_w,
    enumerate_points,
    lattice_arrays,
    make_lattice,
    preset,
    shell_indices,
    shell_radius_lower_bound,
    theta_space_dimension,
)


def test_square_geometry():
    lat = preset("square")
    assert lat.cell_area == pytest.approx(1.0)
    assert lat.nu == pytest.approx(math.pi)


def test_hexagonal_area():
    assert preset("hexagonal").cell_area == pytest.approx(math.sqrt(3) / 2)


def test_unknown_preset():
    with pytest.raises(KeyError):
        preset("rhombic")


def test_make_lattice_reorients():
    lat = make_lattice(1j, 1)
    assert lat.cell_area > 0
    assert {lat.omega1, lat.omega2} == {1, 1j}


@pytest.mark.parametrize("w1, w2", [(1, 2), (0, 1j), (1 + 1j, 2 + 2j)])
def test_make_lattice_rejects_collinear(w1, w2):
    with pytest.raises(DegenerateLatticeError):
        make_lattice(w1, w2)


def test_lattice_rejects_wrong_orientation():
    with pytest.raises(DegenerateLatticeError):
        Lattice(1j, 1)


def test_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(max_shell=-1)
    with pytest.raises(ValueError):
        TruncationPolicy(target_tol=0)
    assert TruncationPolicy(max_shell=40).shells_for_algebraic == 40
    assert TruncationPolicy(max_shell=4).shells_for_algebraic == 32


def test_shell_sizes():
    assert len(shell_indices(0)) == 1
    for k in range(1, 8):
        idx = shell_indices(k)
        assert len(idx) == 8 * k
        assert np.all(np.max(np.abs(idx), axis=1) == k)
        assert len({tuple(p) for p in idx}) == 8 * k


def test_enumeration_counts():
    pts = enumerate_points(preset("generic"), 3)
    assert len(pts) == 7 ** 2
    assert pts[0].gamma == 0


def test_arrays_match_points():
    lat = preset("hexagonal")
    m, n, g, chi, shell = lattice_arrays(lat, 4)
    pts = enumerate_points(lat, 4)
    assert [(p.m, p.n) for p in pts] == list(zip(m.tolist(), n.tolist()))
    np.testing.assert_allclose(g, [p.gamma for p in pts])
    assert chi.tolist() == [p.chi for p in pts]
    assert not g.flags.writeable


def test_chi_values():
    lat = preset("square")
    assert chi_w(lat.point(2, -4)) == 1
    assert chi_w(lat.point(1, 0)) == -1
    assert chi_w(lat.point(2, 3)) == -1


@pytest.mark.parametrize("name", PANEL)
def test_shell_radius_bound(name):
    lat = preset(name)
    lam = shell_radius_lower_bound(lat)
    m, n, g, chi, shell = lattice_arrays(lat, 10)
    assert np.all(np.abs(g[shell > 0]) >= shell[shell > 0] * lam * (1 - 1e-12))
    # tight: attained on shell 1 boundary or approached
    assert np.min(np.abs(g[shell == 1])) >= lam


@pytest.mark.parametrize("name", PANEL)
def test_coordinates_roundtrip(name):
    lat = preset(name)
    s, t = lat.coordinates(0.3 * lat.omega1 - 1.7 * lat.omega2)
    assert s == pytest.approx(0.3) and t == pytest.approx(-1.7)


def test_dimension_is_one():
    lat = make_lattice(1.3, cmath.rect(0.7, 1.1))
    assert theta_space_dimension(lat) == pytest.approx(1.0)
