import numpy as np
import pytest

from wavecrest import laminar, vorticity
from wavecrest.errors import NoRoot


def test_trivial_extreme_closed_form(extreme_wave):
    assert extreme_wave.is_extreme
    assert extreme_wave.surface_speed == 0.0
    assert extreme_wave.depth == pytest.approx(np.sqrt(2.0), abs=1e-10)
    assert extreme_wave.Q == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-10)
    assert extreme_wave.surface_y == pytest.approx(np.sqrt(2.0), abs=1e-10)


def test_trivial_extreme_stream_values(extreme_wave):
    # closed form: psi(Y) = (sqrt(2) - Y)^2 / 2 for gamma = -1 on B = 1
    Y = np.linspace(0.0, extreme_wave.surface_y, 41)
    expect = (np.sqrt(2.0) - Y) ** 2 / 2.0
    assert np.max(np.abs(extreme_wave.psi_refined(Y) - expect)) < 1e-10
    assert extreme_wave.psi(0.0) == pytest.approx(1.0, abs=1e-10)
    assert extreme_wave.psi(extreme_wave.surface_y) == pytest.approx(0.0)
    # psi_Y = Y - sqrt(2): negative in the interior, zero at the surface
    assert extreme_wave.psi_y(extreme_wave.surface_y) == pytest.approx(0.0)
    assert np.max(np.abs(extreme_wave.psi_y(Y) - (Y - np.sqrt(2.0)))) < 1e-9


def test_extreme_depth_affine_vorticity():
    affine = vorticity.poly_vorticity([-1.0, -1.0], B=1.0)
    lam = laminar.trivial_extreme(affine, 1.0)
    assert lam.depth == pytest.approx(np.log(2.0 + np.sqrt(3.0)), abs=1e-10)


def test_regular_reproduces_extreme(gamma_m1, extreme_wave):
    lam = laminar.laminar_regular(gamma_m1, 1.0, 2.0 * np.sqrt(2.0))
    assert lam.depth == pytest.approx(extreme_wave.depth, abs=1e-9)
    assert abs(lam.surface_speed) < 1e-5


def test_regular_irrotational_tangency():
    zero = vorticity.poly_vorticity([0.0], B=1.0)
    lam = laminar.laminar_regular(zero, 1.0, 3.0)
    assert lam.depth == pytest.approx(1.0, abs=1e-5)
    assert lam.surface_speed == pytest.approx(1.0, abs=1e-5)


def test_regular_branch_selection():
    zero = vorticity.poly_vorticity([0.0], B=1.0)
    slow = laminar.laminar_regular(zero, 1.0, 3.5, root="largest")
    fast = laminar.laminar_regular(zero, 1.0, 3.5, root="smallest")
    assert slow.depth > fast.depth
    # both satisfy the Bernoulli closure Q = s^2 + 2 g h
    for lam in (slow, fast):
        Q = lam.surface_speed ** 2 + 2.0 * lam.depth
        assert Q == pytest.approx(3.5, abs=1e-8)


def test_regular_below_minimum_raises(gamma_m1):
    with pytest.raises(NoRoot):
        laminar.laminar_regular(gamma_m1, 1.0, 1.5)


def test_first_integral_along_depth(gamma_m1):
    lam = laminar.laminar_regular(gamma_m1, 1.0, 2.6)
    Y = np.linspace(lam.F, lam.surface_y, 33)
    p = lam.psi_refined(Y)
    gh = vorticity.gamma_hat_table(gamma_m1)
    res = lam.psi_y(Y) ** 2 + 2.0 * gh(p) - lam.surface_speed ** 2
    assert np.max(np.abs(res)) < 1e-9
