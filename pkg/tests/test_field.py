import numpy as np
import pytest

from wavecrest import field as fieldmod
from wavecrest import laminar, vorticity


def test_extreme_field_strong_residuals(gamma_m1, extreme_field):
    rep = fieldmod.strong_residuals(extreme_field, gamma_m1)
    assert rep.max_sup() < 1e-8
    # the sampled stream is quadratic in Y, so the stencil is nearly exact
    assert rep["interior_pde"].sup < 1e-9
    assert rep["bernoulli"].sup < 1e-12
    assert rep["kinematic_surface"].sup < 1e-12
    assert rep["kinematic_bed"].sup < 1e-12
    assert rep["range"].sup < 1e-12


def test_gradient_matches_laminar_derivative(gamma_m1, extreme_wave,
                                             extreme_field):
    _, psi_y = fieldmod.gradient(extreme_field)
    Y = extreme_field.ygrid()
    expect = extreme_wave.psi_y(Y)
    assert np.max(np.abs(psi_y - expect)) < 1e-8


def test_csv_roundtrip(extreme_field):
    back = fieldmod.WaveField.from_csv(extreme_field.to_csv())
    assert back.Q == pytest.approx(extreme_field.Q, abs=1e-15)
    assert np.max(np.abs(back.psi - extreme_field.psi)) < 1e-15
    assert np.max(np.abs(back.eta - extreme_field.eta)) < 1e-15
    assert back.nx == extreme_field.nx and back.ny == extreme_field.ny


def test_shift_datum(gamma_m1, extreme_field):
    G = extreme_field.Q / (2.0 * extreme_field.g)
    shifted = fieldmod.shift_datum(extreme_field, G)
    assert shifted.Q == pytest.approx(0.0, abs=1e-14)
    assert np.max(np.abs(shifted.eta)) < 1e-9
    rep = fieldmod.strong_residuals(shifted, gamma_m1)
    assert rep.max_sup() < 1e-8


def test_weak_residual_small_for_solution(gamma_m1, extreme_wave):
    wf = fieldmod.laminar_to_field(extreme_wave, 1.0, 257, 257)
    bump = fieldmod.Bump(center=(0.0, 0.7), radius=0.5)
    val = fieldmod.weak_residual(wf, bump, gamma_m1)
    assert abs(val) < 1e-6


def test_weak_residual_flags_wrong_field(gamma_m1, extreme_field):
    from dataclasses import replace
    bad = replace(extreme_field, psi=extreme_field.psi * 1.1)
    bump = fieldmod.Bump(center=(0.0, 0.7), radius=0.5)
    assert abs(fieldmod.weak_residual(bad, bump, gamma_m1)) > 1e-3


def test_stagnation_whole_surface(extreme_field):
    pts = fieldmod.stagnation_points(extreme_field, 1e-8)
    # every distinct surface column, with the duplicated endpoint removed
    assert len(pts) == extreme_field.nx - 1
    assert all(y == pytest.approx(np.sqrt(2.0), abs=1e-9) for _, y in pts)


def test_no_stagnation_on_regular_stream(gamma_m1):
    lam = laminar.laminar_regular(gamma_m1, 1.0, 2.6)
    wf = fieldmod.laminar_to_field(lam, 1.0, 64, 64)
    assert fieldmod.stagnation_points(wf, 1e-8) == []


def test_surface_profile_validation():
    X = np.linspace(-1.0, 1.0, 21)
    prof = fieldmod.SurfaceProfile(kind="graph", period=2.0, X=X,
                                   eta=np.cos(np.pi * X), monotone=True)
    assert prof.kind == "graph"
    with pytest.raises(ValueError):
        fieldmod.SurfaceProfile(kind="graph", period=2.0, X=X,
                                eta=-np.cos(np.pi * X), monotone=True)
    with pytest.raises(ValueError):
        fieldmod.SurfaceProfile(kind="spline", period=2.0, X=X, eta=X)


def test_bump_compact_support():
    bump = fieldmod.Bump(center=(0.0, 0.5), radius=0.25)
    assert bump.value(np.array([0.5]), np.array([0.5]))[0] == 0.0
    assert bump.value(np.array([0.0]), np.array([0.5]))[0] > 0.0
    gx, gy = bump.grad(np.array([0.3]), np.array([0.5]))
    assert gx[0] == 0.0 and gy[0] == 0.0
