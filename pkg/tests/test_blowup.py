import numpy as np
import pytest

from wavecrest import blowup
from wavecrest import field as fieldmod
from wavecrest.errors import (ConeNotContained, ValidationError,
                              WindowOutsideDomain)


def test_stokes_corner_values():
    flow = blowup.stokes_corner(1.0)
    assert flow.beta == pytest.approx(2.0 / 3.0, abs=1e-14)
    assert flow.exponent == pytest.approx(1.5)
    assert blowup.matched_beta(np.pi / 6, np.pi / 6, 1.0) == \
        pytest.approx(2.0 / 3.0, abs=1e-14)
    # stream vanishes on both surface rays
    X = np.linspace(1e-6, 1.0, 50)
    assert np.max(np.abs(flow.psi(X, flow.surface(X)))) < 1e-13
    assert np.max(np.abs(flow.psi(-X, flow.surface(-X)))) < 1e-13
    # frozen gradient magnitude on the surface at radius 2/sqrt(3)
    gx, gy = flow.grad(1.0, -1.0 / np.sqrt(3.0))
    assert gx ** 2 + gy ** 2 == pytest.approx(2.0 / np.sqrt(3.0), abs=1e-10)


def test_verify_blow_passes_stokes():
    rep = blowup.verify_blow(blowup.stokes_corner(1.0))
    assert rep.max_sup() < 1e-6
    assert rep["bernoulli"].sup < 1e-8


def test_verify_blow_rejects_other_angles():
    a = np.pi / 5
    flow = blowup.corner_family(a, a, blowup.matched_beta(a, a, 1.0), 1.0)
    rep = blowup.verify_blow(flow)
    assert rep["bernoulli"].sup > 1e-3


def test_corner_scan_small_grid():
    passes = blowup.corner_scan(n=14)  # step pi/30, so pi/6 is node 5
    assert len(passes) == 2
    zero = [p for p in passes if p["beta"] == 0.0]
    stokes = [p for p in passes if p["beta"] != 0.0]
    assert len(zero) == 1 and len(stokes) == 1
    assert stokes[0]["alpha_p"] == pytest.approx(np.pi / 6, abs=1e-12)
    assert stokes[0]["alpha_m"] == pytest.approx(np.pi / 6, abs=1e-12)
    assert stokes[0]["beta"] == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_rescale_corner_flow_self_similar():
    flow = blowup.stokes_corner(1.0)
    ref = blowup.rescale(flow, 1.0)
    for eps in (1e-1, 1e-3, 1e-6):
        frame = blowup.rescale(flow, eps)
        assert np.max(np.abs(frame.psi - ref.psi)) < 1e-8
    with pytest.raises(ValidationError):
        blowup.rescale(flow, -0.5)


def test_rescale_wave_field(gamma_m1, extreme_field):
    shifted = fieldmod.shift_datum(extreme_field,
                                   extreme_field.Q / (2.0 * extreme_field.g))
    with pytest.raises(ValidationError):
        blowup.rescale(extreme_field, 0.1)
    eps = np.geomspace(0.3, 0.003, 9)
    sups = [blowup.rescale(shifted, e).sup for e in eps]
    slope = np.polyfit(np.log(eps), np.log(sups), 1)[0]
    # quadratic surface degeneracy gives sup growth with exponent 1/2
    assert slope == pytest.approx(0.5, abs=0.02)
    with pytest.raises(WindowOutsideDomain):
        blowup.rescale(shifted, 2.0)


def test_corner_angle_classifications():
    flow = blowup.stokes_corner(1.0)
    res = blowup.corner_angle(flow.surface_profile(n=2001))
    assert res["classification"] == "corner"
    assert res["q_plus"] == pytest.approx(1.0 / np.sqrt(3.0), abs=1e-3)
    assert res["q_minus"] == pytest.approx(1.0 / np.sqrt(3.0), abs=1e-3)

    X = np.linspace(-1.0, 1.0, 2001)
    flat = fieldmod.SurfaceProfile(kind="graph", period=2.0, X=X,
                                   eta=np.zeros_like(X))
    assert blowup.corner_angle(flat)["classification"] == "flat"

    vee = fieldmod.SurfaceProfile(kind="graph", period=2.0, X=X, eta=-np.abs(X))
    assert blowup.corner_angle(vee)["classification"] == "inconclusive"


def test_cone_check_stokes():
    flow = blowup.stokes_corner(1.0)
    res = blowup.oddson_cone_check(flow)
    assert not res["violation"]
    assert res["kappa"] == pytest.approx(2.0 / 3.0, rel=0.05)

    with pytest.raises(ConeNotContained):
        blowup.oddson_cone_check(flow, half_aperture=np.deg2rad(65.0))


def test_cone_check_extreme_stream_violation(extreme_field):
    shifted = fieldmod.shift_datum(extreme_field,
                                   extreme_field.Q / (2.0 * extreme_field.g))
    res = blowup.oddson_cone_check(shifted, half_aperture=np.deg2rad(85.0),
                                   r0=0.5)
    assert res["violation"]
    assert res["kappa"] is None
