import numpy as np
import pytest

from wavecrest import field as fieldmod
from wavecrest import pressure, vorticity
from wavecrest.errors import StagnationInterior, ValidationError


def test_head_extrema_on_extreme_stream(gamma_m1, extreme_field):
    ph = pressure.pressure_head(extreme_field, gamma_m1, "R")
    # R vanishes on the surface and is negative below
    assert abs(ph.max_value) < 1e-9
    assert ph.max_loc[1] == pytest.approx(np.sqrt(2.0), abs=1e-9)
    # frozen closed form at the bed: R = 1 - 2 sqrt(2)/2 - 1 = -sqrt(2)
    k = np.argmin(np.abs(extreme_field.X))
    assert ph.values[k, 0] == pytest.approx(-np.sqrt(2.0), abs=1e-9)


def test_head_variants(gamma_m1, extreme_field):
    # gamma <= 0 makes the linear slope zero, so T coincides with R
    r = pressure.pressure_head(extreme_field, gamma_m1, "R")
    t = pressure.pressure_head(extreme_field, gamma_m1, "T")
    assert t.varpi == 0.0
    assert np.max(np.abs(t.values - r.values)) == 0.0

    lam = pressure.MultiplierFn(fn=vorticity.poly_vorticity([0.5], B=1.0))
    s = pressure.pressure_head(extreme_field, gamma_m1, "S", lam=lam)
    expect = r.values + 0.5 * np.clip(extreme_field.psi, 0.0, 1.0)
    assert np.max(np.abs(s.values - expect)) < 1e-12

    with pytest.raises(ValueError):
        pressure.pressure_head(extreme_field, gamma_m1, "S")


def test_multiplier_admissibility(gamma_m1):
    zero = pressure.zero_multiplier(1.0)
    res = zero.admissible(gamma_m1)
    assert all(res.values())

    decreasing = pressure.MultiplierFn(
        fn=vorticity.poly_vorticity([0.0, -0.5], B=1.0))
    res = decreasing.admissible(gamma_m1)
    assert res["nonpositive"] and res["combined_nonpositive"]
    assert not res["nondecreasing"]


def test_sperb_identity_on_solution(gamma_m1, extreme_field):
    res = pressure.sperb_residual(extreme_field, gamma_m1,
                                  pressure.zero_multiplier(1.0))
    assert res["residual"].sup < 1e-6
    assert res["excluded_nodes"] == 0


def test_sperb_flags_non_solution(gamma_m1, extreme_field):
    from dataclasses import replace
    bad = replace(extreme_field, psi=extreme_field.psi ** 1.5)
    res = pressure.sperb_residual(bad, gamma_m1,
                                  pressure.zero_multiplier(1.0))
    assert res["residual"].sup > 0.1


def test_nqt_two_sided_bound(gamma_m1, extreme_field):
    res = pressure.nqt_check(extreme_field, gamma_m1)
    assert res["holds"]
    assert res["lower_margin"] > -1e-6
    assert res["upper_margin"] > -1e-6


def test_nqt_interior_stagnation_raises(gamma_m1, extreme_field):
    from dataclasses import replace
    flat = replace(extreme_field, psi=np.zeros_like(extreme_field.psi))
    with pytest.raises(StagnationInterior):
        pressure.nqt_check(flat, gamma_m1)


def test_sqrt_bound_fit(extreme_field):
    with pytest.raises(ValidationError):
        pressure.sqrt_bound_fit(extreme_field)
    shifted = fieldmod.shift_datum(extreme_field,
                                   extreme_field.Q / (2.0 * extreme_field.g))
    # |grad psi|^2 = d^2 against |Y| = d gives the exact constant sqrt(2)
    K = pressure.sqrt_bound_fit(shifted)
    assert K == pytest.approx(np.sqrt(2.0), abs=1e-10)
