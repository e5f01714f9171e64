import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heisenberg_hardy.errors import CaseError, ParameterError
from heisenberg_hardy.inequalities import get_case, hardy_case, rellich_p2_case
from heisenberg_hardy.quadrature import QuadratureSpec
from heisenberg_hardy.sharpness import (ExtremalFamily, extremal_profile, family_for_case,
                                        rayleigh_ratio, sharpness_ratio, sharpness_schedule)


def test_exponents():
    fam = ExtremalFamily(0.0, 1.0, 2.0)
    assert fam.beta == 0.0 and fam.C == 1.0
    fam = ExtremalFamily(0.0, 0.0, 2.0)
    assert fam.beta == 1.0 and fam.C == 1.5
    fam = ExtremalFamily(0.0, 2.0, 3.0)
    assert fam.beta == 0.0 and fam.C == pytest.approx(1 / 3)


def test_power_profile_on_plateau():
    fam = ExtremalFamily(0.0, 1.0, 2.0)
    prof = fam.profile((1.0, 1.0))
    r = np.array([0.5, 1.0, 3.0])
    assert np.allclose(prof.phi(r), 1.0 / r, rtol=1e-14)
    assert np.allclose(prof.dphi(r), -1.0 / r ** 2, rtol=1e-14)


def test_exponential_profile_on_plateau():
    prof = extremal_profile(0.0, 0.0, 2.0, 4, ramps=(1.0, 1.0))
    r = np.array([0.5, 1.0, 3.0])
    assert np.allclose(prof.phi(r), np.exp(-1.5 * r), rtol=1e-14)


def test_profile_support_and_smoothness():
    fam = ExtremalFamily(0.0, 0.0, 2.0, theta=0.1)
    prof = fam.profile((1.5, 2.0))
    lo, hi = fam.log_bounds
    outside = np.exp(np.array([lo - 0.5, lo, hi, hi + 0.5]))
    assert np.all(prof.phi(outside) == 0.0)
    r = np.exp(np.linspace(lo + 0.01, hi - 0.01, 400))
    h = 1e-6 * r
    fd1 = (prof.phi(r + h) - prof.phi(r - h)) / (2 * h)
    fd2 = (prof.dphi(r + h) - prof.dphi(r - h)) / (2 * h)
    assert np.max(np.abs(fd1 - prof.dphi(r))) <= 1e-6 * np.max(np.abs(prof.dphi(r)))
    assert np.max(np.abs(fd2 - prof.d2phi(r))) <= 1e-5 * np.max(np.abs(prof.d2phi(r)))


def test_family_errors():
    with pytest.raises(CaseError):
        ExtremalFamily(1.0, 2.0, 2.0)  # Q = a + b + 1
    with pytest.raises(CaseError):
        ExtremalFamily(0.0, 0.0, 2.0, epsilon=1.0, R_outer=2.0, theta=0.4)
    with pytest.raises(ParameterError):
        ExtremalFamily(0.0, 1.0, 2.0).profile((30.0, 30.0))
    with pytest.raises(ParameterError):
        rayleigh_ratio(hardy_case(2.0), ExtremalFamily(0.0, 1.0, 2.0), route="mesh")


def test_radial_and_cubature_routes_agree():
    case = get_case("thm2.1-p2-a0-b0")
    fam = family_for_case(case, width=4.0)
    ramps = (0.8, 1.0)
    radial = rayleigh_ratio(case, fam, ramps)
    spec = QuadratureSpec(epsilon=fam.epsilon, R_outer=fam.R_outer, target_rel_tol=1e-7)
    cubature = rayleigh_ratio(case, fam, ramps, route="cubature", spec=spec)
    assert cubature == pytest.approx(radial, rel=1e-5)


def test_routes_agree_for_power_family():
    case = hardy_case(3.0)
    fam = family_for_case(case, width=3.0)
    radial = rayleigh_ratio(case, fam, (0.7, 0.9))
    spec = QuadratureSpec(epsilon=fam.epsilon, R_outer=fam.R_outer, target_rel_tol=1e-7)
    assert rayleigh_ratio(case, fam, (0.7, 0.9), route="cubature", spec=spec) == pytest.approx(
        radial, rel=1e-5)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(0.1, 3.0),
       st.sampled_from(["cor2.2-hardy", "thm2.1-p2-a0-b0", "thm2.1-p1.5-a0-b1",
                        "thm2.1-p3-a1-b-2", "lem3.3-a-1-b2", "cor2.2-hpw"]))
def test_single_member_respects_constant(k_in, k_out, case_id):
    case = get_case(case_id)
    fam = family_for_case(case, width=10.0)
    assert rayleigh_ratio(case, fam, (k_in, k_out)) >= case.constant * (1 - 1e-9)


def test_hardy_sharpness_p2():
    case = hardy_case(2.0)
    res = sharpness_ratio(case, family_for_case(case, 40.0))
    assert res.flag == "sharpness estimate"
    assert res.bound_respected
    assert 1.0 <= res.fun <= 1.05


def test_rellich_is_flagged():
    case = rellich_p2_case(0.0, 1.0)
    res = sharpness_ratio(case, family_for_case(case, 20.0))
    assert res.flag == "optimality unknown"
    assert res.fun >= 2.0


def test_schedule_is_monotone():
    case = get_case("thm2.1-p2-a0-b0")
    steps = sharpness_schedule(case, widths=(10.0, 20.0, 40.0))
    ratios = [s.fun for s in steps]
    assert all(b <= a for a, b in zip(ratios, ratios[1:]))
    assert all(s.bound_respected for s in steps)
    assert [s.log_width for s in steps] == pytest.approx([10.0, 20.0, 40.0])
    assert math.isclose(steps[-1].excess, ratios[-1] / case.constant - 1)
