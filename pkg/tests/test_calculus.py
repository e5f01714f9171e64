import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_points
from heisenberg_hardy.calculus import (GaugeRadialProfile, ScalarField, apply_frame_field,
                                       check_gauge_identities, coord_gradient,
                                       gauge_radial_p_sub_laplacian, horizontal_divergence,
                                       horizontal_gradient, p_sub_laplacian,
                                       p_sub_laplacian_flux, sub_laplacian)
from heisenberg_hardy.errors import ParameterError, SingularPointError
from heisenberg_hardy.fields import (PlateauProfile, constant_field, coordinate_field,
                                     gauge_field, left_translate, polynomial_z2_field,
                                     power_profile, radial_field)
from heisenberg_hardy.group import compose, dilate, gauge

T = coordinate_field(-1)
X1 = coordinate_field(0)


def P(*c):
    return np.array(c, dtype=float)


def _values_only(f: ScalarField) -> ScalarField:
    return ScalarField(eval=f.eval, label=f.label + "-fd")


def _smooth_field():
    # analytic partials of exp(-|xi|^2/4) * (1 + x + y t)
    def ev(p):
        x, y, t = p[:, 0], p[:, 1], p[:, 2]
        return np.exp(-(x * x + y * y + t * t) / 4) * (1 + x + y * t)

    def grad(p):
        x, y, t = p[:, 0], p[:, 1], p[:, 2]
        e = np.exp(-(x * x + y * y + t * t) / 4)
        m = 1 + x + y * t
        return np.stack([e * (1 - x * m / 2), e * (t - y * m / 2), e * (y - t * m / 2)], axis=1)

    return ScalarField(eval=ev, grad_coords=grad, label="smooth")


# -- frame fields ----------------------------------------------------------

def test_frame_field_examples():
    assert apply_frame_field(1, "X", T, P(0, 2, 5)) == pytest.approx(4.0)
    assert apply_frame_field(1, "Y", X1, P(0.3, -2.0, 7.0)) == pytest.approx(0.0)
    assert apply_frame_field(1, "Y", T, P(3, 0, 0)) == pytest.approx(-6.0)
    assert apply_frame_field(1, "T", T, P(3, 1, 0)) == pytest.approx(1.0)


def test_frame_field_errors():
    with pytest.raises(ParameterError):
        apply_frame_field(2, "X", T, P(0, 0, 0))
    with pytest.raises(ParameterError):
        apply_frame_field(1, "Z", T, P(0, 0, 0))


def test_horizontal_gradient_examples():
    G = horizontal_gradient(gauge_field(), P(1, 0, 0))
    assert np.linalg.norm(G) == pytest.approx(1.0, rel=1e-10)
    assert np.allclose(horizontal_gradient(constant_field(3.0), P(0.2, 0.4, 1.0)), 0.0)
    xi = np.array([0.5, -1.0, 0.25, 2.0, 0.3])  # n = 2
    assert np.allclose(horizontal_gradient(T, xi), [2 * 0.25, 2 * 2.0, -2 * 0.5, 2 * 1.0])


def test_finite_difference_gradient_matches_analytic(rng):
    f = _smooth_field()
    pts = random_points(rng, 100)
    ga = coord_gradient(f, pts)
    gf = coord_gradient(_values_only(f), pts)
    assert np.max(np.abs(ga - gf)) / np.max(np.abs(ga)) < 1e-6
    ha = horizontal_gradient(f, pts)
    hf = horizontal_gradient(_values_only(f), pts)
    assert np.max(np.abs(ha - hf)) / np.max(np.abs(ha)) < 1e-6


# -- divergence and sub-Laplacian -----------------------------------------

def test_divergence_of_scaled_gauge_gradient(rng):
    pts = random_points(rng, 50)
    lam = 1.7
    dfield = gauge_field()

    def V(q):
        return horizontal_gradient(dfield, q) / gauge(q)[:, None] ** lam

    d = gauge(pts)
    z2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    expected = (4 - 1 - lam) * (z2 / d ** 2) / d ** (lam + 1)
    assert np.allclose(horizontal_divergence(V, pts), expected, rtol=1e-6, atol=1e-8)


def test_divergence_of_constant_field_is_zero(rng):
    pts = random_points(rng, 20)
    assert np.allclose(horizontal_divergence(lambda q: np.tile([2.0, -1.0], (len(q), 1)), pts), 0.0)


def test_sub_laplacian_examples():
    assert sub_laplacian(gauge_field(), P(1, 0, 0)) == pytest.approx(3.0, rel=1e-10)
    assert sub_laplacian(polynomial_z2_field(), P(0.3, 0.7, -2.0)) == pytest.approx(4.0)
    xi2 = np.array([0.3, 0.7, -0.1, 0.2, 1.0])
    assert sub_laplacian(polynomial_z2_field(), xi2) == pytest.approx(8.0)
    assert sub_laplacian(T, P(1.5, -0.5, 3.0)) == pytest.approx(0.0, abs=1e-12)


def test_sub_laplacian_is_divergence_of_gradient(rng):
    f = radial_field(PlateauProfile(0.3, 0.8, 1.4, 2.0).as_profile())
    pts = random_points(rng, 100, d_lo=0.35, d_hi=1.9)
    lap = sub_laplacian(f, pts)
    div = horizontal_divergence(lambda q: horizontal_gradient(f, q), pts)
    assert np.max(np.abs(lap - div)) <= 1e-6 * max(1.0, np.max(np.abs(lap)))


def test_sub_laplacian_from_values_only(rng):
    f = radial_field(PlateauProfile(0.3, 0.8, 1.4, 2.0).as_profile())
    pts = random_points(rng, 50, d_lo=0.35, d_hi=1.9)
    assert np.allclose(sub_laplacian(_values_only(f), pts), sub_laplacian(f, pts), atol=1e-4)


def test_product_rule_for_divergence(rng):
    pts = random_points(rng, 100)
    g = _smooth_field()

    def V(q):
        x, y, t = q[:, 0], q[:, 1], q[:, 2]
        return np.stack([np.sin(x + t), x * y - t], axis=1)

    def gV(q):
        return g.eval(q)[:, None] * V(q)

    lhs = horizontal_divergence(gV, pts)
    rhs = np.sum(horizontal_gradient(g, pts) * V(pts), axis=1) + g.eval(pts) * horizontal_divergence(V, pts)
    assert np.max(np.abs(lhs - rhs)) <= 1e-6 * max(1.0, np.max(np.abs(rhs)))


def test_left_invariance_of_frame(rng):
    g = P(0.4, -0.3, 0.9)
    f = _smooth_field()
    moved = ScalarField(eval=lambda q: f.eval(compose(np.broadcast_to(g, q.shape), q)))
    pts = random_points(rng, 50)
    lhs = horizontal_gradient(f, compose(np.broadcast_to(g, pts.shape), pts))
    rhs = horizontal_gradient(moved, pts)
    assert np.max(np.abs(lhs - rhs)) < 1e-8


def test_left_translate_helper_matches_definition(rng):
    base = _smooth_field()
    base = ScalarField(eval=base.eval, grad_coords=base.grad_coords,
                       hess_coords=lambda q: np.zeros((len(q), 3, 3)))
    g = P(0.5, 0.2, -0.4)
    moved = left_translate(base, g)
    pts = random_points(rng, 20)
    ginv = np.broadcast_to(-g, pts.shape)
    assert np.allclose(moved.eval(pts), base.eval(compose(ginv, pts)), rtol=1e-13)


# -- p-sub-Laplacian -------------------------------------------------------

def test_p_sub_laplacian_reduces_at_p2(rng):
    f = radial_field(PlateauProfile(0.3, 0.8, 1.4, 2.0).as_profile())
    pts = random_points(rng, 30, d_lo=0.35, d_hi=1.9)
    assert np.allclose(p_sub_laplacian(f, pts, 2.0), sub_laplacian(f, pts))


def test_p_sub_laplacian_errors_and_constants():
    with pytest.raises(ParameterError):
        p_sub_laplacian(gauge_field(), P(1, 0, 0), 1.0)
    assert p_sub_laplacian(constant_field(), P(1, 1, 1), 3.0) == 0.0
    # |z|^2 has a critical point at z = 0 with nonzero Hessian
    with pytest.raises(SingularPointError):
        p_sub_laplacian(polynomial_z2_field(), P(0, 0, 1), 1.5)


def _random_profile(rng):
    c = rng.uniform(0.5, 1.5, size=3)
    return GaugeRadialProfile(
        phi=lambda r: c[0] * np.sin(c[1] * r) + c[2] * r ** 2,
        dphi=lambda r: c[0] * c[1] * np.cos(c[1] * r) + 2 * c[2] * r,
        d2phi=lambda r: -c[0] * c[1] ** 2 * np.sin(c[1] * r) + 2 * c[2],
    )


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.5])
def test_gauge_radial_closed_form_matches_operators(rng, p):
    prof = _random_profile(rng)
    f = radial_field(prof)
    pts = random_points(rng, 40, d_lo=0.3, d_hi=1.0)
    closed = gauge_radial_p_sub_laplacian(prof, pts, p)
    scale = max(1.0, np.max(np.abs(closed)))
    assert np.max(np.abs(p_sub_laplacian(f, pts, p) - closed)) <= 1e-5 * scale
    assert np.max(np.abs(p_sub_laplacian_flux(f, pts, p) - closed)) <= 1e-5 * scale


def test_gauge_radial_examples(rng):
    pts = random_points(rng, 20)
    d = gauge(pts)
    z2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    assert np.allclose(gauge_radial_p_sub_laplacian(power_profile(1.0), pts, 2.0),
                       (z2 / d ** 2) * 3 / d)
    const = power_profile(0.0)
    assert np.allclose(gauge_radial_p_sub_laplacian(const, pts, 3.0), 0.0)
    with pytest.raises(SingularPointError):
        gauge_radial_p_sub_laplacian(const, P(0, 0, 0), 2.0)


# -- gauge identities ------------------------------------------------------

def test_gauge_identities_examples():
    rep = check_gauge_identities(P(1, 0, 0), 3.0)
    assert rep.max_residual() <= 1e-6
    assert [name for name, _ in rep.rows()] == [
        "grad_norm", "sub_laplacian", "z_power_cross", "ratio_power_cross", "infinity_laplacian"]
    axis = P(0, 0, 1.3)
    assert np.linalg.norm(horizontal_gradient(gauge_field(), axis)) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(SingularPointError):
        check_gauge_identities(P(0, 0, 0))


def test_gauge_identities_random_points(rng):
    pts = random_points(rng, 200)
    for p in (1.5, 2.0, 3.0):
        assert check_gauge_identities(pts, p).max_residual() <= 1e-6


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(1.2, 5.0))
def test_gauge_identities_dilation_covariant(lam, p):
    xi = P(0.6, -0.4, 0.5)
    assert check_gauge_identities(dilate(lam, xi), p).max_residual() <= 1e-6


def test_identities_in_higher_dimension(rng):
    pts = random_points(rng, 50, n=2)
    assert check_gauge_identities(pts, 2.5).max_residual() <= 1e-6
