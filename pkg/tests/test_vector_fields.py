import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_points
from heisenberg_hardy.calculus import ScalarField
from heisenberg_hardy.corpus import (ball_corpus, corpus_function, halfspace_corpus,
                                     random_bumps)
from heisenberg_hardy.errors import DomainError, ParameterError
from heisenberg_hardy.group import gauge
from heisenberg_hardy.inequalities import evaluate_hardy
from heisenberg_hardy.vector_fields import (Domain, HalfSpaceSpec, VectorFieldSpec,
                                            ball_divergence_lower_bound, ball_field,
                                            divergence_functional, divergence_identity,
                                            example1_alpha_star, example1_alpha_star_literal,
                                            example1_field, example1_functional,
                                            example1_optimize_alpha, field_registry,
                                            halfspace_angle_function, halfspace_field,
                                            horizontal_gauge_gradient, log_field,
                                            verify_ball_hardy, verify_field_inequality,
                                            verify_halfspace_hardy, verify_log_hardy)

ZERO_FIELD = VectorFieldSpec(lambda p: np.zeros((len(p), 2)), lambda p: np.zeros(len(p)),
                             label="zero")
ZERO = ScalarField(eval=lambda p: np.zeros(len(p)), grad_coords=lambda p: np.zeros(p.shape),
                   hess_coords=lambda p: np.zeros((len(p), 3, 3)), label="zero",
                   support=(np.array([1.0, 0.0, 0.0]), 0.0, 0.4))
X_HALF = HalfSpaceSpec((1.0, 0.0, 0.0), 0.0)


# -- divergence functional -------------------------------------------------

def test_zero_field_functional(rng):
    pts = random_points(rng, 10)
    assert np.all(divergence_functional(ZERO_FIELD, 2.0, pts) == 0.0)


@pytest.mark.parametrize("p, alpha", [(1.5, 0.3), (2.0, 1.0), (3.0, -0.7)])
def test_example1_functional_closed_form(rng, p, alpha):
    Q = 4
    pts = random_points(rng, 30)
    z = np.linalg.norm(pts[:, :-1], axis=1)
    d = gauge(pts)
    expected = -(p - 1) * (alpha * (p - Q) / (p - 1) + abs(alpha) ** (p / (p - 1))) * z ** p / d ** (2 * p)
    got = divergence_functional(example1_field(alpha, p), p, pts)
    assert np.allclose(got, expected, rtol=1e-12, atol=1e-14)


def test_analytic_divergences_match_finite_differences(rng):
    pts = random_points(rng, 100, d_lo=0.3, d_hi=1.8)
    hs = HalfSpaceSpec((1.0, 0.5, 0.3), -0.2)
    fields = [example1_field(0.8, 1.5), example1_field(1.0, 2.0), example1_field(0.2, 3.0),
              ball_field(3.0, 2.0), ball_field(2.5, 3.0), log_field(4.0, 4.0)]
    for V in fields:
        a, f = V.divergence(pts), V.divergence(pts, finite_difference=True)
        assert np.max(np.abs(a - f) / np.maximum(1.0, np.abs(a))) < 1e-5, V.label
    inside = pts[hs.distance(pts) > 0.1]
    V = halfspace_field(hs, 2.5)
    a, f = V.divergence(inside), V.divergence(inside, finite_difference=True)
    assert np.max(np.abs(a - f) / np.maximum(1.0, np.abs(a))) < 1e-5


def test_domain_errors():
    V = ball_field(1.0, 2.0)
    with pytest.raises(DomainError):
        divergence_functional(V, 2.0, np.array([0.0, 0.0, 4.0]))
    with pytest.raises(ParameterError):
        divergence_functional(V, 1.0, np.array([0.5, 0.0, 0.0]))
    with pytest.raises(ParameterError):
        Domain("torus").contains(np.zeros((1, 3)))
    with pytest.raises(ParameterError):
        HalfSpaceSpec((0.0, 0.0, 0.0))


# -- the alpha optimisation ------------------------------------------------

@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_alpha_optimisation(p):
    res = example1_optimize_alpha(p, 4)
    assert res.agrees
    assert abs(res.alpha - example1_alpha_star(p, 4)) <= 1e-6
    assert abs(res.value - ((4 - p) / p) ** p) <= 1e-10


def test_alpha_examples():
    assert example1_optimize_alpha(2.0, 4).alpha == pytest.approx(1.0, abs=1e-6)
    assert example1_optimize_alpha(2.0, 4).value == pytest.approx(1.0, abs=1e-10)
    assert example1_optimize_alpha(3.0, 4).value == pytest.approx(1 / 27, abs=1e-10)
    # the printed sign convention coincides only for odd integer p - 1
    assert example1_alpha_star_literal(2.0, 4) == pytest.approx(example1_alpha_star(2.0, 4))
    assert example1_alpha_star_literal(3.0, 4).real == pytest.approx(-1 / 9)
    with pytest.raises(ParameterError):
        example1_optimize_alpha(4.0, 4)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 3.5])
def test_closed_form_alpha_is_global_max(p):
    star = example1_alpha_star(p, 4)
    best = example1_functional(star, p, 4)
    grid = np.linspace(-5 * star - 1, 5 * star + 1, 1000)
    assert max(example1_functional(a, p, 4) for a in grid) <= best + 1e-12


# -- field inequality ------------------------------------------------------

def test_zero_field_inequality(bump, spec):
    rep = verify_field_inequality(ZERO_FIELD, 2.0, bump, spec)
    assert rep.lhs == 0.0 and rep.rhs > 0 and rep.passed


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_example1_reproduces_hardy(bump, spec, p):
    V = example1_field(example1_alpha_star(p, 4), p)
    rep = verify_field_inequality(V, p, bump, spec)
    hardy = evaluate_hardy(p, bump, spec)
    assert rep.passed and rep.margin >= 0
    assert rep.lhs == pytest.approx(hardy.constant * hardy.lhs, rel=1e-5)
    assert rep.rhs == pytest.approx(hardy.rhs, rel=1e-5)


def test_chain_on_random_bumps(spec):
    V = example1_field(0.7, 2.5)
    for f in random_bumps(10, seed=17):
        rep = verify_field_inequality(V, 2.5, f, spec)
        assert rep.passed and rep.extras["chain_ok"]
        assert abs(rep.extras["identity_residual"]) <= rep.extras["identity_err"] + 1e-9


def test_compact_support_identity(spec):
    V = ball_field(3.0, 2.0)
    for f in ball_corpus()[:3]:
        resid, err, (j1, _) = divergence_identity(V, 2.0, f, spec)
        assert abs(resid) <= err + 1e-9 * abs(j1)


# -- half-space ------------------------------------------------------------

def test_angle_function():
    xi = np.array([0.3, -1.2, 5.0])
    assert halfspace_angle_function(X_HALF, xi) == 1.0
    vert = HalfSpaceSpec((0.0, 0.0, 1.0))
    assert halfspace_angle_function(vert, xi) == pytest.approx(2 * math.hypot(0.3, -1.2))
    pts = np.array([[0.3, 0.4, t] for t in (-3.0, 0.0, 2.0)])
    assert np.ptp(halfspace_angle_function(HalfSpaceSpec((0.2, 0.7, -1.0)), pts)) == 0.0


def test_halfspace_hardy(spec):
    for f in halfspace_corpus()[:2]:
        rep = verify_halfspace_hardy(X_HALF, 2.0, f, spec)
        assert rep.constant == 0.25
        assert rep.passed and rep.margin >= 0
        field_lhs = rep.extras["field_lhs"]
        assert abs(field_lhs - rep.constant * rep.lhs) <= (
            rep.extras["field_lhs_err"] + rep.constant * rep.lhs_err + 1e-9 * field_lhs)


def test_halfspace_support_violation(bump, spec):
    with pytest.raises(DomainError):
        verify_halfspace_hardy(X_HALF, 2.0, bump, spec)


def test_halfspace_zero_function(spec):
    rep = verify_halfspace_hardy(X_HALF, 2.0, ZERO, spec)
    assert rep.lhs == 0 and rep.rhs == 0 and rep.passed


# -- ball and logarithmic inequalities -------------------------------------

def test_ball_divergence_bound(rng):
    pts = random_points(rng, 100, d_lo=0.05, d_hi=2.9)
    V = ball_field(3.0, 2.0)
    assert np.all(V.divergence(pts, finite_difference=True)
                  - ball_divergence_lower_bound(3.0, 2.0, pts) >= -1e-6)


def test_ball_hardy(spec):
    for f in ball_corpus()[:2]:
        rep = verify_ball_hardy(3.0, 2.0, f, spec)
        assert rep.passed and rep.margin >= 0


def test_ball_support_violation(spec):
    with pytest.raises(DomainError):
        verify_ball_hardy(1.5, 2.0, corpus_function("radial-bump"), spec)


def test_log_divergence_identity(rng):
    pts = random_points(rng, 100, d_lo=0.2, d_hi=3.0)
    V = log_field(4.0, 4.0)
    d, G = horizontal_gauge_gradient(pts)
    gamma = 0.75
    expected = 3 * gamma ** 3 * np.linalg.norm(G, axis=1) ** 4 / (d * np.log(4.0 / d)) ** 4
    fd = V.divergence(pts, finite_difference=True)
    assert np.max(np.abs(fd - expected) / np.maximum(1.0, expected)) < 1e-5


def test_log_hardy(spec):
    for f in ball_corpus()[:2]:
        rep = verify_log_hardy(4.0, f, spec)
        assert rep.passed and rep.margin >= 0
    with pytest.raises(ParameterError):
        verify_log_hardy(4.0, ball_corpus()[0], spec, p=2.0)


def test_registry_labels():
    reg = field_registry()
    assert list(reg) == ["radial", "halfspace", "ball", "log"]
    assert all(isinstance(v, VectorFieldSpec) for v in reg.values())


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_horizontal_normal_matches_frame(x, y, t):
    hs = HalfSpaceSpec((0.4, -0.3, 0.8), 0.1)
    xi = np.array([[x, y, t]])
    X = np.array([1.0, 0.0, 2 * y])
    Y = np.array([0.0, 1.0, -2 * x])
    nu = np.array(hs.nu)
    assert np.allclose(hs.horizontal_normal(xi)[0], [X @ nu, Y @ nu])
