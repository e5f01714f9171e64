import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from heisenberg_hardy.errors import ParameterError
from heisenberg_hardy.group import (GroupParams, GroupPoint, compose, dilate, distance,
                                    distance_closed_form, gauge, inverse)

coord = st.floats(-5, 5, allow_nan=False)
point3 = arrays(np.float64, 3, elements=coord)
point5 = arrays(np.float64, 5, elements=coord)


def P(*c):
    return np.array(c, dtype=float)


def test_params():
    assert GroupParams(1).Q == 4
    assert GroupParams(3).Q == 8
    with pytest.raises(ParameterError):
        GroupParams(0)


def test_point_validation():
    with pytest.raises(ParameterError):
        GroupPoint((1.0,), (np.inf,), 0.0)
    with pytest.raises(ParameterError):
        GroupPoint((1.0, 2.0), (0.0,), 0.0)
    g = GroupPoint.from_array([1, 2, 3])
    assert g.n == 1 and np.array_equal(g.to_array(), P(1, 2, 3))


def test_compose_examples():
    assert np.array_equal(compose(P(1, 0, 0), P(0, 1, 0)), P(1, 1, -2))
    assert np.array_equal(compose(P(0, 1, 0), P(1, 0, 0)), P(1, 1, 2))
    xi = P(0.3, -1.2, 4.0)
    assert np.array_equal(compose(xi, P(0, 0, 0)), xi)
    out = compose(GroupPoint.from_array([1, 0, 0]), GroupPoint.from_array([0, 1, 0]))
    assert isinstance(out, GroupPoint) and out.t == -2.0


def test_compose_dimension_mismatch():
    with pytest.raises(ParameterError):
        compose(P(1, 0, 0), P(0, 0, 0, 0, 0))


def test_inverse_examples():
    assert np.array_equal(inverse(P(1, 2, 3)), P(-1, -2, -3))
    assert np.array_equal(compose(P(1, 0, 0), inverse(P(1, 0, 0))), P(0, 0, 0))
    assert np.array_equal(inverse(P(0, 0, 0)), P(0, 0, 0))


def test_dilate_examples():
    assert np.array_equal(dilate(2.0, P(1, 1, 1)), P(2, 2, 4))
    xi = P(0.7, 0.1, -0.3)
    assert np.array_equal(dilate(1.0, xi), xi)
    with pytest.raises(ParameterError):
        dilate(0.0, xi)
    with pytest.raises(ParameterError):
        dilate(-1.0, xi)


def test_gauge_examples():
    assert gauge(P(1, 0, 0)) == 1.0
    assert gauge(P(0, 0, 1)) == 1.0
    assert gauge(P(1, 1, 2)) == pytest.approx(8 ** 0.25, rel=1e-15)
    assert gauge(P(1, 1, 2)) == pytest.approx(1.681793, abs=1e-6)


def test_distance_examples():
    xi = P(0.4, -0.2, 1.1)
    assert distance(xi, xi) == 0.0
    assert distance(xi, P(0, 0, 0)) == pytest.approx(gauge(xi), rel=1e-15)
    a, b = P(1, 0, 0), P(0, 1, 0)
    # (0,1,0)^-1 o (1,0,0) = (1,-1,-2), so |z|^4 = t^2 = 4
    assert distance(a, b) == pytest.approx(8 ** 0.25, rel=1e-14)
    assert distance_closed_form(a, b) == pytest.approx(distance(a, b), rel=1e-14)


def _rel(a, b):
    return np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b)))


@settings(max_examples=200, deadline=None)
@given(point5, point5, point5)
def test_associativity(a, b, c):
    assert _rel(compose(compose(a, b), c), compose(a, compose(b, c))) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(point3, point3, point3)
def test_left_invariance_of_distance(g, a, b):
    lhs = distance(compose(g, a), compose(g, b))
    # rounding of t enters the gauge through a square root
    assert lhs == pytest.approx(distance(a, b), rel=1e-10, abs=1e-7)


@settings(max_examples=200, deadline=None)
@given(point3, st.floats(0.01, 100.0))
def test_gauge_homogeneity(xi, lam):
    assert gauge(dilate(lam, xi)) == pytest.approx(lam * gauge(xi), rel=1e-12, abs=1e-300)


@settings(max_examples=200, deadline=None)
@given(point5, point5)
def test_distance_formulas_agree(a, b):
    assert distance_closed_form(a, b) == pytest.approx(distance(a, b), rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(point3)
def test_inverse_is_two_sided(xi):
    assert np.allclose(compose(inverse(xi), xi), 0.0, atol=1e-12)
    assert np.allclose(compose(xi, inverse(xi)), 0.0, atol=1e-12)


def test_batched_matches_pointwise(rng):
    a = rng.normal(size=(50, 3))
    b = rng.normal(size=(50, 3))
    batch = compose(a, b)
    for k in range(50):
        assert np.array_equal(batch[k], compose(a[k], b[k]))
