import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heisenberg_hardy.optimize import golden_minimize, minimize, simplex_minimize


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3))
def test_golden_finds_parabola_vertex(c):
    res = golden_minimize(lambda x: (x - c) ** 2 + 1.0, (-5.0, 5.0), xtol=1e-10)
    assert res.converged
    assert res.x[0] == pytest.approx(c, abs=1e-6)
    assert res.fun == pytest.approx(1.0, abs=1e-12)


def test_golden_end_point():
    res = golden_minimize(lambda x: x, (1.0, 2.0))
    assert res.x[0] == 1.0 and res.message == "minimum at interval end"


def test_simplex_rosenbrock():
    def rosen(v):
        return (1 - v[0]) ** 2 + 100 * (v[1] - v[0] ** 2) ** 2

    res = simplex_minimize(rosen, [-1.0, 1.5], xatol=1e-9, fatol=1e-14, maxiter=5000)
    assert res.converged
    assert np.allclose(res.x, [1.0, 1.0], atol=1e-6)
    assert res.evaluations == len(res.history)


def test_dispatch():
    assert minimize(lambda x: (x[0] - 0.3) ** 2, bounds=[(0, 1)]).method == "golden"
    assert minimize(lambda x: np.sum(x ** 2), x0=[1.0, 1.0]).method == "nelder-mead"
    with pytest.raises(ValueError):
        minimize(lambda x: 0.0)
