import numpy as np
import pytest

from heisenberg_hardy.corpus import corpus_function
from heisenberg_hardy.quadrature import QuadratureSpec


def random_points(rng, count, n=1, d_lo=0.2, d_hi=3.0):
    """Points with gauge in ``[d_lo, d_hi]``, sampled by rejection from a box."""
    from heisenberg_hardy.group import gauge

    out = []
    while sum(len(o) for o in out) < count:
        cand = rng.uniform(-d_hi, d_hi, size=(4 * count, 2 * n + 1))
        cand[:, -1] *= d_hi
        d = gauge(cand)
        out.append(cand[(d >= d_lo) & (d <= d_hi)])
    return np.concatenate(out)[:count]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def spec():
    return QuadratureSpec(target_rel_tol=1e-6)


@pytest.fixture(scope="session")
def loose_spec():
    return QuadratureSpec(target_rel_tol=1e-5)


@pytest.fixture(scope="session")
def bump():
    return corpus_function("radial-bump")


CRITERIA: list = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the lines are printed after the run."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        CRITERIA.append((number, title, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(CRITERIA, key=lambda c: c[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{number}] {title}: {detail}")
