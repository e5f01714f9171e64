"""Standard test-function corpus.

Every function is smooth (C^4) and vanishes outside ``0.05 <= d <= 4``, so
integrals over the default annulus are exact integrals over H^n.  Labels are
stable and used by the runner's configuration.
"""

from __future__ import annotations

import numpy as np

from .calculus import ScalarField
from .errors import ParameterError
from .fields import (PlateauProfile, affine_pullback, left_translate, linear_multiplier,
                     product, radial_field)
from .group import gauge

__all__ = [
    "standard_corpus",
    "corpus_labels",
    "corpus_function",
    "halfspace_corpus",
    "ball_corpus",
    "random_bumps",
    "support_bounds",
]


def _point(n, x=0.0, y=0.0, t=0.0):
    v = np.zeros(2 * n + 1)
    v[0], v[n], v[-1] = x, y, t
    return v


def _radial(prof: PlateauProfile, label):
    return radial_field(prof.as_profile(label), label=label, support=(None, prof.r0 or 0.0, prof.r3))


def _ball(n, centre, radius, label):
    prof = PlateauProfile(None, None, 0.4 * radius, radius)
    base = radial_field(prof.as_profile(label), label=label, support=(None, 0.0, radius))
    return left_translate(base, centre, label=label)


def _builders(n):
    bump = PlateauProfile(0.3, 0.8, 1.4, 2.0)
    aniso = np.eye(2 * n + 1)
    aniso[:n, :n] /= 1.5
    aniso[n:2 * n, n:2 * n] /= 0.8
    aniso[-1, -1] /= 1.2
    return {
        "radial-bump": lambda: _radial(bump, "radial-bump"),
        "radial-narrow": lambda: _radial(PlateauProfile(0.5, 0.75, 0.95, 1.2), "radial-narrow"),
        "radial-wide": lambda: _radial(PlateauProfile(0.15, 0.6, 2.5, 3.5), "radial-wide"),
        "radial-peak": lambda: _radial(PlateauProfile(0.4, 1.0, 1.0, 1.8), "radial-peak"),
        "nonradial-x": lambda: product(
            _radial(bump, "radial-bump"),
            linear_multiplier(_point(n, x=0.25), 1.0), label="nonradial-x"),
        "nonradial-mixed": lambda: product(
            _radial(bump, "radial-bump"),
            linear_multiplier(_point(n, y=0.2, t=0.125), 1.0), label="nonradial-mixed"),
        "shifted-ball-a": lambda: _ball(n, _point(n, x=1.0), 0.5, "shifted-ball-a"),
        "shifted-ball-b": lambda: _ball(n, _point(n, x=0.5, y=-0.7, t=0.8), 0.6, "shifted-ball-b"),
        "translated-shell": lambda: left_translate(
            _radial(PlateauProfile(0.5, 0.7, 0.9, 1.2), "shell"),
            _point(n, x=0.2, y=0.1, t=0.1), label="translated-shell"),
        # d(A xi) in [0.3, 2] forces d(xi) in [0.8 * 0.3, 1.5 * 2]
        "anisotropic": lambda: affine_pullback(
            _radial(bump, "radial-bump"), aniso, np.zeros(2 * n + 1), label="anisotropic",
            support=(None, 0.24, 3.0)),
    }


def corpus_labels(n: int = 1) -> list:
    return list(_builders(n))


def corpus_function(label: str, n: int = 1) -> ScalarField:
    try:
        return _builders(n)[label]()
    except KeyError:
        raise ParameterError(f"unknown corpus label {label!r}") from None


def standard_corpus(n: int = 1) -> list:
    """The ten corpus functions: radial, non-radial, shifted and anisotropic bumps."""
    return [build() for build in _builders(n).values()]


def halfspace_corpus(n: int = 1) -> list:
    """Five shifted ball bumps supported in ``{x_1 > 0.2}``."""
    spots = [((0.8, 0.0, 0.0), 0.5), ((1.0, 0.5, 0.3), 0.6), ((1.5, -0.5, 1.0), 0.8),
             ((0.7, 0.3, -0.4), 0.45), ((1.2, 0.0, 2.0), 0.7)]
    return [_ball(n, _point(n, *c), r, f"halfspace-ball-{k}") for k, (c, r) in enumerate(spots)]


def ball_corpus(n: int = 1) -> list:
    """Five corpus functions supported in ``0.2 <= d <= 2``."""
    labels = ["radial-bump", "radial-narrow", "radial-peak", "nonradial-x", "shifted-ball-a"]
    return [corpus_function(lb, n) for lb in labels]


def support_bounds(f: ScalarField):
    """Gauge bounds ``(d_min, d_max)`` of the support of ``f``, or ``None`` if unknown.

    Uses the triangle inequality for the gauge around the support centre.
    """
    if f.support is None:
        return None
    centre, lo, hi = f.support
    if centre is None:
        return float(lo), float(hi)
    dc = float(gauge(np.asarray(centre, dtype=float)))
    return max(0.0, dc - hi) if lo == 0 else max(0.0, lo - dc, dc - hi), dc + hi


def random_bumps(count: int, seed: int = 0, n: int = 1) -> list:
    """Random plateau bumps times random positive affine multipliers (reproducible)."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        r0 = rng.uniform(0.1, 0.6)
        r1 = r0 + rng.uniform(0.2, 0.6)
        r2 = r1 + rng.uniform(0.0, 0.8)
        r3 = r2 + rng.uniform(0.2, 0.8)
        coeff = rng.uniform(-0.1, 0.1, size=2 * n + 1)
        base = _radial(PlateauProfile(r0, r1, r2, r3), f"random-{k}")
        out.append(product(base, linear_multiplier(coeff, 1.0), label=f"random-bump-{k}"))
    return out
