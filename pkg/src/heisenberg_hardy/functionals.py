"""Weighted integral functionals of a test function.

A :class:`Term` is a product of powers of pointwise quantities of ``f``
(its value, the norm of its horizontal gradient, its sub-Laplacian, ...)
times ``|z|^zpow d^{-dpow}``.  :func:`integrate_terms` integrates any number
of terms with one shared cubature, so every quantity is computed once per
node.  Terms are hashable and duplicates are integrated only once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .calculus import ScalarField, _p_laplacian_from_parts, horizontal_gradient, horizontal_hessian
from .errors import ParameterError
from .fields import gauge_derivatives
from .group import gauge
from .quadrature import IntegralResult, QuadratureSpec, integrate

__all__ = ["Factor", "Term", "PointData", "integrate_terms", "integration_region", "TermValues"]

# quantities taken in absolute value
_ABS = {"f", "grad", "lap", "plap"}
# quantities kept with their sign (power must be 1)
_SIGNED = {"f_graddot", "lap_graddot", "plap_graddot"}


@dataclass(frozen=True)
class Factor:
    """``|quantity|^power``; signed quantities enter linearly.

    ``f``: the function; ``grad``: ``|grad_H f|``; ``lap``: ``Delta_H f``;
    ``plap``: the p-sub-Laplacian (needs ``p``); ``f_graddot``:
    ``f <grad_H f, grad_H d>``; ``lap_graddot`` / ``plap_graddot``:
    the (p-)sub-Laplacian times ``<grad_H f, grad_H d>``.
    """

    name: str
    power: float = 1.0
    p: float | None = None

    def __post_init__(self):
        if self.name not in _ABS | _SIGNED:
            raise ParameterError(f"unknown quantity {self.name!r}")
        if self.name in _SIGNED and self.power != 1.0:
            raise ParameterError("signed quantities enter with power 1")
        if self.name.startswith("plap") and self.p is None:
            raise ParameterError("p-sub-Laplacian factors need p")


@dataclass(frozen=True)
class Term:
    """``prod(factors) * |z|^zpow * d^(-dpow)``."""

    factors: tuple
    zpow: float = 0.0
    dpow: float = 0.0

    def __post_init__(self):
        if self.zpow < 0:
            raise ParameterError("negative powers of |z| are not supported")
        object.__setattr__(self, "factors", tuple(self.factors))

    def evaluate(self, ctx: "PointData") -> np.ndarray:
        out = ctx.z ** self.zpow * ctx.d ** (-self.dpow)
        for fac in self.factors:
            val = ctx.quantity(fac.name, fac.p)
            if fac.name in _SIGNED:
                out = out * val
            elif fac.power == 0:
                continue
            else:
                out = out * np.abs(val) ** fac.power
        return out


class PointData:
    """Lazily computed pointwise data of ``f`` on a batch of points."""

    def __init__(self, f: ScalarField, pts: np.ndarray):
        self.f_field = f
        self.pts = pts
        self._cache = {}
        d, gd, _ = gauge_derivatives(pts)
        self.d = d
        self.z = np.sqrt(np.sum(pts[:, :-1] ** 2, axis=1))
        self._grad_d_coords = gd

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def f(self):
        return self._get("f", lambda: np.asarray(self.f_field.eval(self.pts), dtype=float))

    @property
    def G(self):
        return self._get("G", lambda: horizontal_gradient(self.f_field, self.pts))

    @property
    def HH(self):
        return self._get("HH", lambda: horizontal_hessian(self.f_field, self.pts))

    @property
    def grad_d(self):
        def build():
            n = (self.pts.shape[1] - 1) // 2
            x, y = self.pts[:, :n], self.pts[:, n:2 * n]
            gd = self._grad_d_coords
            return np.concatenate([gd[:, :n] + 2.0 * y * gd[:, -1:],
                                   gd[:, n:2 * n] - 2.0 * x * gd[:, -1:]], axis=1)

        return self._get("grad_d", build)

    def plap(self, p):
        return self._get(("plap", p), lambda: _p_laplacian_from_parts(self.G, self.HH, p))

    def quantity(self, name, p=None):
        if name == "f":
            return self.f
        if name == "grad":
            return self._get("gradnorm", lambda: np.linalg.norm(self.G, axis=1))
        if name == "lap":
            return self._get("lap", lambda: np.trace(self.HH, axis1=1, axis2=2))
        if name == "plap":
            return self.plap(p)
        dot = self._get("graddot", lambda: np.sum(self.G * self.grad_d, axis=1))
        if name == "f_graddot":
            return self.f * dot
        if name == "lap_graddot":
            return self.quantity("lap") * dot
        return self.plap(p) * dot


@dataclass(frozen=True)
class TermValues:
    """Integrals of a list of terms with per-term error estimates."""

    values: dict
    errors: dict
    converged: bool
    evaluations: int

    def __getitem__(self, term):
        return self.values[term]

    def error(self, term):
        return self.errors[term]


def integration_region(f: ScalarField, spec: QuadratureSpec) -> dict:
    """Tightest region known to hold the support of ``f`` inside the annulus.

    Gauge-radial supports shrink the annulus; supports around a centre ``c``
    use polar coordinates about ``c`` when the triangle inequality places
    the whole ball inside the annulus.  Otherwise the full annulus is used.
    """
    if f.support is None:
        return {}
    centre, lo, hi = f.support
    if centre is None:
        r_lo, r_hi = max(spec.epsilon, lo), min(spec.R_outer, hi)
        if r_lo >= r_hi:
            return {}
        return {"radii": (r_lo, r_hi)}
    dc = float(gauge(np.asarray(centre, dtype=float)))
    if dc - hi < spec.epsilon or dc + hi > spec.R_outer:
        return {}
    # below 1e-6 hi the ball carries a relative share of order 1e-6^Q
    return {"centre": np.asarray(centre, dtype=float), "radii": (lo if lo > 0 else 1e-6 * hi, hi)}


def integrate_terms(f: ScalarField, terms: Iterable, spec: QuadratureSpec) -> TermValues:
    """Integrate every term over the annulus of ``spec`` with a shared cubature.

    Terms need only expose ``evaluate(PointData) -> array``; those defined
    here are :class:`Term`, and vector-field functionals add their own.
    """
    unique = list(dict.fromkeys(terms))
    if not unique:
        return TermValues({}, {}, True, 0)

    def g(pts):
        ctx = PointData(f, pts)
        return np.stack([np.asarray(t.evaluate(ctx), dtype=float) for t in unique], axis=1)

    res: IntegralResult = integrate(g, spec, **integration_region(f, spec))
    vals = np.atleast_1d(res.value)
    errs = np.atleast_1d(res.abs_error_estimate)
    return TermValues({t: float(v) for t, v in zip(unique, vals)},
                      {t: float(e) for t, e in zip(unique, errs)},
                      res.converged, res.evaluations)
