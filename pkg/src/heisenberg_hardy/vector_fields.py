"""Hardy inequalities from horizontal vector fields.

For a horizontal field ``V`` and ``f`` supported where ``V`` is smooth,

    int |grad_H f|^p  >=  int (div_H V - (p-1)|V|^q) |f|^p,

which follows from integrating ``div_H(|f|^p V)`` and applying Hölder and
Young.  The four shipped fields give the radial Hardy inequality, a
half-space inequality with the angle function, a punctured-ball inequality
and a logarithmic inequality at ``p = Q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .calculus import ScalarField, horizontal_divergence
from .errors import DomainError, ParameterError
from .fields import gauge_derivatives
from .functionals import Factor, PointData, Term, integrate_terms
from .inequalities import VerificationReport, _REL_FLOOR
from .optimize import OptimizationResult, golden_minimize
from .quadrature import QuadratureSpec

__all__ = [
    "Domain",
    "HalfSpaceSpec",
    "VectorFieldSpec",
    "horizontal_gauge_gradient",
    "divergence_functional",
    "verify_field_inequality",
    "divergence_identity",
    "example1_field",
    "example1_functional",
    "example1_alpha_star",
    "example1_alpha_star_literal",
    "example1_optimize_alpha",
    "AlphaResult",
    "halfspace_angle_function",
    "halfspace_field",
    "verify_halfspace_hardy",
    "ball_field",
    "verify_ball_hardy",
    "log_field",
    "verify_log_hardy",
    "field_registry",
]


@dataclass(frozen=True)
class HalfSpaceSpec:
    """``{xi : <xi, nu> > delta}`` with the Euclidean inner product of coordinates."""

    nu: tuple
    delta: float = 0.0

    def __post_init__(self):
        nu = np.asarray(self.nu, dtype=float)
        if nu.ndim != 1 or nu.size % 2 != 1:
            raise ParameterError("nu needs 2n+1 components")
        if not np.any(nu != 0):
            raise ParameterError("nu must be nonzero")
        object.__setattr__(self, "nu", tuple(float(v) for v in nu))

    @property
    def n(self) -> int:
        return (len(self.nu) - 1) // 2

    def distance(self, pts) -> np.ndarray:
        """``<xi, nu> - delta``."""
        return np.asarray(pts, dtype=float) @ np.asarray(self.nu) - self.delta

    def horizontal_normal(self, pts) -> np.ndarray:
        """Frame components ``(<X_j, nu>, <Y_j, nu>)`` of ``grad_H <xi, nu>``."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        n = self.n
        nu = np.asarray(self.nu)
        x, y = pts[:, :n], pts[:, n:2 * n]
        return np.concatenate([nu[:n] + 2.0 * y * nu[-1], nu[n:2 * n] - 2.0 * x * nu[-1]], axis=1)


@dataclass(frozen=True)
class Domain:
    """Where a field is smooth: ``whole-annulus``, ``half-space``, ``punctured-ball`` or ``bounded``."""

    kind: str = "whole-annulus"
    halfspace: Optional[HalfSpaceSpec] = None
    radius: float = math.inf
    predicate: Optional[Callable] = None

    def contains(self, pts) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        z2 = np.sum(pts[:, :-1] ** 2, axis=1)
        d = (z2 * z2 + pts[:, -1] ** 2) ** 0.25
        if self.kind == "whole-annulus":
            return d > 0
        if self.kind == "half-space":
            return self.halfspace.distance(pts) > 0
        if self.kind == "punctured-ball":
            return (d > 0) & (d < self.radius)
        if self.kind == "bounded":
            return np.asarray(self.predicate(pts), dtype=bool)
        raise ParameterError(f"unknown domain kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class VectorFieldSpec:
    """A horizontal field given by its frame coefficients.

    ``V`` maps ``(N, 2n+1)`` points to ``(N, 2n)`` coefficients; the optional
    ``analytic_divergence`` maps points to ``div_H V``.
    """

    V: Callable[[np.ndarray], np.ndarray]
    analytic_divergence: Optional[Callable[[np.ndarray], np.ndarray]] = None
    domain: Domain = field(default_factory=Domain)
    label: str = ""

    def divergence(self, pts, finite_difference: bool = False) -> np.ndarray:
        if self.analytic_divergence is not None and not finite_difference:
            return np.asarray(self.analytic_divergence(pts), dtype=float)
        return horizontal_divergence(self.V, pts)


def horizontal_gauge_gradient(pts):
    """Gauge ``d`` and frame components of ``grad_H d`` at ``(N, 2n+1)`` points."""
    pts = np.asarray(pts, dtype=float)
    n = (pts.shape[1] - 1) // 2
    d, gd, _ = gauge_derivatives(pts)
    x, y = pts[:, :n], pts[:, n:2 * n]
    G = np.concatenate([gd[:, :n] + 2.0 * y * gd[:, -1:], gd[:, n:2 * n] - 2.0 * x * gd[:, -1:]], axis=1)
    return d, G


def _conj(p):
    return p / (p - 1.0)


def divergence_functional(V: VectorFieldSpec, p: float, xi) -> np.ndarray:
    """``div_H V - (p-1)|V|^q`` at ``xi`` (one point or a batch)."""
    if not p > 1:
        raise ParameterError("need p > 1")
    pts = np.asarray(xi, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if not np.all(V.domain.contains(pts)):
        raise DomainError(f"point outside the domain of field {V.label!r}")
    vals = V.V(pts)
    out = V.divergence(pts) - (p - 1.0) * np.linalg.norm(vals, axis=1) ** _conj(p)
    return out[0] if single else out


# ---------------------------------------------------------------------------
# integrands
# ---------------------------------------------------------------------------

_PARTS = ("functional", "div", "cross", "vq", "signed")


@dataclass(frozen=True, eq=False)
class FieldTerm:
    """Integrand built from a field and ``f``, evaluated only where ``f != 0``.

    ``functional``: ``(div V - (p-1)|V|^q)|f|^p``; ``div``: ``div V |f|^p``;
    ``cross``: ``p |f|^(p-1) |grad f| |V|``; ``vq``: ``|V|^q |f|^p``;
    ``signed``: ``p |f|^(p-2) f <grad f, V>``.
    """

    field: VectorFieldSpec
    p: float
    part: str

    def evaluate(self, ctx: PointData) -> np.ndarray:
        f = ctx.f
        mask = f != 0
        out = np.zeros_like(f)
        if not np.any(mask):
            return out
        key = ("field", id(self.field))
        if key not in ctx._cache:
            pts = ctx.pts[mask]
            if not np.all(self.field.domain.contains(pts)):
                raise DomainError(f"f is not supported in the domain of field {self.field.label!r}")
            vals = self.field.V(pts)
            ctx._cache[key] = (vals, np.linalg.norm(vals, axis=1), self.field.divergence(pts))
        vals, vnorm, div = ctx._cache[key]
        p, q = self.p, _conj(self.p)
        fm = f[mask]
        af = np.abs(fm)
        if self.part == "functional":
            out[mask] = (div - (p - 1) * vnorm ** q) * af ** p
        elif self.part == "div":
            out[mask] = div * af ** p
        elif self.part == "vq":
            out[mask] = vnorm ** q * af ** p
        elif self.part == "cross":
            out[mask] = p * af ** (p - 1) * np.linalg.norm(ctx.G[mask], axis=1) * vnorm
        elif self.part == "signed":
            out[mask] = p * af ** (p - 2) * fm * np.sum(ctx.G[mask] * vals, axis=1)
        else:
            raise ParameterError(f"unknown part {self.part!r}")
        return out


@dataclass(frozen=True, eq=False)
class WeightTerm:
    """``weight(xi) |f|^power`` evaluated where ``f != 0``; ``domain`` guards the support."""

    weight: Callable[[np.ndarray], np.ndarray]
    power: float
    domain: Domain

    def evaluate(self, ctx: PointData) -> np.ndarray:
        f = ctx.f
        mask = f != 0
        out = np.zeros_like(f)
        if np.any(mask):
            pts = ctx.pts[mask]
            if not np.all(self.domain.contains(pts)):
                raise DomainError("f is not supported in the domain")
            out[mask] = self.weight(pts) * np.abs(f[mask]) ** self.power
        return out


def _report(case_id, label, lhs, lhs_err, rhs, rhs_err, constant, converged):
    margin = rhs - constant * lhs
    rep = VerificationReport(case_id, label, lhs, rhs, constant, margin, lhs_err, rhs_err,
                             False, converged)
    tol = rep.combined_error + _REL_FLOOR * (abs(rhs) + abs(constant * lhs))
    rep.passed = bool(margin >= -tol)
    return rep


def verify_field_inequality(V: VectorFieldSpec, p: float, f: ScalarField,
                            spec: QuadratureSpec) -> VerificationReport:
    """Check ``int |grad_H f|^p >= int (div_H V - (p-1)|V|^q)|f|^p``.

    The report's ``lhs`` is the field functional and ``rhs`` the gradient
    energy, constant 1.  ``extras`` carries the Hölder-Young chain
    ``I1 <= I2 <= I3 <= I4`` and the compact-support identity residual
    ``int |f|^p div V + int p|f|^(p-2) f <grad f, V>``.
    """
    if not p > 1:
        raise ParameterError("need p > 1")
    q = _conj(p)
    grad = Term((Factor("grad", p),))
    t_fun, t_div, t_cross, t_vq, t_sig = (FieldTerm(V, p, part) for part in _PARTS)
    tv = integrate_terms(f, [grad, t_fun, t_div, t_cross, t_vq, t_sig], spec)
    rep = _report(f"field-{V.label}-p{p:g}", f.label, tv[t_fun], tv.error(t_fun), tv[grad],
                  tv.error(grad), 1.0, tv.converged)
    r1, e1 = tv[grad], tv.error(grad)
    vq, evq = tv[t_vq], tv.error(t_vq)
    I1, I2 = tv[t_div], tv[t_cross]
    I3 = p * max(r1, 0) ** (1 / p) * max(vq, 0) ** (1 / q)
    I4 = r1 + (p - 1) * vq
    e3 = I3 * ((e1 / r1 if r1 else 0) / p + (evq / vq if vq else 0) / q)
    errs = [tv.error(t_div), tv.error(t_cross), e3, e1 + (p - 1) * evq]
    chain = [I1, I2, I3, I4]
    ok = all(chain[k] <= chain[k + 1] + errs[k] + errs[k + 1] + 1e-12 * abs(chain[k + 1])
             for k in range(3))
    rep.extras.update(chain=chain, chain_errors=errs, chain_ok=bool(ok),
                      identity_residual=I1 + tv[t_sig],
                      identity_err=tv.error(t_div) + tv.error(t_sig))
    return rep


def divergence_identity(V: VectorFieldSpec, p: float, f: ScalarField, spec: QuadratureSpec):
    """``int div_H(|f|^p V)`` split as ``int |f|^p div V + int p|f|^(p-2) f <grad f, V>``.

    Returns ``(residual, error estimate, (J1, J2))``; the residual vanishes
    for compactly supported ``f``.
    """
    t_div, t_sig = FieldTerm(V, p, "div"), FieldTerm(V, p, "signed")
    tv = integrate_terms(f, [t_div, t_sig], spec)
    return tv[t_div] + tv[t_sig], tv.error(t_div) + tv.error(t_sig), (tv[t_div], tv[t_sig])


# ---------------------------------------------------------------------------
# radial field and the alpha optimisation
# ---------------------------------------------------------------------------

def example1_field(alpha: float, p: float, n: int = 1) -> VectorFieldSpec:
    """``V = alpha |grad_H d|^(p-2) grad_H d / d^(p-1)`` with ``div V = alpha (Q-p)|z|^p/d^(2p)``."""
    Q = 2 * n + 2

    def V(pts):
        d, G = horizontal_gauge_gradient(pts)
        psi = np.linalg.norm(G, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = np.where(psi > 0, psi ** (p - 2), 0.0) if p < 2 else psi ** (p - 2)
        return alpha * (scale / d ** (p - 1))[:, None] * G

    def div(pts):
        pts = np.asarray(pts, dtype=float)
        z = np.linalg.norm(pts[:, :-1], axis=1)
        d, _ = horizontal_gauge_gradient(pts)
        return alpha * (Q - p) * z ** p / d ** (2 * p)

    return VectorFieldSpec(V, div, Domain("whole-annulus"), f"radial-alpha{alpha:g}-p{p:g}")


def example1_functional(alpha: float, p: float, Q: int) -> float:
    """``F(alpha) = alpha (Q-p) - (p-1)|alpha|^q``."""
    return alpha * (Q - p) - (p - 1) * abs(alpha) ** _conj(p)


def example1_alpha_star(p: float, Q: int) -> float:
    """Maximiser ``((Q-p)/p)^(p-1)`` of :func:`example1_functional`."""
    return ((Q - p) / p) ** (p - 1)


def example1_alpha_star_literal(p: float, Q: int) -> complex:
    """``-((p-Q)/p)^(p-1)`` with a real base raised to a real power.

    Agrees with :func:`example1_alpha_star` only when ``p - 1`` is an odd
    integer; kept to document the sign convention.
    """
    return -complex((p - Q) / p) ** (p - 1)


@dataclass
class AlphaResult(OptimizationResult):
    alpha_closed_form: float = math.nan
    value_closed_form: float = math.nan

    @property
    def alpha(self) -> float:
        return float(self.x[0])

    @property
    def value(self) -> float:
        return -self.fun

    @property
    def agrees(self) -> bool:
        return (abs(self.alpha - self.alpha_closed_form) <= 1e-6
                and abs(self.value - self.value_closed_form) <= 1e-10)


def example1_optimize_alpha(p: float, Q: int, xtol: float = 1e-12, maxiter: int = 500) -> AlphaResult:
    """Maximise ``F(alpha)`` by golden-section search.

    For ``1 < p < Q`` the maximiser is positive and below the second root
    ``((Q-p)/(p-1))^(p-1)`` of ``F``, which bounds the search interval.
    """
    if not 1 < p < Q:
        raise ParameterError(f"need 1 < p < Q, got p={p}, Q={Q}")
    hi = ((Q - p) / (p - 1)) ** (p - 1)
    res = golden_minimize(lambda a: -example1_functional(float(np.atleast_1d(a)[0]), p, Q),
                          (0.0, hi), xtol=xtol, maxiter=maxiter)
    return AlphaResult(res.x, res.fun, res.converged, res.evaluations, res.method, res.message,
                       res.history, example1_alpha_star(p, Q), ((Q - p) / p) ** p)


# ---------------------------------------------------------------------------
# half-space
# ---------------------------------------------------------------------------

def halfspace_angle_function(hs: HalfSpaceSpec, xi) -> np.ndarray:
    """``W(xi) = |grad_H <xi, nu>|``, the length of the horizontal part of ``nu``."""
    arr = np.asarray(xi, dtype=float)
    W = np.linalg.norm(hs.horizontal_normal(arr), axis=1)
    return float(W[0]) if arr.ndim == 1 else W


def halfspace_field(hs: HalfSpaceSpec, p: float) -> VectorFieldSpec:
    """``V = beta W^(p-2) grad_H dist / dist^(p-1)``, ``beta = -((p-1)/p)^(p-1)``.

    ``dist`` is affine with an antisymmetric horizontal Hessian, so its
    p-sub-Laplacian vanishes and ``div V = (p-1)|beta| W^p / dist^p``.
    """
    beta = -((p - 1) / p) ** (p - 1)

    def V(pts):
        G = hs.horizontal_normal(pts)
        W = np.linalg.norm(G, axis=1)
        dist = hs.distance(pts)
        return (beta * W ** (p - 2) / dist ** (p - 1))[:, None] * G

    def div(pts):
        W = np.linalg.norm(hs.horizontal_normal(pts), axis=1)
        return -beta * (p - 1) * W ** p / hs.distance(pts) ** p

    return VectorFieldSpec(V, div, Domain("half-space", halfspace=hs), f"halfspace-p{p:g}")


def verify_halfspace_hardy(hs: HalfSpaceSpec, p: float, f: ScalarField,
                           spec: QuadratureSpec) -> VerificationReport:
    """``((p-1)/p)^p int W^p |f|^p / dist^p <= int |grad_H f|^p``.

    The direct weight and the field functional are integrated as separate
    terms; ``extras['field_lhs']`` holds the field route, which should equal
    ``constant * lhs``.
    """
    if hs.n != spec.n:
        raise ParameterError("half-space and quadrature disagree on n")
    const = ((p - 1) / p) ** p
    domain = Domain("half-space", halfspace=hs)
    direct = WeightTerm(lambda pts: halfspace_angle_function(hs, pts) ** p / hs.distance(pts) ** p,
                        p, domain)
    fld = FieldTerm(halfspace_field(hs, p), p, "functional")
    grad = Term((Factor("grad", p),))
    tv = integrate_terms(f, [direct, fld, grad], spec)
    rep = _report(f"halfspace-p{p:g}", f.label, tv[direct], tv.error(direct), tv[grad],
                  tv.error(grad), const, tv.converged)
    rep.extras.update(field_lhs=tv[fld], field_lhs_err=tv.error(fld))
    return rep


# ---------------------------------------------------------------------------
# punctured ball
# ---------------------------------------------------------------------------

def ball_field(R: float, p: float, n: int = 1) -> VectorFieldSpec:
    """``V = alpha |grad_H d|^(p-2) grad_H d / (R-d)^(p-1)``, ``alpha = ((p-1)/p)^(p-1)``.

    ``div V = alpha [(Q-1)(R-d)/d + (p-1)] |z|^p / (d^p (R-d)^p)``.
    """
    Q = 2 * n + 2
    alpha = ((p - 1) / p) ** (p - 1)

    def V(pts):
        d, G = horizontal_gauge_gradient(pts)
        psi = np.linalg.norm(G, axis=1)
        return (alpha * psi ** (p - 2) / (R - d) ** (p - 1))[:, None] * G

    def div(pts):
        pts = np.asarray(pts, dtype=float)
        d, G = horizontal_gauge_gradient(pts)
        psi = np.linalg.norm(G, axis=1)
        gap = R - d
        return alpha * ((Q - 1) * gap / d + (p - 1)) * psi ** p / gap ** p

    return VectorFieldSpec(V, div, Domain("punctured-ball", radius=R), f"ball-R{R:g}-p{p:g}")


def ball_divergence_lower_bound(R: float, p: float, pts) -> np.ndarray:
    """``alpha (p-1) |z|^p / (d^p (R-d)^p)``, the bound kept after dropping the ``(Q-1)`` term."""
    alpha = ((p - 1) / p) ** (p - 1)
    d, G = horizontal_gauge_gradient(np.atleast_2d(pts))
    return alpha * (p - 1) * np.linalg.norm(G, axis=1) ** p / (R - d) ** p


def verify_ball_hardy(R: float, p: float, f: ScalarField, spec: QuadratureSpec) -> VerificationReport:
    """``((p-1)/p)^p int (|z|/d)^p |f|^p / (R-d)^p <= int |grad_H f|^p`` on ``B_R minus 0``."""
    const = ((p - 1) / p) ** p
    domain = Domain("punctured-ball", radius=R)

    def weight(pts):
        d, G = horizontal_gauge_gradient(pts)
        return np.linalg.norm(G, axis=1) ** p / (R - d) ** p

    direct = WeightTerm(weight, p, domain)
    fld = FieldTerm(ball_field(R, p, spec.n), p, "functional")
    grad = Term((Factor("grad", p),))
    tv = integrate_terms(f, [direct, fld, grad], spec)
    rep = _report(f"ball-R{R:g}-p{p:g}", f.label, tv[direct], tv.error(direct), tv[grad],
                  tv.error(grad), const, tv.converged)
    rep.extras.update(field_lhs=tv[fld], field_lhs_err=tv.error(fld))
    return rep


# ---------------------------------------------------------------------------
# logarithmic inequality at p = Q
# ---------------------------------------------------------------------------

def log_field(R: float, p: float, n: int = 1) -> VectorFieldSpec:
    """``V = gamma^(p-1) |grad_H d|^(p-2) grad_H d / (d ln(R/d))^(p-1)``, ``gamma = (p-1)/p``.

    ``div V = gamma^(p-1) |grad_H d|^p [(Q-p) ln(R/d) + (p-1)] / (d ln(R/d))^p``.
    """
    Q = 2 * n + 2
    gamma = (p - 1) / p

    def V(pts):
        d, G = horizontal_gauge_gradient(pts)
        psi = np.linalg.norm(G, axis=1)
        return (gamma ** (p - 1) * psi ** (p - 2) / (d * np.log(R / d)) ** (p - 1))[:, None] * G

    def div(pts):
        d, G = horizontal_gauge_gradient(np.asarray(pts, dtype=float))
        psi = np.linalg.norm(G, axis=1)
        L = np.log(R / d)
        return gamma ** (p - 1) * psi ** p * ((Q - p) * L + (p - 1)) / (d * L) ** p

    return VectorFieldSpec(V, div, Domain("punctured-ball", radius=R), f"log-R{R:g}-p{p:g}")


def verify_log_hardy(R: float, f: ScalarField, spec: QuadratureSpec, p: float | None = None) -> VerificationReport:
    """``((p-1)/p)^p int (|z|/d)^p |f|^p / (d ln(R/d))^p <= int |grad_H f|^p`` with ``p = Q``."""
    Q = spec.Q
    p = float(Q) if p is None else float(p)
    if p != Q:
        raise ParameterError(f"the logarithmic inequality needs p = Q = {Q}")
    const = ((p - 1) / p) ** p
    domain = Domain("punctured-ball", radius=R)

    def weight(pts):
        d, G = horizontal_gauge_gradient(pts)
        return np.linalg.norm(G, axis=1) ** p / (d * np.log(R / d)) ** p

    direct = WeightTerm(weight, p, domain)
    fld = FieldTerm(log_field(R, p, spec.n), p, "functional")
    grad = Term((Factor("grad", p),))
    tv = integrate_terms(f, [direct, fld, grad], spec)
    rep = _report(f"log-R{R:g}", f.label, tv[direct], tv.error(direct), tv[grad],
                  tv.error(grad), const, tv.converged)
    rep.extras.update(field_lhs=tv[fld], field_lhs_err=tv.error(fld))
    return rep


def field_registry(n: int = 1, p: float = 2.0) -> dict:
    """Shipped fields by label, at their default parameters."""
    Q = 2 * n + 2
    nu = np.zeros(2 * n + 1)
    nu[0] = 1.0
    return {
        "radial": example1_field(example1_alpha_star(p, Q), p, n),
        "halfspace": halfspace_field(HalfSpaceSpec(tuple(nu), 0.0), p),
        "ball": ball_field(3.0, p, n),
        "log": log_field(4.0, float(Q), n),
    }
