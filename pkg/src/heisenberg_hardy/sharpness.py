"""Sharp-constant estimation by Rayleigh-ratio minimisation.

For gauge-radial ``f = phi(d)`` every integrand of the catalog is
``(|z|/d)^e h(d)``, so each integral factors into a gauge-sphere constant
times a one-dimensional integral in ``u = ln r``.  The truncated extremal
profiles make these 1-D integrands nearly flat in ``u``, and composite
Gauss-Legendre panels integrate them to near machine precision.  The 3-D
cubature route is kept as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import GaugeRadialProfile, ScalarField
from .errors import CaseError, DegenerateFamilyError, ParameterError
from .fields import radial_field, smoothstep
from .functionals import Term, integrate_terms
from .inequalities import InequalityCase
from .optimize import OptimizationResult, simplex_minimize
from .quadrature import QuadratureSpec, angular_factor

__all__ = [
    "ExtremalFamily",
    "SharpnessResult",
    "extremal_profile",
    "family_for_case",
    "radial_term_integral",
    "rayleigh_ratio",
    "sharpness_ratio",
    "sharpness_schedule",
    "DEFAULT_SCHEDULE",
    "SHARP_KINDS",
]

# log-widths ln(R/eps) of the truncation-relaxation schedule
DEFAULT_SCHEDULE = (20.0, 40.0, 80.0)
SHARP_KINDS = ("hardy-interp", "hardy", "hardy-p2", "uncertainty-variant")
_PANEL = 0.5
_ORDER = 24
_MIN_RAMP = 0.05


def _extremal_parts(r, beta, C, shift=0.0):
    """``g, g', g''`` with ``g = exp(-(C/beta) r^beta - shift)`` (or ``r^-C``)."""
    with np.errstate(over="ignore", invalid="ignore"):
        if beta == 0:
            g = r ** (-C)
            return g, -C * g / r, C * (C + 1) * g / r ** 2
        g = np.exp(-(C / beta) * r ** beta - shift)
        g1 = -C * r ** (beta - 1) * g
        g2 = (-C * (beta - 1) * r ** (beta - 2) + C ** 2 * r ** (2 * beta - 2)) * g
        return g, g1, g2


@dataclass(frozen=True)
class ExtremalFamily:
    """Truncated extremals ``g(d) chi(d)`` with ``g`` from the Hölder equality case.

    ``g(r) = exp(-(C/beta) r^beta)`` for ``beta != 0`` and ``r^(-C)`` for
    ``beta = 0``, where ``beta = a - b/(p-1) + 1`` and ``C = |Q-(a+b+1)|/p``.
    The cutoff ``chi`` is a product of two C^4 ramps in ``ln r`` living in
    ``[epsilon (1+theta), R_outer (1-theta)]``; the ramp widths
    ``(kappa_in, kappa_out)`` are the free family parameters.  Profiles that
    would overflow on the support are rescaled to peak at 1, which leaves
    every Rayleigh ratio unchanged.
    """

    a: float
    b: float
    p: float
    n: int = 1
    epsilon: float = math.exp(-5.0)
    R_outer: float = math.exp(5.0)
    theta: float = 0.0

    def __post_init__(self):
        if not self.p > 1:
            raise ParameterError("need p > 1")
        if math.isclose(self.Q, self.a + self.b + 1):
            raise CaseError("Q = a + b + 1 has no extremal profile")
        if not 0 < self.epsilon:
            raise ParameterError("epsilon must be positive")
        if self.epsilon * (1 + self.theta) >= self.R_outer * (1 - self.theta):
            raise CaseError("truncation leaves an empty support")

    @classmethod
    def with_log_width(cls, a, b, p, n=1, width=DEFAULT_SCHEDULE[-1], theta=0.0):
        """Family on ``[e^(-width/2), e^(width/2)]``."""
        return cls(a, b, p, n, math.exp(-width / 2), math.exp(width / 2), theta)

    @property
    def Q(self) -> int:
        return 2 * self.n + 2

    @property
    def beta(self) -> float:
        return self.a - self.b / (self.p - 1) + 1

    @property
    def C(self) -> float:
        return abs(self.Q - (self.a + self.b + 1)) / self.p

    @property
    def log_bounds(self) -> tuple:
        return math.log(self.epsilon * (1 + self.theta)), math.log(self.R_outer * (1 - self.theta))

    @property
    def span(self) -> float:
        lo, hi = self.log_bounds
        return hi - lo

    def default_ramps(self) -> tuple:
        return (self.span / 6, self.span / 6)

    def breakpoints(self, ramps) -> list:
        lo, hi = self.log_bounds
        k_in, k_out = ramps
        return sorted({lo, lo + k_in, hi - k_out, hi})

    def parts(self, r, ramps):
        """``(phi, phi', phi'')`` at radii ``r``."""
        r = np.asarray(r, dtype=float)
        lo, hi = self.log_bounds
        k_in, k_out = ramps
        u = np.log(r)
        s1 = (u - lo) / k_in
        s2 = (hi - u) / k_out
        A, A1s, A2s = smoothstep(s1)
        B, B1s, B2s = smoothstep(s2)
        A1 = A1s / (k_in * r)
        A2 = A2s / (k_in ** 2 * r ** 2) - A1s / (k_in * r ** 2)
        B1 = -B1s / (k_out * r)
        B2 = B2s / (k_out ** 2 * r ** 2) + B1s / (k_out * r ** 2)
        chi, chi1, chi2 = A * B, A1 * B + A * B1, A2 * B + 2 * A1 * B1 + A * B2
        g, g1, g2 = _extremal_parts(r, self.beta, self.C, self._log_scale())
        inside = (u > lo) & (u < hi)
        with np.errstate(invalid="ignore"):
            phi = np.where(inside, g * chi, 0.0)
            dphi = np.where(inside, g1 * chi + g * chi1, 0.0)
            d2phi = np.where(inside, g2 * chi + 2 * g1 * chi1 + g * chi2, 0.0)
        return phi, dphi, d2phi

    def _log_scale(self) -> float:
        # ratios are scale invariant; capping the peak at 1 avoids overflow
        if self.beta == 0:
            return 0.0
        ends = np.exp(np.array(self.log_bounds)) ** self.beta
        return max(0.0, float(np.max(-(self.C / self.beta) * ends)))

    def profile(self, ramps=None, label: str = "") -> GaugeRadialProfile:
        ramps = self.default_ramps() if ramps is None else tuple(ramps)
        self._check_ramps(ramps)
        return GaugeRadialProfile(lambda r: self.parts(r, ramps)[0],
                                  lambda r: self.parts(r, ramps)[1],
                                  lambda r: self.parts(r, ramps)[2],
                                  label or f"extremal-a{self.a:g}-b{self.b:g}-p{self.p:g}")

    def field(self, ramps=None, label: str = "") -> ScalarField:
        prof = self.profile(ramps, label)
        return radial_field(prof, label=prof.label,
                            support=(None, self.epsilon * (1 + self.theta),
                                     self.R_outer * (1 - self.theta)))

    def _check_ramps(self, ramps):
        k_in, k_out = ramps
        if k_in <= 0 or k_out <= 0 or k_in + k_out > self.span:
            raise ParameterError(f"ramp widths {ramps} do not fit a log-span of {self.span:g}")


def extremal_profile(a: float, b: float, p: float, Q: int, theta: float = 0.0,
                     epsilon: float = math.exp(-5.0), R_outer: float = math.exp(5.0),
                     ramps=None) -> GaugeRadialProfile:
    """Truncated extremal profile for the weighted Hardy interpolation."""
    if (Q - 2) % 2:
        raise ParameterError("Q must equal 2n + 2")
    fam = ExtremalFamily(a, b, p, (Q - 2) // 2, epsilon, R_outer, theta)
    return fam.profile(ramps)


def family_for_case(case: InequalityCase, width: float = DEFAULT_SCHEDULE[-1],
                    theta: float = 0.0) -> ExtremalFamily:
    return ExtremalFamily.with_log_width(case.a, case.b, case.p, case.n, width, theta)


# ---------------------------------------------------------------------------
# one-dimensional reduction
# ---------------------------------------------------------------------------

def _factor_radial(name, power, p, phi, dphi, d2phi, r, Q):
    """Return (power of |z|/d, radial values) for one factor."""
    if name == "f":
        return 0.0, np.abs(phi) ** power
    if name == "grad":
        return power, np.abs(dphi) ** power
    lap = d2phi + (Q - 1) * dphi / r
    if name == "lap":
        return 2.0 * power, np.abs(lap) ** power
    if name == "f_graddot":
        return 2.0, phi * dphi
    if name == "lap_graddot":
        return 4.0, lap * dphi
    with np.errstate(divide="ignore", invalid="ignore"):
        plap = np.where(dphi == 0, 0.0,
                        np.abs(dphi) ** (p - 2) * ((p - 1) * d2phi + (Q - 1) * dphi / r))
    if name == "plap":
        return p * power, np.abs(plap) ** power
    return p + 2.0, plap * dphi


def _gl_nodes(breaks, order):
    x, w = np.polynomial.legendre.leggauss(order)
    us, ws = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        m = max(1, int(math.ceil((hi - lo) / _PANEL)))
        edges = np.linspace(lo, hi, m + 1)
        for e0, e1 in zip(edges[:-1], edges[1:]):
            us.append(0.5 * (e1 - e0) * x + 0.5 * (e1 + e0))
            ws.append(0.5 * (e1 - e0) * w)
    return np.concatenate(us), np.concatenate(ws)


def radial_term_integral(term: Term, family: ExtremalFamily, ramps, order: int = _ORDER):
    """Integral of ``term`` for the family member with the given ramps.

    Returns ``(value, error)`` with the error taken from a lower-order rule.
    """
    Q = family.Q
    breaks = family.breakpoints(ramps)
    vals = []
    for k in (order, order // 2):
        u, w = _gl_nodes(breaks, k)
        r = np.exp(u)
        phi, dphi, d2phi = family.parts(r, ramps)
        zexp = term.zpow
        h = r ** (term.zpow - term.dpow)
        for fac in term.factors:
            e, vals_r = _factor_radial(fac.name, fac.power, fac.p, phi, dphi, d2phi, r, Q)
            zexp += e
            h = h * vals_r
        vals.append(angular_factor(family.n, zexp) * float(np.sum(w * h * r ** Q)))
    return vals[0], abs(vals[0] - vals[1])


def _combine(case: InequalityCase, lhs, r1, r2):
    if lhs <= 0 or not np.isfinite(lhs):
        return math.nan
    if case.form in ("single", "squared"):
        return r1 / lhs
    if case.form == "sum":
        return (r1 + r2) / (case.rhs_divisor * lhs)
    return r1 ** (1 / case.p) * r2 ** (1 / case.q) / lhs


def rayleigh_ratio(case: InequalityCase, family: ExtremalFamily, ramps=None,
                   route: str = "radial", spec: QuadratureSpec | None = None) -> float:
    """``rhs / lhs`` of ``case`` for one family member.

    ``route='radial'`` uses the 1-D reduction; ``route='cubature'`` integrates
    the 3-D field with :func:`integrate_terms` over ``spec``.
    """
    ramps = family.default_ramps() if ramps is None else tuple(ramps)
    family._check_ramps(ramps)
    terms = [case.lhs_term, case.r1_term] + ([case.r2_term] if case.r2_term is not None else [])
    if route == "radial":
        vals = [radial_term_integral(t, family, ramps)[0] for t in terms]
    elif route == "cubature":
        if spec is None:
            spec = QuadratureSpec(n=family.n, epsilon=family.epsilon, R_outer=family.R_outer)
        tv = integrate_terms(family.field(ramps), terms, spec)
        vals = [tv[t] for t in terms]
    else:
        raise ParameterError("route must be 'radial' or 'cubature'")
    r2 = vals[2] if len(vals) > 2 else 0.0
    return _combine(case, vals[0], vals[1], r2)


@dataclass
class SharpnessResult(OptimizationResult):
    """Family-minimised ratio of one case together with its reference constant."""

    case_id: str = ""
    constant: float = math.nan
    log_width: float = math.nan
    flag: str = ""
    bound_respected: bool = True

    @property
    def excess(self) -> float:
        """Relative gap ``ratio / constant - 1``."""
        return self.fun / self.constant - 1.0


def sharpness_ratio(case: InequalityCase, family: ExtremalFamily | None = None,
                    spec: QuadratureSpec | None = None, *, route: str = "radial",
                    x0=None, xatol: float = 1e-4, fatol: float = 1e-12,
                    maxiter: int = 400, tolerance: float = 1e-6) -> SharpnessResult:
    """Minimise ``rhs/lhs`` over the ramp widths of ``family``.

    For kinds whose constant is known to be sharp the result records whether
    the minimum respects ``ratio >= constant - tolerance``; Rellich kinds are
    flagged "optimality unknown" and the minimum is only an upper bound for
    the best constant.
    """
    family = family or family_for_case(case)
    if case.n != family.n:
        raise ParameterError("case and family disagree on n")
    span = family.span
    x0 = family.default_ramps() if x0 is None else tuple(x0)

    def objective(x):
        k_in, k_out = float(x[0]), float(x[1])
        if k_in < _MIN_RAMP or k_out < _MIN_RAMP or k_in + k_out > span:
            return 1e30
        val = rayleigh_ratio(case, family, (k_in, k_out), route, spec)
        return val if np.isfinite(val) else 1e30

    first = objective(np.asarray(x0))
    if first >= 1e30:
        lhs = radial_term_integral(case.lhs_term, family, x0)[0]
        if lhs == 0:
            raise DegenerateFamilyError(f"lhs vanishes on the family for case {case.id}")
    opt = simplex_minimize(objective, x0, xatol=xatol, fatol=fatol, maxiter=maxiter,
                           initial_step=0.25 * min(x0))
    if opt.fun >= 1e30:
        raise DegenerateFamilyError(f"lhs vanishes on the family for case {case.id}")
    sharp = case.kind in SHARP_KINDS
    flag = "sharpness estimate" if sharp else "optimality unknown"
    respected = opt.fun >= case.constant * (1 - tolerance)
    return SharpnessResult(opt.x, opt.fun, opt.converged, opt.evaluations, opt.method,
                           opt.message, opt.history, case.id, case.constant,
                           family.span, flag, bool(respected))


def sharpness_schedule(case: InequalityCase, widths=DEFAULT_SCHEDULE, theta: float = 0.0,
                       **options) -> list:
    """Minimised ratios along a truncation-relaxation schedule of log-widths.

    Each step warm-starts from the previous optimum scaled to the new width.
    """
    out = []
    prev = None
    for width in widths:
        fam = family_for_case(case, width, theta)
        x0 = None
        if prev is not None:
            scale = fam.span / prev.log_width
            x0 = tuple(float(v) * scale for v in prev.x)
        res = sharpness_ratio(case, fam, x0=x0, **options)
        if prev is not None and res.fun > prev.fun:
            # retry from the unscaled ramps (same ramps, longer plateau)
            alt = sharpness_ratio(case, fam, x0=tuple(prev.x), **options)
            if alt.fun < res.fun:
                res = alt
        out.append(res)
        prev = res
    return out
