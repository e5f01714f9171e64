"""Integration over truncated gauge annuli ``{epsilon <= d <= R_outer}``.

The deterministic methods work in gauge-polar coordinates

    z = r cos(phi)^{1/2} omega,   t = r^2 sin(phi),   d(z, t) = r,

with ``omega`` on the unit sphere of R^{2n}.  Lebesgue measure becomes
``|S| r^{Q-1} cos(phi)^{n-1} dr dphi dsigma(omega)``, so the annulus is a
rectangle and no cell ever straddles its boundary.  Two further
substitutions keep the integrand smooth: ``u = ln r`` and
``phi = (pi/2) sin(pi s/2)`` (the latter removes the square-root behaviour
of ``cos(phi)^{1/2}`` at the poles ``z = 0``).

The Monte-Carlo oracle samples uniformly in coordinate space and shares
nothing with the polar map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gamma, pi, sqrt
from typing import Callable, Optional

import numpy as np

from .errors import IntegrandError, ParameterError
from .group import compose, gauge

__all__ = [
    "QuadratureSpec",
    "IntegralResult",
    "integrate",
    "integrate_box",
    "integrate_weighted",
    "monte_carlo_integrate",
    "radial_integrate",
    "sphere_area",
    "angular_factor",
    "polar_to_point",
    "genz_malik_rule",
]

METHODS = ("adaptive-subdivision", "tensor-gauss", "monte-carlo")
_TINY = 1e-300


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration domain and accuracy settings.

    ``box_half_width`` defaults to ``max(R_outer, R_outer**2)``, the smallest
    coordinate box guaranteed to hold the gauge ball.  ``abs_tol`` is an
    optional absolute floor for integrals that are exactly or nearly zero.
    """

    n: int = 1
    epsilon: float = 0.05
    R_outer: float = 4.0
    box_half_width: Optional[float] = None
    target_rel_tol: float = 1e-6
    max_subdivisions: int = 200_000
    method: str = "adaptive-subdivision"
    seed: int = 0
    mc_samples: int = 1_000_000
    abs_tol: float = 0.0
    initial_grid: tuple = field(default=(8, 4, 4))

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n!r}")
        if not 0 < self.epsilon < self.R_outer:
            raise ParameterError("need 0 < epsilon < R_outer")
        reach = max(self.R_outer, self.R_outer ** 2)
        if self.box_half_width is None:
            object.__setattr__(self, "box_half_width", float(reach))
        elif self.box_half_width < reach:
            raise ParameterError(
                f"box half-width {self.box_half_width} cannot hold the gauge ball (needs {reach})")
        if not self.target_rel_tol > 0:
            raise ParameterError("target_rel_tol must be positive")
        if self.abs_tol < 0:
            raise ParameterError("abs_tol must be nonnegative")
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.max_subdivisions < 1 or self.mc_samples < 2:
            raise ParameterError("budgets must be positive")

    @property
    def Q(self) -> int:
        return 2 * self.n + 2

    def replace(self, **changes) -> "QuadratureSpec":
        from dataclasses import replace

        if "R_outer" in changes and "box_half_width" not in changes:
            changes["box_half_width"] = None
        return replace(self, **changes)


@dataclass(frozen=True)
class IntegralResult:
    """Value, error estimate and bookkeeping of one integral (or a vector of them)."""

    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool


# ---------------------------------------------------------------------------
# gauge-polar coordinates
# ---------------------------------------------------------------------------

def sphere_area(m: int) -> float:
    """Area of the unit sphere in R^m."""
    return 2.0 * pi ** (m / 2) / gamma(m / 2)


def angular_factor(n: int, zpow: float) -> float:
    """``int (|z|/d)^zpow`` over the unit gauge sphere against the polar density.

    Equals ``|S^{2n-1}| int cos(phi)^{n-1+zpow/2} dphi`` over ``(-pi/2, pi/2)``.
    """
    m = n - 1 + zpow / 2.0
    return sphere_area(2 * n) * sqrt(pi) * gamma((m + 1) / 2) / gamma(m / 2 + 1)


def _sphere_point(angles, m):
    """Hyperspherical angles -> points on S^{m-1} and the area density."""
    N = angles.shape[0]
    omega = np.empty((N, m))
    jac = np.ones(N)
    sin_prod = np.ones(N)
    for k in range(m - 1):
        a = angles[:, k]
        omega[:, k] = sin_prod * np.cos(a)
        jac *= np.sin(a) ** (m - 2 - k) if k < m - 2 else 1.0
        sin_prod = sin_prod * np.sin(a)
    omega[:, m - 1] = sin_prod
    return omega, jac


def _polar_box(n, spec, radii=None):
    r_lo, r_hi = (spec.epsilon, spec.R_outer) if radii is None else radii
    lo = [np.log(r_lo), -1.0] + [0.0] * (2 * n - 2) + [0.0]
    hi = [np.log(r_hi), 1.0] + [pi] * (2 * n - 2) + [2.0 * pi]
    return np.array(lo), np.array(hi)


def polar_to_point(v, n: int):
    """Map ``(u, s, angles)`` to ``(xi, jacobian)``; ``u = ln d``."""
    v = np.atleast_2d(v)
    r = np.exp(v[:, 0])
    phi = 0.5 * pi * np.sin(0.5 * pi * v[:, 1])
    dphi = 0.25 * pi * pi * np.cos(0.5 * pi * v[:, 1])
    cphi = np.cos(phi)
    omega, sjac = _sphere_point(v[:, 2:], 2 * n)
    rho = r * np.sqrt(cphi)
    xi = np.empty((v.shape[0], 2 * n + 1))
    xi[:, :-1] = rho[:, None] * omega
    xi[:, -1] = r * r * np.sin(phi)
    jac = r ** (2 * n + 2) * cphi ** (n - 1) * dphi * sjac
    return xi, jac


# ---------------------------------------------------------------------------
# Genz-Malik embedded rule
# ---------------------------------------------------------------------------

def genz_malik_rule(dim: int):
    """Nodes on [-1, 1]^dim with degree-7 and degree-5 weights (summing to 1).

    Returns ``(nodes, w7, w5, index)`` where ``index`` locates the center and
    the axial ``lambda_2`` / ``lambda_3`` nodes used by the split heuristic.
    """
    if dim < 2:
        raise ParameterError("the embedded rule needs dim >= 2")
    l2, l3, l4, l5 = sqrt(9 / 70), sqrt(9 / 10), sqrt(9 / 10), sqrt(9 / 19)
    d = dim
    nodes, w7, w5 = [np.zeros(d)], [(12824 - 9120 * d + 400 * d * d) / 19683], \
        [(729 - 950 * d + 50 * d * d) / 729]
    ax2, ax3 = [], []
    for lam, a7, a5, store in ((l2, 980 / 6561, 245 / 486, ax2),
                               (l3, (1820 - 400 * d) / 19683, (265 - 100 * d) / 1458, ax3)):
        for i in range(d):
            for sgn in (1.0, -1.0):
                e = np.zeros(d)
                e[i] = sgn * lam
                store.append(len(nodes))
                nodes.append(e)
                w7.append(a7)
                w5.append(a5)
    for i in range(d):
        for j in range(i + 1, d):
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    e = np.zeros(d)
                    e[i], e[j] = si * l4, sj * l4
                    nodes.append(e)
                    w7.append(200 / 19683)
                    w5.append(25 / 729)
    for k in range(2 ** d):
        signs = np.array([1.0 if (k >> i) & 1 == 0 else -1.0 for i in range(d)])
        nodes.append(signs * l5)
        w7.append(6859 / 19683 / 2 ** d)
        w5.append(0.0)
    index = {"center": 0, "lambda2": np.array(ax2).reshape(d, 2),
             "lambda3": np.array(ax3).reshape(d, 2)}
    return np.array(nodes), np.array(w7), np.array(w5), index


class _Evaluator:
    """Applies the change of variables, checks finiteness and counts calls."""

    def __init__(self, g, n, polar=True, centre=None):
        self.g, self.n, self.polar, self.count = g, n, polar, 0
        self.centre = None if centre is None else np.asarray(centre, dtype=float)

    def __call__(self, v):
        if self.polar:
            xi, jac = polar_to_point(v, self.n)
            if self.centre is not None:
                # left translation preserves Lebesgue measure
                xi = compose(np.broadcast_to(self.centre, xi.shape), xi)
        else:
            xi, jac = v, np.ones(v.shape[0])
        val = np.asarray(self.g(xi), dtype=float)
        self.count += v.shape[0]
        bad = ~np.isfinite(val)
        if np.any(bad):
            row = np.nonzero(bad.reshape(val.shape[0], -1).any(axis=1))[0][0]
            raise IntegrandError(f"non-finite integrand at {xi[row].tolist()}", point=xi[row])
        if val.ndim == 1:
            val = val[:, None]
        return val * jac[:, None]


def _apply_rule(ev, rule, centers, halfw):
    nodes, w7, w5, index = rule
    M, D = centers.shape
    pts = (centers[:, None, :] + halfw[:, None, :] * nodes[None]).reshape(-1, D)
    vals = ev(pts).reshape(M, nodes.shape[0], -1)
    vol = np.prod(2.0 * halfw, axis=1)[:, None]
    i7 = vol * np.einsum("p,mpk->mk", w7, vals)
    i5 = vol * np.einsum("p,mpk->mk", w5, vals)
    # fourth-difference split heuristic
    c = vals[:, index["center"], :]
    a2 = vals[:, index["lambda2"], :].sum(axis=2)
    a3 = vals[:, index["lambda3"], :].sum(axis=2)
    ratio = (9 / 70) / (9 / 10)
    fourth = np.abs(a2 - 2 * c[:, None, :] - ratio * (a3 - 2 * c[:, None, :])).sum(axis=2)
    axis = np.argmax(fourth * halfw, axis=1)
    return i7, np.abs(i7 - i5), axis


def _adaptive(ev, lo, hi, spec, grid):
    rule = genz_malik_rule(lo.size)
    D = lo.size
    counts = list(grid) + [1] * (D - len(grid))
    counts = [max(1, int(c)) for c in counts[:D]]
    axes = [np.linspace(lo[k], hi[k], counts[k] + 1) for k in range(D)]
    mesh = np.meshgrid(*[0.5 * (a[1:] + a[:-1]) for a in axes], indexing="ij")
    centers = np.stack([m.ravel() for m in mesh], axis=1)
    halfw = np.tile([(hi[k] - lo[k]) / (2 * counts[k]) for k in range(D)], (centers.shape[0], 1))
    vals, errs, split_axis = _apply_rule(ev, rule, centers, halfw)
    ids = np.arange(centers.shape[0])
    next_id = centers.shape[0]
    splits = 0
    converged = False
    while True:
        total = vals.sum(axis=0)
        err = errs.sum(axis=0)
        thr = np.maximum(spec.target_rel_tol * np.abs(total), spec.abs_tol)
        if np.all(err <= np.maximum(thr, spec.target_rel_tol * _TINY)):
            converged = True
            break
        if splits >= spec.max_subdivisions:
            break
        score = np.max(errs / np.maximum(thr, _TINY)[None, :], axis=1)
        order = np.lexsort((ids, -score))
        cum = np.cumsum(score[order])
        take = int(np.searchsorted(cum, 0.5 * cum[-1]) + 1)
        take = min(take, 2048, spec.max_subdivisions - splits)
        chosen = order[:take]
        keep = np.ones(centers.shape[0], dtype=bool)
        keep[chosen] = False
        c_old, h_old, ax = centers[chosen], halfw[chosen].copy(), split_axis[chosen]
        rows = np.arange(take)
        h_old[rows, ax] *= 0.5
        c_lo, c_hi = c_old.copy(), c_old.copy()
        c_lo[rows, ax] -= h_old[rows, ax]
        c_hi[rows, ax] += h_old[rows, ax]
        new_c = np.concatenate([c_lo, c_hi])
        new_h = np.concatenate([h_old, h_old])
        nv, ne, na = _apply_rule(ev, rule, new_c, new_h)
        centers = np.concatenate([centers[keep], new_c])
        halfw = np.concatenate([halfw[keep], new_h])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
        split_axis = np.concatenate([split_axis[keep], na])
        ids = np.concatenate([ids[keep], next_id + np.arange(2 * take)])
        next_id += 2 * take
        splits += take
    # accumulate in creation order so the sum does not depend on the refinement path's layout
    order = np.argsort(ids, kind="stable")
    return vals[order].sum(axis=0), errs[order].sum(axis=0), converged


def _gauss_tensor(ev, lo, hi, cells, order):
    D = lo.size
    x, w = np.polynomial.legendre.leggauss(order)
    edges = [np.linspace(lo[k], hi[k], cells + 1) for k in range(D)]
    pts_1d, wts_1d = [], []
    for k in range(D):
        a, b = edges[k][:-1], edges[k][1:]
        half = 0.5 * (b - a)
        pts_1d.append((0.5 * (a + b))[:, None] + half[:, None] * x[None, :])
        wts_1d.append(half[:, None] * w[None, :])
    P = [p.ravel() for p in pts_1d]
    W = [q.ravel() for q in wts_1d]
    # evaluate slab by slab along the first axis to bound memory
    total = 0.0
    rest = np.meshgrid(*P[1:], indexing="ij")
    rest = np.stack([m.ravel() for m in rest], axis=1)
    rest_w = np.ones(rest.shape[0])
    for k, Wk in enumerate(np.meshgrid(*W[1:], indexing="ij")):
        rest_w = rest_w * Wk.ravel()
    for u, wu in zip(P[0], W[0]):
        pts = np.concatenate([np.full((rest.shape[0], 1), u), rest], axis=1)
        total = total + wu * np.einsum("n,nk->k", rest_w, ev(pts))
    return total


def _tensor(ev, lo, hi, spec):
    cells = 2
    while True:
        hi_val = _gauss_tensor(ev, lo, hi, cells, 8)
        lo_val = _gauss_tensor(ev, lo, hi, cells, 6)
        err = np.abs(hi_val - lo_val)
        thr = np.maximum(spec.target_rel_tol * np.abs(hi_val), spec.abs_tol)
        if np.all(err <= np.maximum(thr, spec.target_rel_tol * _TINY)):
            return hi_val, err, True
        if cells ** lo.size * 2 ** lo.size > spec.max_subdivisions:
            return hi_val, err, False
        cells *= 2


def _finish(val, err, count, converged):
    if val.shape == (1,):
        return IntegralResult(float(val[0]), float(err[0]), int(count), bool(converged))
    return IntegralResult(np.asarray(val), np.asarray(err), int(count), bool(converged))


def integrate(g: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec,
              centre=None, radii=None) -> IntegralResult:
    """Integrate ``g`` over ``{epsilon <= d <= R_outer}`` in H^n.

    ``g`` maps ``(N, 2n+1)`` points to ``(N,)`` or, for several integrands
    sharing evaluations, ``(N, K)``; a vector result then carries arrays in
    ``value`` and ``abs_error_estimate`` and converges only when every
    component does.

    With ``centre`` and ``radii = (r_lo, r_hi)`` the region is instead the
    left-translated annulus ``{r_lo <= d(centre^-1 xi) <= r_hi}``.  This is
    how localized integrands are handled: the caller guarantees that ``g``
    vanishes outside that region and that it lies inside the annulus.
    """
    if spec.method == "monte-carlo":
        return monte_carlo_integrate(g, spec)
    if centre is not None and radii is None:
        raise ParameterError("a centre needs radii")
    ev = _Evaluator(g, spec.n, centre=centre)
    lo, hi = _polar_box(spec.n, spec, radii)
    if spec.method == "tensor-gauss":
        val, err, ok = _tensor(ev, lo, hi, spec)
    else:
        val, err, ok = _adaptive(ev, lo, hi, spec, spec.initial_grid)
    return _finish(val, err, ev.count, ok)


def integrate_box(g, lower, upper, spec: QuadratureSpec) -> IntegralResult:
    """Integrate ``g`` over a coordinate box with the same embedded rule (no polar map)."""
    lo, hi = np.asarray(lower, dtype=float), np.asarray(upper, dtype=float)
    if lo.shape != hi.shape or np.any(hi <= lo):
        raise ParameterError("box bounds must satisfy lower < upper componentwise")
    ev = _Evaluator(g, spec.n, polar=False)
    val, err, ok = _adaptive(ev, lo, hi, spec, (1,) * lo.size)
    return _finish(val, err, ev.count, ok)


def integrate_weighted(f, weight, power: float, spec: QuadratureSpec) -> IntegralResult:
    """``int |z|^zpow d^{-dpow} |f|^power`` over the annulus; ``weight = (zpow, dpow)``."""
    zpow, dpow = weight
    if zpow < 0:
        raise ParameterError("negative powers of |z| are not supported")

    def g(xi):
        z = np.sqrt(np.sum(xi[:, :-1] ** 2, axis=1))
        return z ** zpow * gauge(xi) ** (-dpow) * np.abs(f.eval(xi)) ** power

    return integrate(g, spec)


def monte_carlo_integrate(g, spec: QuadratureSpec) -> IntegralResult:
    """Plain Monte Carlo in a coordinate box, rejecting points outside the annulus.

    The box is the tight one ``|z_k| <= min(L, R)``, ``|t| <= min(L, R^2)``
    (it still contains the gauge ball).  The error estimate is one sample
    standard error; ``converged`` is always true.
    """
    n = spec.n
    L = spec.box_half_width
    zw, tw = min(L, spec.R_outer), min(L, spec.R_outer ** 2)
    half = np.array([zw] * (2 * n) + [tw])
    volume = float(np.prod(2.0 * half))
    rng = np.random.default_rng(spec.seed)
    chunk = 100_000
    remaining = spec.mc_samples
    s1 = s2 = None
    while remaining > 0:
        m = min(chunk, remaining)
        xi = (rng.random((m, 2 * n + 1)) * 2.0 - 1.0) * half
        d = gauge(xi)
        inside = (d >= spec.epsilon) & (d <= spec.R_outer)
        val = np.zeros((m, 1)) if s1 is None else np.zeros((m, s1.size))
        if np.any(inside):
            raw = np.asarray(g(xi[inside]), dtype=float)
            if raw.ndim == 1:
                raw = raw[:, None]
            if not np.all(np.isfinite(raw)):
                row = np.nonzero(~np.isfinite(raw).all(axis=1))[0][0]
                bad = xi[inside][row]
                raise IntegrandError(f"non-finite integrand at {bad.tolist()}", point=bad)
            if val.shape[1] != raw.shape[1]:
                val = np.zeros((m, raw.shape[1]))
            val[inside] = raw
        s1 = val.sum(axis=0) if s1 is None else s1 + val.sum(axis=0)
        s2 = (val * val).sum(axis=0) if s2 is None else s2 + (val * val).sum(axis=0)
        remaining -= m
    N = spec.mc_samples
    mean = s1 / N
    var = np.maximum(s2 / N - mean * mean, 0.0) * N / (N - 1)
    return _finish(volume * mean, volume * np.sqrt(var / N), N, True)


def radial_integrate(h: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec,
                     zpow: float = 0.0, breakpoints=()) -> IntegralResult:
    """``int (|z|/d)^zpow h(d)`` over the annulus for a gauge-radial ``h``.

    Reduces to ``angular_factor(n, zpow) * int h(r) r^{Q-1} dr`` and uses
    adaptive Gauss-Kronrod in ``ln r``.
    """
    from scipy.integrate import quad

    Q = spec.Q
    a, b = np.log(spec.epsilon), np.log(spec.R_outer)
    pts = sorted(np.log(x) for x in breakpoints if spec.epsilon < x < spec.R_outer)

    def integrand(u):
        r = np.exp(u)
        return float(h(np.array([r]))[0]) * r ** Q

    val, err = quad(integrand, a, b, points=pts or None, epsabs=0.0,
                    epsrel=spec.target_rel_tol * 1e-2, limit=500)
    fac = angular_factor(spec.n, zpow)
    conv = err <= spec.target_rel_tol * max(abs(val), _TINY)
    return IntegralResult(fac * val, fac * err, 0, bool(conv))
