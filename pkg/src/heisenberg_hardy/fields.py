"""Constructors for scalar fields with analytic derivatives.

Every constructor returns a :class:`~heisenberg_hardy.calculus.ScalarField`
whose ``grad_coords`` and ``hess_coords`` are exact, so the horizontal
operators never fall back to finite differences on these fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import GaugeRadialProfile, ScalarField
from .errors import ParameterError
from .group import split

__all__ = [
    "smoothstep",
    "PlateauProfile",
    "gauge_derivatives",
    "gauge_field",
    "constant_field",
    "coordinate_field",
    "polynomial_z2_field",
    "radial_field",
    "affine_pullback",
    "left_translate",
    "product",
    "linear_multiplier",
    "power_profile",
]

# smallest gauge used when differentiating d; points closer to a centre are
# only reached where the profile is locally constant
_D_FLOOR = 1e-8


def smoothstep(s):
    """C^4 step ``S(s) = s^5 (126 - 420 s + 540 s^2 - 315 s^3 + 70 s^4)`` on [0, 1].

    Returns ``(S, S', S'')``, clamped to 0 below 0 and 1 above 1.
    """
    s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
    u = 1.0 - s
    val = s ** 5 * (126.0 - 420.0 * s + 540.0 * s ** 2 - 315.0 * s ** 3 + 70.0 * s ** 4)
    d1 = 630.0 * s ** 4 * u ** 4
    d2 = 2520.0 * s ** 3 * u ** 3 * (1.0 - 2.0 * s)
    return val, d1, d2


@dataclass(frozen=True)
class PlateauProfile:
    """Smooth bump of the gauge: 0 below ``r0``, rises to 1 on ``[r1, r2]``, 0 beyond ``r3``.

    Set ``r0 = r1 = None`` for a profile that equals 1 near 0 (a ball bump).
    A peak is obtained with ``r1 == r2``.
    """

    r0: float | None
    r1: float | None
    r2: float
    r3: float

    def __post_init__(self):
        lo_ok = (self.r0 is None and self.r1 is None) or (
            self.r0 is not None and self.r1 is not None and 0 <= self.r0 < self.r1)
        if not lo_ok or not (self.r1 or 0.0) <= self.r2 < self.r3:
            raise ParameterError(f"invalid plateau radii {self!r}")

    def parts(self, r):
        r = np.asarray(r, dtype=float)
        val, d1, d2 = np.ones_like(r), np.zeros_like(r), np.zeros_like(r)
        if self.r0 is not None:
            w = self.r1 - self.r0
            s, s1, s2 = smoothstep((r - self.r0) / w)
            val, d1, d2 = s, s1 / w, s2 / w ** 2
        w = self.r3 - self.r2
        e, e1, e2 = smoothstep((self.r3 - r) / w)
        e1, e2 = -e1 / w, e2 / w ** 2
        return val * e, d1 * e + val * e1, d2 * e + 2.0 * d1 * e1 + val * e2

    def as_profile(self, label="") -> GaugeRadialProfile:
        return GaugeRadialProfile(
            phi=lambda r: self.parts(r)[0],
            dphi=lambda r: self.parts(r)[1],
            d2phi=lambda r: self.parts(r)[2],
            label=label,
        )


def power_profile(k: float, label="") -> GaugeRadialProfile:
    """``phi(r) = r^k``."""
    return GaugeRadialProfile(
        phi=lambda r: np.asarray(r, dtype=float) ** k,
        dphi=lambda r: k * np.asarray(r, dtype=float) ** (k - 1),
        d2phi=lambda r: k * (k - 1) * np.asarray(r, dtype=float) ** (k - 2),
        label=label or f"r^{k}",
    )


def gauge_derivatives(pts, floor=_D_FLOOR):
    """Gauge and its coordinate gradient and Hessian at ``(N, 2n+1)`` points.

    With ``q = |z|^4 + t^2 = d^4``: ``grad d = grad q / (4 d^3)`` and
    ``hess d = hess q / (4 d^3) - 3 grad q grad q^T / (16 d^7)``.
    """
    pts = np.asarray(pts, dtype=float)
    x, y, t = split(pts)
    w = pts[:, :-1]
    z2 = np.sum(w * w, axis=1)
    d = np.maximum((z2 * z2 + t * t) ** 0.25, floor)
    m = pts.shape[1]
    gq = np.empty_like(pts)
    gq[:, :-1] = 4.0 * z2[:, None] * w
    gq[:, -1] = 2.0 * t
    hq = np.zeros((pts.shape[0], m, m))
    hq[:, :-1, :-1] = 8.0 * w[:, :, None] * w[:, None, :]
    idx = np.arange(m - 1)
    hq[:, idx, idx] += 4.0 * z2[:, None]
    hq[:, -1, -1] = 2.0
    d3 = d ** 3
    grad = gq / (4.0 * d3[:, None])
    hess = hq / (4.0 * d3[:, None, None]) - 3.0 * gq[:, :, None] * gq[:, None, :] / (
        16.0 * (d3 * d3 * d)[:, None, None])
    return d, grad, hess


def gauge_field() -> ScalarField:
    return ScalarField(
        eval=lambda p: gauge_derivatives(p, floor=0.0)[0],
        grad_coords=lambda p: gauge_derivatives(p)[1],
        hess_coords=lambda p: gauge_derivatives(p)[2],
        label="gauge",
    )


def constant_field(c: float = 1.0) -> ScalarField:
    return ScalarField(
        eval=lambda p: np.full(np.shape(p)[0], float(c)),
        grad_coords=lambda p: np.zeros(np.shape(p)),
        hess_coords=lambda p: np.zeros((np.shape(p)[0], np.shape(p)[1], np.shape(p)[1])),
        label=f"const({c})",
    )


def coordinate_field(index: int) -> ScalarField:
    """The coordinate function ``xi[index]`` (``-1`` for ``t``)."""

    def grad(p):
        g = np.zeros(np.shape(p))
        g[:, index] = 1.0
        return g

    return ScalarField(
        eval=lambda p: np.asarray(p, dtype=float)[:, index],
        grad_coords=grad,
        hess_coords=lambda p: np.zeros((np.shape(p)[0], np.shape(p)[1], np.shape(p)[1])),
        label=f"coord[{index}]",
    )


def polynomial_z2_field() -> ScalarField:
    """``|z|^2``."""

    def grad(p):
        p = np.asarray(p, dtype=float)
        g = 2.0 * p
        g[:, -1] = 0.0
        return g

    def hess(p):
        m = np.shape(p)[1]
        h = np.zeros((np.shape(p)[0], m, m))
        idx = np.arange(m - 1)
        h[:, idx, idx] = 2.0
        return h

    return ScalarField(
        eval=lambda p: np.sum(np.asarray(p, dtype=float)[:, :-1] ** 2, axis=1),
        grad_coords=grad,
        hess_coords=hess,
        label="|z|^2",
    )


def radial_field(profile: GaugeRadialProfile, label: str = "", support=None) -> ScalarField:
    """``phi(d(xi))`` with exact chain-rule derivatives."""

    def ev(p):
        d = gauge_derivatives(p, floor=0.0)[0]
        return np.asarray(profile.phi(d), dtype=float)

    def grad(p):
        d, gd, _ = gauge_derivatives(p)
        return np.asarray(profile.dphi(d))[:, None] * gd

    def hess(p):
        d, gd, hd = gauge_derivatives(p)
        d1 = np.asarray(profile.dphi(d))[:, None, None]
        d2 = np.asarray(profile.d2phi(d))[:, None, None]
        return d2 * gd[:, :, None] * gd[:, None, :] + d1 * hd

    return ScalarField(ev, grad, hess, label or profile.label, support)


def affine_pullback(f: ScalarField, matrix, offset, label: str = "", support=None) -> ScalarField:
    """``xi -> f(A xi + c)``; ``f`` must carry analytic derivatives."""
    A = np.asarray(matrix, dtype=float)
    c = np.asarray(offset, dtype=float)
    if f.grad_coords is None or f.hess_coords is None:
        raise ParameterError("affine_pullback needs analytic derivatives of the base field")

    def move(p):
        return np.asarray(p, dtype=float) @ A.T + c

    return ScalarField(
        eval=lambda p: f.eval(move(p)),
        grad_coords=lambda p: f.grad_coords(move(p)) @ A,
        hess_coords=lambda p: np.einsum("ki,nkl,lj->nij", A, f.hess_coords(move(p)), A),
        label=label or f.label,
        support=support,
    )


def left_translate(f: ScalarField, g, label: str = "") -> ScalarField:
    """``xi -> f(g^{-1} o xi)``, the field ``f`` moved so that its origin sits at ``g``.

    Left multiplication by ``h = g^{-1}`` is affine in exponential coordinates:
    ``t' = t + t_h + 2 sum(x . y_h - x_h . y)``.
    """
    g = np.asarray(g, dtype=float)
    h = -g
    m = g.size
    n = (m - 1) // 2
    A = np.eye(m)
    A[-1, :n] = 2.0 * h[n:2 * n]
    A[-1, n:2 * n] = -2.0 * h[:n]
    support = None
    if f.support is not None:
        centre, lo, hi = f.support
        centre = np.zeros(m) if centre is None else np.asarray(centre, dtype=float)
        # the new centre is g o centre
        from .group import compose

        support = (compose(g, centre), lo, hi)
    return affine_pullback(f, A, h, label=label or f"{f.label}@{tuple(g)}", support=support)


def product(f: ScalarField, g: ScalarField, label: str = "") -> ScalarField:
    """Pointwise product with the Leibniz rule for derivatives."""
    for fld in (f, g):
        if fld.grad_coords is None or fld.hess_coords is None:
            raise ParameterError("product needs analytic derivatives of both factors")

    def ev(p):
        return f.eval(p) * g.eval(p)

    def grad(p):
        return f.grad_coords(p) * g.eval(p)[:, None] + f.eval(p)[:, None] * g.grad_coords(p)

    def hess(p):
        fv, gv = f.eval(p), g.eval(p)
        fg, gg = f.grad_coords(p), g.grad_coords(p)
        cross = fg[:, :, None] * gg[:, None, :]
        return (f.hess_coords(p) * gv[:, None, None] + fv[:, None, None] * g.hess_coords(p)
                + cross + np.swapaxes(cross, 1, 2))

    support = f.support if f.support is not None else g.support
    return ScalarField(ev, grad, hess, label or f"{f.label}*{g.label}", support)


def linear_multiplier(coeffs, const: float = 1.0, label: str = "") -> ScalarField:
    """``const + <coeffs, xi>``."""
    w = np.asarray(coeffs, dtype=float)
    return ScalarField(
        eval=lambda p: const + np.asarray(p, dtype=float) @ w,
        grad_coords=lambda p: np.broadcast_to(w, np.shape(p)).copy(),
        hess_coords=lambda p: np.zeros((np.shape(p)[0], w.size, w.size)),
        label=label or f"{const}+<{tuple(w)},xi>",
    )
