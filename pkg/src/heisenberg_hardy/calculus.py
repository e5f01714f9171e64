"""Horizontal calculus on H^n.

The left-invariant frame is

    X_j = d/dx_j + 2 y_j d/dt,   Y_j = d/dy_j - 2 x_j d/dt,   T = d/dt,

and horizontal vectors are plain arrays of length ``2n`` in the frame order
``(X_1..X_n, Y_1..Y_n)``.  Scalar fields carry optional analytic coordinate
partials; whenever these are missing, central finite differences are used
(step ``1e-5 * max(1, |coordinate|)`` for first derivatives and ``1e-4``
scaled, with one Richardson extrapolation, for second derivatives taken
from values only).

Every operator accepts a single point (shape ``(2n+1,)`` or a
:class:`~heisenberg_hardy.group.GroupPoint`) or a batch of shape
``(N, 2n+1)`` and returns a result with the matching leading shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ParameterError, SingularPointError
from .group import compose, gauge, split

__all__ = [
    "ScalarField",
    "GaugeRadialProfile",
    "HorizontalVector",
    "coord_gradient",
    "coord_hessian",
    "frame_matrix",
    "apply_frame_field",
    "horizontal_gradient",
    "horizontal_hessian",
    "horizontal_divergence",
    "sub_laplacian",
    "p_sub_laplacian",
    "p_sub_laplacian_flux",
    "gauge_radial_p_sub_laplacian",
    "GaugeIdentityReport",
    "check_gauge_identities",
    "FD_STEP",
    "FD_STEP_2",
]

FD_STEP = 1e-5
FD_STEP_2 = 1e-4

#: A horizontal vector is an array of length 2n in frame order (X_1..X_n, Y_1..Y_n).
HorizontalVector = np.ndarray

Batch = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ScalarField:
    """Real-valued function on H^n with optional analytic coordinate partials.

    ``eval`` maps an ``(N, 2n+1)`` array to ``(N,)``; ``grad_coords`` to
    ``(N, 2n+1)`` and ``hess_coords`` to ``(N, 2n+1, 2n+1)``, all in the
    coordinate order ``(x, y, t)``.  ``support`` optionally describes a set
    outside of which the field vanishes, as ``(center, r_lo, r_hi)``: the
    field is zero unless ``r_lo <= d(center^{-1} o xi) <= r_hi``.
    """

    eval: Batch
    grad_coords: Optional[Batch] = None
    hess_coords: Optional[Batch] = None
    label: str = ""
    support: Optional[tuple] = field(default=None, compare=False)

    def __call__(self, xi):
        pts, single = _batch(xi)
        out = np.asarray(self.eval(pts), dtype=float)
        return out[0] if single else out


@dataclass(frozen=True)
class GaugeRadialProfile:
    """A profile ``phi`` of the gauge together with its first two derivatives."""

    phi: Callable[[np.ndarray], np.ndarray]
    dphi: Callable[[np.ndarray], np.ndarray]
    d2phi: Callable[[np.ndarray], np.ndarray]
    label: str = ""


def _batch(xi):
    arr = np.asarray(xi, dtype=float)
    if arr.ndim == 1:
        return arr[None, :], True
    if arr.ndim != 2:
        raise ParameterError(f"expected a point or an (N, 2n+1) batch, got shape {arr.shape}")
    return arr, False


def _unbatch(out, single):
    return out[0] if single else out


def _steps(pts, base):
    return base * np.maximum(1.0, np.abs(pts))


# ---------------------------------------------------------------------------
# coordinate derivatives
# ---------------------------------------------------------------------------

def _fd_gradient(func, pts, base=FD_STEP):
    m = pts.shape[1]
    h = _steps(pts, base)
    cols = []
    for i in range(m):
        e = np.zeros_like(pts)
        e[:, i] = h[:, i]
        diff = np.asarray(func(pts + e)) - np.asarray(func(pts - e))
        step = (2.0 * h[:, i]).reshape((-1,) + (1,) * (diff.ndim - 1))
        cols.append(diff / step)
    return np.stack(cols, axis=1)


def _fd_hessian_once(func, pts, h, f0):
    n_pts, m = pts.shape
    hess = np.empty((n_pts, m, m))
    for i in range(m):
        ei = np.zeros_like(pts)
        ei[:, i] = h[:, i]
        fp, fm = np.asarray(func(pts + ei)), np.asarray(func(pts - ei))
        hess[:, i, i] = (fp - 2.0 * f0 + fm) / h[:, i] ** 2
        for j in range(i + 1, m):
            ej = np.zeros_like(pts)
            ej[:, j] = h[:, j]
            val = (np.asarray(func(pts + ei + ej)) - np.asarray(func(pts + ei - ej))
                   - np.asarray(func(pts - ei + ej)) + np.asarray(func(pts - ei - ej)))
            hess[:, i, j] = hess[:, j, i] = val / (4.0 * h[:, i] * h[:, j])
    return hess


def _fd_hessian_from_values(func, pts, base=FD_STEP_2):
    # central differences at h and 2h combined by one Richardson step
    h = _steps(pts, base)
    f0 = np.asarray(func(pts))
    fine = _fd_hessian_once(func, pts, h, f0)
    coarse = _fd_hessian_once(func, pts, 2.0 * h, f0)
    return (4.0 * fine - coarse) / 3.0


def coord_gradient(f: ScalarField, xi) -> np.ndarray:
    """Coordinate gradient ``(d_x, d_y, d_t) f``, analytic when available."""
    pts, single = _batch(xi)
    if f.grad_coords is not None:
        out = np.asarray(f.grad_coords(pts), dtype=float)
    else:
        out = _fd_gradient(f.eval, pts)
    return _unbatch(out, single)


def coord_hessian(f: ScalarField, xi) -> np.ndarray:
    """Coordinate Hessian; analytic, else differences of the analytic gradient, else of values."""
    pts, single = _batch(xi)
    if f.hess_coords is not None:
        out = np.asarray(f.hess_coords(pts), dtype=float)
    elif f.grad_coords is not None:
        jac = _fd_gradient(f.grad_coords, pts)  # (N, m_out, m_in) after transpose below
        out = 0.5 * (jac + np.swapaxes(jac, 1, 2))
    else:
        out = _fd_hessian_from_values(f.eval, pts)
    return _unbatch(out, single)


# ---------------------------------------------------------------------------
# frame
# ---------------------------------------------------------------------------

def frame_matrix(xi) -> np.ndarray:
    """Coordinate components of ``X_1..X_n, Y_1..Y_n``; shape ``(..., 2n, 2n+1)``."""
    arr = np.asarray(xi, dtype=float)
    x, y, _ = split(arr)
    n = x.shape[-1]
    E = np.zeros(arr.shape[:-1] + (2 * n, 2 * n + 1))
    idx = np.arange(2 * n)
    E[..., idx, idx] = 1.0
    E[..., :n, -1] = 2.0 * y
    E[..., n:, -1] = -2.0 * x
    return E


def _commutator_correction(n):
    # X_i(c_k) where c_k is the d/dt coefficient of the k-th frame field.
    C = np.zeros((2 * n, 2 * n))
    C[np.arange(n), n + np.arange(n)] = -2.0
    C[n + np.arange(n), np.arange(n)] = 2.0
    return C


def apply_frame_field(j: int, kind: str, f: ScalarField, xi):
    """Apply ``X_j``, ``Y_j`` (1-based ``j``) or ``T`` to ``f`` at ``xi``."""
    pts, single = _batch(xi)
    n = (pts.shape[1] - 1) // 2
    kind = kind.upper()
    if kind not in ("X", "Y", "T"):
        raise ParameterError(f"unknown frame field {kind!r}")
    if kind != "T" and not 1 <= j <= n:
        raise ParameterError(f"frame index {j} out of range 1..{n}")
    grad = coord_gradient(f, pts)
    x, y, _ = split(pts)
    if kind == "X":
        out = grad[:, j - 1] + 2.0 * y[:, j - 1] * grad[:, -1]
    elif kind == "Y":
        out = grad[:, n + j - 1] - 2.0 * x[:, j - 1] * grad[:, -1]
    else:
        out = grad[:, -1]
    return _unbatch(out, single)


def horizontal_gradient(f: ScalarField, xi) -> HorizontalVector:
    """``(X_1 f, ..., X_n f, Y_1 f, ..., Y_n f)``."""
    pts, single = _batch(xi)
    out = np.einsum("nkm,nm->nk", frame_matrix(pts), coord_gradient(f, pts))
    return _unbatch(out, single)


def _translation_hessian(func, pts, base=FD_STEP_2):
    """``E_i E_k f`` from values along right translations ``xi o (s e_i) o (u e_k)``.

    Right translation by ``s e_i`` moves along the integral curve of the i-th
    frame field, so these stencils never touch the coordinate formulas.
    """
    n = (pts.shape[1] - 1) // 2
    f0 = np.asarray(func(pts))

    def once(h):
        out = np.empty((pts.shape[0], 2 * n, 2 * n))
        for i in range(2 * n):
            ei = np.zeros(pts.shape[1])
            ei[i] = 1.0
            for k in range(2 * n):
                ek = np.zeros(pts.shape[1])
                ek[k] = 1.0
                if i == k:
                    fp = func(compose(pts, h[:, None] * ei))
                    fm = func(compose(pts, -h[:, None] * ei))
                    out[:, i, i] = (fp - 2.0 * f0 + fm) / h ** 2
                    continue
                acc = 0.0
                for si in (1.0, -1.0):
                    for sk in (1.0, -1.0):
                        q = compose(compose(pts, si * h[:, None] * ei), sk * h[:, None] * ek)
                        acc = acc + si * sk * np.asarray(func(q))
                out[:, i, k] = acc / (4.0 * h ** 2)
        return out

    h = base * np.maximum(1.0, np.max(np.abs(pts), axis=1))
    return (4.0 * once(h) - once(2.0 * h)) / 3.0


def horizontal_hessian(f: ScalarField, xi, grad=None, hess=None) -> np.ndarray:
    """Matrix ``H[i, k] = E_i E_k f`` over the horizontal frame (not symmetric).

    With coordinate partials this is ``E hess E^T`` plus the commutator
    term ``E_i(c_k) f_t``.  A field given by values only is differenced along
    right translations instead.
    """
    pts, single = _batch(xi)
    n = (pts.shape[1] - 1) // 2
    if hess is None and f.hess_coords is None and f.grad_coords is None:
        return _unbatch(_translation_hessian(f.eval, pts), single)
    if grad is None:
        grad = coord_gradient(f, pts)
    if hess is None:
        hess = coord_hessian(f, pts)
    E = frame_matrix(pts)
    out = np.einsum("nim,nmq,nkq->nik", E, hess, E)
    out += _commutator_correction(n)[None] * grad[:, -1, None, None]
    return _unbatch(out, single)


def horizontal_divergence(V: Callable[[np.ndarray], np.ndarray], xi,
                          analytic: Optional[Callable] = None) -> np.ndarray:
    """``sum_j X_j V_j + Y_j V_{n+j}`` for a field of horizontal vectors.

    ``V`` maps ``(N, 2n+1)`` points to ``(N, 2n)`` frame coefficients.  When
    ``analytic`` is given it is used directly; otherwise each coefficient is
    differentiated along its frame direction by central differences.
    """
    pts, single = _batch(xi)
    if analytic is not None:
        return _unbatch(np.asarray(analytic(pts), dtype=float), single)
    E = frame_matrix(pts)
    h = FD_STEP * np.maximum(1.0, np.max(np.abs(pts), axis=1))
    out = np.zeros(pts.shape[0])
    for k in range(E.shape[1]):
        step = h[:, None] * E[:, k, :]
        vp = np.asarray(V(pts + step))[:, k]
        vm = np.asarray(V(pts - step))[:, k]
        out += (vp - vm) / (2.0 * h)
    return _unbatch(out, single)


def sub_laplacian(f: ScalarField, xi) -> np.ndarray:
    """``Delta_z f + 4|z|^2 f_tt + 4 P f_t`` with ``P = sum(y_j d/dx_j - x_j d/dy_j)``.

    Fields without any analytic partials use the trace of the
    translation-stencil horizontal Hessian instead.
    """
    pts, single = _batch(xi)
    n = (pts.shape[1] - 1) // 2
    if f.hess_coords is None and f.grad_coords is None:
        out = np.trace(_translation_hessian(f.eval, pts), axis1=1, axis2=2)
        return _unbatch(out, single)
    hess = coord_hessian(f, pts)
    x, y, _ = split(pts)
    z2 = np.sum(x * x + y * y, axis=1)
    lap_z = np.trace(hess[:, :2 * n, :2 * n], axis1=1, axis2=2)
    p_ft = np.sum(y * hess[:, :n, -1] - x * hess[:, n:2 * n, -1], axis=1)
    out = lap_z + 4.0 * z2 * hess[:, -1, -1] + 4.0 * p_ft
    return _unbatch(out, single)


def _p_laplacian_from_parts(G, HH, p):
    g2 = np.sum(G * G, axis=1)
    lap = np.trace(HH, axis1=1, axis2=2)
    if p == 2:
        return lap
    quad = np.einsum("ni,nik,nk->n", G, HH, G)
    out = np.zeros_like(g2)
    crit = g2 == 0.0
    ok = ~crit
    gn = np.sqrt(g2[ok])
    out[ok] = gn ** (p - 2) * lap[ok] + (p - 2) * gn ** (p - 4) * quad[ok]
    if np.any(crit) and p < 2:
        # flux |G|^{p-2} G is only differentiable where f is locally flat
        if np.any(np.abs(HH[crit]).max(axis=(1, 2)) > 0):
            raise SingularPointError("p-sub-Laplacian with p < 2 at a critical point of f")
    return out


def p_sub_laplacian(f: ScalarField, xi, p: float) -> np.ndarray:
    """``div_H(|grad_H f|^{p-2} grad_H f)`` expanded by the product rule.

    Uses ``|G|^{p-2} Delta_H f + (p-2)|G|^{p-4} <G, H G>`` with ``H`` the
    horizontal Hessian.  At critical points the value is 0 for ``p >= 2``;
    for ``p < 2`` a :class:`SingularPointError` is raised unless ``f`` is
    flat there.
    """
    if not p > 1:
        raise ParameterError(f"p must exceed 1, got {p!r}")
    pts, single = _batch(xi)
    G = horizontal_gradient(f, pts)
    HH = horizontal_hessian(f, pts)
    return _unbatch(_p_laplacian_from_parts(G, HH, p), single)


def p_sub_laplacian_flux(f: ScalarField, xi, p: float) -> np.ndarray:
    """Same operator, obtained by differencing the flux ``|G|^{p-2} G`` along the frame."""
    if not p > 1:
        raise ParameterError(f"p must exceed 1, got {p!r}")

    def flux(q):
        G = horizontal_gradient(f, q)
        g = np.linalg.norm(G, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(g > 0, g ** (p - 2), 0.0 if p > 2 else np.inf)
        if p == 2:
            w = np.ones_like(g)
        return w[:, None] * G

    pts, single = _batch(xi)
    if p < 2 and np.any(np.linalg.norm(horizontal_gradient(f, pts), axis=1) == 0):
        raise SingularPointError("p-sub-Laplacian with p < 2 at a critical point of f")
    return _unbatch(horizontal_divergence(flux, pts), single)


def gauge_radial_p_sub_laplacian(profile: GaugeRadialProfile, xi, p: float) -> np.ndarray:
    """Closed form of the p-sub-Laplacian of ``phi(d)``.

    ``(|z|/d)^p [psi'(d) + (Q-1) psi(d)/d]`` with ``psi = |phi'|^{p-2} phi'``,
    so that ``psi' = (p-1)|phi'|^{p-2} phi''``.
    """
    if not p > 1:
        raise ParameterError(f"p must exceed 1, got {p!r}")
    pts, single = _batch(xi)
    n = (pts.shape[1] - 1) // 2
    Q = 2 * n + 2
    d = gauge(pts)
    if np.any(d == 0):
        raise SingularPointError("gauge-radial p-sub-Laplacian is undefined at the origin")
    x, y, _ = split(pts)
    zr = np.sqrt(np.sum(x * x + y * y, axis=1)) / d
    d1 = np.asarray(profile.dphi(d), dtype=float)
    d2 = np.asarray(profile.d2phi(d), dtype=float)
    a1 = np.abs(d1)
    if p == 2:
        w = np.ones_like(a1)
    else:
        with np.errstate(divide="ignore"):
            w = np.where(a1 > 0, a1 ** (p - 2), 0.0 if p > 2 else np.inf)
        if p < 2 and np.any((a1 == 0) & (d2 != 0)):
            raise SingularPointError("p < 2 at a critical point of the profile")
        w = np.where(np.isinf(w), 0.0, w)
    psi = w * d1
    dpsi = (p - 1) * w * d2
    out = zr ** p * (dpsi + (Q - 1) * psi / d)
    return _unbatch(out, single)


# ---------------------------------------------------------------------------
# gauge identities
# ---------------------------------------------------------------------------

@dataclass
class GaugeIdentityReport:
    """Scaled residuals of the explicit gauge identities at a batch of points.

    Each residual is ``|finite-difference value - closed form|`` divided by
    the natural homogeneous scale ``d^k`` of the quantity (``k`` its degree),
    so that the numbers are comparable across dilations and near the t-axis.
    """

    points: np.ndarray
    p: float
    grad_norm: np.ndarray
    sub_laplacian: np.ndarray
    z_power_cross: np.ndarray
    ratio_power_cross: np.ndarray
    infinity_laplacian: np.ndarray

    def rows(self):
        """``(name, max residual)`` pairs in a fixed order."""
        return [
            ("grad_norm", float(np.max(self.grad_norm))),
            ("sub_laplacian", float(np.max(self.sub_laplacian))),
            ("z_power_cross", float(np.max(self.z_power_cross))),
            ("ratio_power_cross", float(np.max(self.ratio_power_cross))),
            ("infinity_laplacian", float(np.max(self.infinity_laplacian))),
        ]

    def max_residual(self) -> float:
        return max(v for _, v in self.rows())


def check_gauge_identities(xi, p: float = 3.0) -> GaugeIdentityReport:
    """Compare finite-difference horizontal derivatives of the gauge with closed forms.

    Checked, off the origin:

    * ``|grad_H d| = |z|/d``
    * ``Delta_H d = (Q-1)|z|^2/d^3``
    * ``grad_H(|z|^{p-2}) . grad_H d = (p-2)|z|^p/d^3``
    * ``grad_H(|z|^{p-2}/d^{p-2}) . grad_H d = 0``
    * ``<grad_H |grad_H d|^2, grad_H d>/2 = 0``
    """
    pts, _ = _batch(xi)
    n = (pts.shape[1] - 1) // 2
    Q = 2 * n + 2
    d = gauge(pts)
    if np.any(d == 0):
        raise SingularPointError("gauge identities are only asserted off the origin")
    x, y, _ = split(pts)
    z = np.sqrt(np.sum(x * x + y * y, axis=1))

    d_field = ScalarField(eval=gauge, label="gauge")
    zpow = ScalarField(eval=lambda q: np.sum(split(q)[0] ** 2 + split(q)[1] ** 2, axis=-1) ** ((p - 2) / 2))
    ratio = ScalarField(eval=lambda q: (np.sqrt(np.sum(split(q)[0] ** 2 + split(q)[1] ** 2, axis=-1))
                                        / gauge(q)) ** (p - 2))

    Gd = horizontal_gradient(d_field, pts)
    HH = horizontal_hessian(d_field, pts)

    r9 = np.abs(np.linalg.norm(Gd, axis=1) - z / d)
    r10 = np.abs(np.trace(HH, axis1=1, axis2=2) - (Q - 1) * z ** 2 / d ** 3) * d
    cross = np.sum(horizontal_gradient(zpow, pts) * Gd, axis=1)
    r11 = np.abs(cross - (p - 2) * z ** p / d ** 3) / d ** (p - 3)
    r12 = np.abs(np.sum(horizontal_gradient(ratio, pts) * Gd, axis=1)) * d
    # <grad_H |G|^2, G>/2 = sum_{i,k} G_i G_k (E_i E_k d)
    r9a = np.abs(np.einsum("ni,nik,nk->n", Gd, HH, Gd)) * d
    return GaugeIdentityReport(pts, p, r9, r10, r11, r12, r9a)
