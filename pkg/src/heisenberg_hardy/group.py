"""Algebra of the Heisenberg group H^n in exponential coordinates.

A point is ``xi = (x, y, t)`` with ``x, y`` in R^n and ``t`` real.  All the
operations below accept either a :class:`GroupPoint` or an array whose last
axis has length ``2n + 1`` laid out as ``(x_1..x_n, y_1..y_n, t)``; arrays are
processed in a vectorised way and a :class:`GroupPoint` input gives a
:class:`GroupPoint` (or float) back.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

__all__ = [
    "GroupParams",
    "GroupPoint",
    "compose",
    "inverse",
    "dilate",
    "gauge",
    "distance",
    "distance_closed_form",
    "split",
    "dimension_of",
]


@dataclass(frozen=True)
class GroupParams:
    """Dimension data of H^n: ``n`` pairs of horizontal coordinates."""

    n: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n!r}")

    @property
    def Q(self) -> int:
        """Homogeneous dimension ``2n + 2``."""
        return 2 * self.n + 2

    @property
    def dim(self) -> int:
        """Topological dimension ``2n + 1``."""
        return 2 * self.n + 1


@dataclass(frozen=True)
class GroupPoint:
    x: tuple
    y: tuple
    t: float

    def __post_init__(self):
        x = tuple(float(v) for v in np.atleast_1d(self.x))
        y = tuple(float(v) for v in np.atleast_1d(self.y))
        if len(x) != len(y) or not x:
            raise ParameterError("x and y must be non-empty and of equal length")
        t = float(self.t)
        if not np.all(np.isfinite(x + y + (t,))):
            raise ParameterError("group point components must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return len(self.x)

    def to_array(self) -> np.ndarray:
        return np.array(self.x + self.y + (self.t,))

    def __array__(self, dtype=None, copy=None):
        arr = self.to_array()
        return arr if dtype is None else arr.astype(dtype)

    @classmethod
    def from_array(cls, arr) -> "GroupPoint":
        arr = np.asarray(arr, dtype=float)
        if arr.ndim != 1 or arr.size % 2 != 1 or arr.size < 3:
            raise ParameterError(f"cannot read a group point from shape {arr.shape}")
        n = (arr.size - 1) // 2
        return cls(arr[:n], arr[n:2 * n], arr[-1])

    @classmethod
    def identity(cls, n: int = 1) -> "GroupPoint":
        return cls((0.0,) * n, (0.0,) * n, 0.0)


def _as_array(xi):
    arr = np.asarray(xi, dtype=float)
    if arr.shape[-1] % 2 != 1 or arr.shape[-1] < 3:
        raise ParameterError(f"last axis must have odd length 2n+1 >= 3, got {arr.shape}")
    return arr


def dimension_of(xi) -> int:
    """Return ``n`` for a point or array of points."""
    return (np.shape(xi)[-1] - 1) // 2


def split(xi):
    """Split points into ``(x, y, t)`` views; ``x`` and ``y`` keep a trailing axis of length n."""
    arr = _as_array(xi)
    n = (arr.shape[-1] - 1) // 2
    return arr[..., :n], arr[..., n:2 * n], arr[..., -1]


def _wrap(result, *inputs):
    if any(isinstance(v, GroupPoint) for v in inputs):
        return GroupPoint.from_array(result)
    return result


def _check_same_n(a, b):
    if a.shape[-1] != b.shape[-1]:
        raise ParameterError(
            f"dimension mismatch: points of length {a.shape[-1]} and {b.shape[-1]}")


def compose(xi, xi0):
    """Group law ``xi o xi0``.

    ``(x + x0, y + y0, t + t0 + 2 sum_j (x0_j y_j - x_j y0_j))``.
    """
    a, b = _as_array(xi), _as_array(xi0)
    _check_same_n(a, b)
    xa, ya, ta = split(a)
    xb, yb, tb = split(b)
    t = ta + tb + 2.0 * np.sum(xb * ya - xa * yb, axis=-1)
    out = np.concatenate([xa + xb, ya + yb, t[..., None]], axis=-1)
    return _wrap(out, xi, xi0)


def inverse(xi):
    """Group inverse, which is plain negation in exponential coordinates."""
    return _wrap(-_as_array(xi), xi)


def dilate(lam: float, xi):
    """Anisotropic dilation ``(lam x, lam y, lam^2 t)``."""
    if not lam > 0:
        raise ParameterError(f"dilation factor must be positive, got {lam!r}")
    arr = _as_array(xi)
    scale = np.full(arr.shape[-1], float(lam))
    scale[-1] = lam * lam
    return _wrap(arr * scale, xi)


def gauge(xi):
    """Heisenberg (Koranyi) norm ``(|z|^4 + t^2)^(1/4)``."""
    x, y, t = split(xi)
    z2 = np.sum(x * x + y * y, axis=-1)
    out = (z2 * z2 + t * t) ** 0.25
    return float(out) if np.ndim(out) == 0 else out


def distance(xi, xi0):
    """Left-invariant gauge distance ``gauge(xi0^{-1} o xi)``."""
    a, b = _as_array(xi), _as_array(xi0)
    _check_same_n(a, b)
    return gauge(compose(-b, a))


def distance_closed_form(xi, xi0):
    """Distance written out coordinate-wise, without forming the group product."""
    a, b = _as_array(xi), _as_array(xi0)
    _check_same_n(a, b)
    x, y, t = split(a)
    x0, y0, t0 = split(b)
    dz2 = np.sum((x - x0) ** 2 + (y - y0) ** 2, axis=-1)
    dt = t - t0 - 2.0 * np.sum(x * y0 - x0 * y, axis=-1)
    out = (dz2 * dz2 + dt * dt) ** 0.25
    return float(out) if np.ndim(out) == 0 else out
