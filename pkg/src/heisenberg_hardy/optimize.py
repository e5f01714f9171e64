"""Thin derivative-free optimisation wrappers around :mod:`scipy.optimize`."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize as _opt

__all__ = ["OptimizationResult", "golden_minimize", "simplex_minimize", "minimize"]


@dataclass
class OptimizationResult:
    """Minimiser ``x``, minimal value ``fun`` and bookkeeping."""

    x: np.ndarray
    fun: float
    converged: bool
    evaluations: int
    method: str
    message: str = ""
    history: list = field(default_factory=list)

    @property
    def ratio(self) -> float:
        return self.fun


def _recording(func, history):
    def wrapped(x):
        val = float(func(x))
        history.append((np.atleast_1d(np.array(x, dtype=float)).copy(), val))
        return val

    return wrapped


def golden_minimize(func: Callable[[float], float], bracket: tuple, xtol: float = 1e-8,
                    maxiter: int = 500) -> OptimizationResult:
    """Golden-section search on an interval ``(lo, hi)``.

    A coarse grid of probes locates a bracketing triple; when the smallest
    probe is an end point that end point is returned.
    """
    lo, hi = map(float, bracket)
    history: list = []
    f = _recording(func, history)
    grid = np.linspace(lo, hi, 9)
    vals = [f(x) for x in grid]
    k = int(np.argmin(vals))
    if k == 0 or k == len(grid) - 1:
        return OptimizationResult(np.array([grid[k]]), vals[k], True, len(history),
                                  "golden", "minimum at interval end", history)
    lo, mid, hi = grid[k - 1], grid[k], grid[k + 1]
    try:
        res = _opt.minimize_scalar(f, bracket=(lo, mid, hi), method="golden",
                                   options={"xtol": xtol, "maxiter": maxiter})
    except (ValueError, RuntimeError) as exc:
        best = min(history, key=lambda h: h[1])
        return OptimizationResult(best[0], best[1], False, len(history), "golden", str(exc), history)
    return OptimizationResult(np.atleast_1d(res.x), float(res.fun), bool(res.success),
                              len(history), "golden", str(getattr(res, "message", "")), history)


def simplex_minimize(func: Callable[[np.ndarray], float], x0: Sequence[float],
                     xatol: float = 1e-6, fatol: float = 1e-10, maxiter: int = 2000,
                     initial_step: float = 0.25) -> OptimizationResult:
    """Nelder-Mead simplex search from ``x0``."""
    x0 = np.asarray(x0, dtype=float)
    simplex = np.vstack([x0] + [x0 + initial_step * np.eye(len(x0))[k] for k in range(len(x0))])
    history: list = []
    f = _recording(func, history)
    res = _opt.minimize(f, x0, method="Nelder-Mead",
                        options={"xatol": xatol, "fatol": fatol, "maxiter": maxiter,
                                 "initial_simplex": simplex})
    return OptimizationResult(np.atleast_1d(res.x), float(res.fun), bool(res.success),
                              len(history), "nelder-mead", str(res.message), history)


def minimize(func, x0=None, bounds=None, **options) -> OptimizationResult:
    """Golden section for one bounded parameter, simplex search otherwise."""
    if bounds is not None and len(bounds) == 1 and (x0 is None or np.size(x0) == 1):
        return golden_minimize(lambda x: func(np.atleast_1d(x)), bounds[0], **options)
    if x0 is None:
        raise ValueError("x0 is required for multi-parameter search")
    return simplex_minimize(func, x0, **options)
