"""One-dimensional maximization: coarse grid scan refined by golden-section search."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

FLAT_TOL = 1e-12


@dataclass(frozen=True)
class OptimumResult:
    """Location and value of a maximum.

    ``degenerate`` is set when the function is flat on the scanned grid; the
    location is then the left end of ``bracket`` and carries no information.
    """

    location: float
    value: float
    bracket: tuple
    degenerate: bool = False
    evaluations: int = 0


def maximize(func, lo: float, hi: float, *, grid: int = 41, xtol: float = 1e-7) -> OptimumResult:
    """Maximize a unimodal function of one variable on ``[lo, hi]``.

    Parameters
    ----------
    func : callable
        Scalar function of one float.
    lo, hi : float
        Search interval, ``lo < hi``.
    grid : int
        Points in the coarse scan, at least 3.
    xtol : float
        Absolute tolerance on the location.
    """
    if not hi > lo:
        raise ValueError("empty search interval")
    if grid < 3:
        raise ValueError("grid needs at least 3 points")
    xs = np.linspace(lo, hi, grid)
    vals = np.array([func(x) for x in xs])
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("objective returned a non-finite value")
    count = grid
    if vals.max() - vals.min() < FLAT_TOL:
        return OptimumResult(float(lo), float(vals[0]), (float(lo), float(hi)), True, count)
    i = int(np.argmax(vals))
    left, right = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    neg = lambda x: -func(x)  # noqa: E731
    if 0 < i < grid - 1:
        res = minimize_scalar(neg, bracket=(left, xs[i], right), method="golden", tol=xtol)
    else:
        # maximum on the boundary: bounded refinement inside the edge cell
        res = minimize_scalar(neg, bounds=(left, right), method="bounded", options={"xatol": xtol})
    count += int(res.nfev)
    loc, val = float(res.x), float(-res.fun)
    if val < vals[i]:
        loc, val = float(xs[i]), float(vals[i])
    return OptimumResult(loc, val, (float(left), float(right)), False, count)
