"""Quadrature and root-finding helpers."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import BracketError, ConvergenceError


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)


def composite_gauss_legendre(f, a, b, n_quad: int = 16, panels: int = 1):
    """Integrate f from a to b (broadcast arrays) with equal panels.

    ``f`` receives an array with one trailing axis of length panels*n_quad
    holding the abscissae for each (a, b) pair and must return the same shape.
    """
    nodes, weights = gauss_legendre(n_quad)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    width = (b - a) / panels
    left = a[..., None] + width[..., None] * np.arange(panels)  # (..., panels)
    pts = left[..., None] + 0.5 * width[..., None, None] * (nodes + 1.0)  # (..., panels, n)
    shape = pts.shape
    vals = np.asarray(f(pts.reshape(shape[:-2] + (panels * n_quad,)))).reshape(shape)
    return 0.5 * width * np.sum(vals * weights, axis=(-2, -1))


def find_root(g, lo: float, hi: float, ftol: float = 1e-12, maxiter: int = 200) -> float:
    """Root of g on [lo, hi] by secant steps safeguarded with bisection.

    A secant candidate is rejected in favour of the midpoint when it leaves
    the bracket or when the previous step failed to halve the bracket.
    """
    a, b = float(lo), float(hi)
    fa, fb = g(a), g(b)
    if abs(fa) <= ftol:
        return a
    if abs(fb) <= ftol:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise BracketError(f"no sign change on [{a!r}, {b!r}]: g(lo)={fa!r}, g(hi)={fb!r}")
    x0, f0, x1, f1 = a, fa, b, fb
    width = abs(b - a)
    force_bisect = False
    for _ in range(maxiter):
        mid = 0.5 * (a + b)
        c = mid
        if not force_bisect and f1 != f0:
            c = x1 - f1 * (x1 - x0) / (f1 - f0)
            if not (min(a, b) < c < max(a, b)):
                c = mid
        fc = g(c)
        if abs(fc) <= ftol:
            return c
        if math.copysign(1.0, fc) == math.copysign(1.0, fa):
            a, fa = c, fc
        else:
            b, fb = c, fc
        x0, f0, x1, f1 = x1, f1, c, fc
        new_width = abs(b - a)
        force_bisect = new_width > 0.5 * width
        width = new_width
        if width <= 4.0 * np.finfo(float).eps * max(abs(a), abs(b)):
            return a if abs(fa) <= abs(fb) else b
    raise ConvergenceError(f"no convergence after {maxiter} iterations; bracket [{a!r}, {b!r}]")


def invert_monotone(F, dF, target, lo, hi, xtol: float = 1e-12, maxiter: int = 100):
    """Solve F(x) = target elementwise for increasing F, with lo <= x <= hi.

    Newton iteration inside a bracket that shrinks every step; a Newton
    iterate that leaves the bracket is replaced by the midpoint.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = F(x) - target
        below = fx < 0.0
        lo = np.where(below, x, lo)
        hi = np.where(below, hi, x)
        newton = x - fx / dF(x)
        inside = (newton >= lo) & (newton <= hi)
        x_new = np.where(inside, newton, 0.5 * (lo + hi))
        done = np.all(np.abs(x_new - x) <= xtol * np.maximum(1.0, np.abs(x)))
        x = x_new
        if done:
            return x
    raise ConvergenceError("monotone inversion did not reach the requested tolerance")
