"""Reciprocal map x* with dx* = u dx - flux dt, t* = t, u* = 1/u.

The image satisfies

    u*_t* = d/dx* [ d/dx*( (1/u*) d/dx*(1/u*) ) - (lambda/3) u*^4 (t*+a)^-2 ].

Gauge: x*(0, 0) = 0. Since flux(0, t) = 0 on solutions, x*(0, t) stays 0
and x*(x, t) is the integral of u from 0 to x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ermakov
from .errors import DomainError
from .numerics import composite_gauss_legendre, invert_monotone
from .reports import GridSpec, ResidualReport
from .similarity import eval_u, flux
from .stefan import StefanProblem, front, front_velocity

PANEL_XI = 0.5  # panel width in the similarity variable
PANEL_T = 1.0


def _x_panels(problem: StefanProblem) -> int:
    return max(1, math.ceil(problem.gamma / PANEL_XI))


def _check_quad(n_quad: int) -> None:
    if n_quad < 16:
        raise DomainError(f"n_quad={n_quad}: at least 16 nodes per panel are required")


def space_leg(problem: StefanProblem, x, t, n_quad: int = 16):
    """Integral of u(x', t) dx' from 0 to x (no domain check)."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    t_b = np.broadcast_to(t, np.broadcast_shapes(x.shape, t.shape))
    return composite_gauss_legendre(
        lambda pts: eval_u(problem.sol, pts, t_b[..., None]), np.zeros_like(t_b), x, n_quad, _x_panels(problem)
    )


def time_leg(problem: StefanProblem, x, t0, t1, n_quad: int = 16):
    """Integral of -flux(x, s) ds from t0 to t1 at fixed x."""
    x = np.asarray(x, dtype=float)
    t0 = np.asarray(t0, dtype=float)
    t1 = np.asarray(t1, dtype=float)
    shape = np.broadcast_shapes(x.shape, t0.shape, t1.shape)
    x_b = np.broadcast_to(x, shape)
    span = float(np.max(np.abs(t1 - t0))) if np.size(t1) else 0.0
    panels = max(1, math.ceil(span / PANEL_T))
    return composite_gauss_legendre(
        lambda s: -flux(problem.sol, x_b[..., None], s),
        np.broadcast_to(t0, shape),
        np.broadcast_to(t1, shape),
        n_quad,
        panels,
    )


def x_star(problem: StefanProblem, x, t, n_quad: int = 16):
    """Image coordinate x*(x, t) for 0 <= x <= S(t)."""
    _check_quad(n_quad)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise DomainError("x_star: t must be non-negative")
    S = front(problem, t)
    if np.any(x < 0.0) or np.any(x > S * (1.0 + 1e-12)):
        raise DomainError("x_star: x must lie in [0, S(t)]")
    out = space_leg(problem, x, t, n_quad)
    return float(out) if out.ndim == 0 else out


def path_integrals(problem: StefanProblem, x1: float, t0: float, t1: float, n_quad: int = 16):
    """x*(x1, t1) - x*(0, t0) along two different paths.

    Returns (space then time, time then space); they agree exactly when the
    one-form u dx - flux dt is closed, i.e. when u solves the PDE.
    """
    if not (0.0 <= x1 <= front(problem, min(t0, t1))):
        raise DomainError("path corner must stay inside the moving domain")
    space_first = float(space_leg(problem, x1, t0, n_quad) + time_leg(problem, x1, t0, t1, n_quad))
    time_first = float(time_leg(problem, 0.0, t0, t1, n_quad) + space_leg(problem, x1, t1, n_quad))
    return space_first, time_first


def origin_drift(problem: StefanProblem, t0: float, t1: float, n_quad: int = 16) -> float:
    """x*(0, t1) - x*(0, t0) by quadrature of the time leg."""
    return float(time_leg(problem, 0.0, t0, t1, n_quad))


def image_front(problem: StefanProblem, n_quad: int = 16) -> float:
    """x* at the moving boundary, evaluated at t = 0."""
    return float(space_leg(problem, problem.S_0, 0.0, n_quad))


def invert_x_star(problem: StefanProblem, xs, t, n_quad: int = 16):
    """x with x*(x, t) = xs, by bracketed bisection plus Newton polish on [0, S(t)]."""
    xs = np.asarray(xs, dtype=float)
    t = np.broadcast_to(np.asarray(t, dtype=float), xs.shape)
    return invert_monotone(
        lambda x: space_leg(problem, x, t, n_quad),
        lambda x: eval_u(problem.sol, x, t),
        xs,
        0.0,
        front(problem, t),
    )


def compatibility_field(problem: StefanProblem, grid: GridSpec, n_quad: int = 16, lam_scale: float = 1.0):
    """Pointwise residual of the reciprocal equation on an (x*, t*) lattice.

    u* is tabulated by inverting x -> x*(x, t) on each time slice. The inner
    operator uses d/dx*((1/u*) d/dx*(1/u*)) = (1/2) d2/dx*2 (u*^-2).
    ``lam_scale`` multiplies lambda in the image flux only. Returns
    (x*, t*, residual, scale) on the lattice interior, which drops two
    columns at each x* edge and one row at each t* edge.
    """
    if grid.t0 < 0.0:
        raise DomainError("lattice must have t* >= 0")
    s_img = image_front(problem, n_quad)
    if grid.x0 < 0.0 or grid.x1 > s_img * (1.0 + 1e-12):
        raise DomainError(f"lattice x* range must lie in [0, {s_img!r}]")
    xs, ts = grid.axes()
    hx = xs[1] - xs[0]
    ht = ts[1] - ts[0]
    XS, TS = np.meshgrid(xs, ts)
    X = invert_x_star(problem, XS, TS, n_quad)
    u_star = 1.0 / eval_u(problem.sol, X, TS)

    v2 = 1.0 / u_star ** 2
    inner = 0.5 * (v2[:, 2:] - 2.0 * v2[:, 1:-1] + v2[:, :-2]) / hx ** 2
    tau = TS[:, 1:-1] + problem.a
    lam = problem.sol.lam * lam_scale
    G = inner - (lam / 3.0) * u_star[:, 1:-1] ** 4 / tau ** 2
    dG = (G[:, 2:] - G[:, :-2]) / (2.0 * hx)
    du_t = (u_star[2:, 2:-2] - u_star[:-2, 2:-2]) / (2.0 * ht)
    res = du_t - dG[1:-1, :]
    scale = np.abs(du_t) + np.abs(dG[1:-1, :])
    return XS[1:-1, 2:-2], TS[1:-1, 2:-2], res, scale


def compatibility_residual(
    problem: StefanProblem, grid: GridSpec, n_quad: int = 16, lam_scale: float = 1.0
) -> ResidualReport:
    """Summary of ``compatibility_field`` as a residual report."""
    name = "reciprocal compatibility"
    if grid.is_empty:
        return ResidualReport.from_values(name, "finite-difference", [])
    _, _, res, scale = compatibility_field(problem, grid, n_quad, lam_scale)
    hx = (grid.x1 - grid.x0) / (grid.nx - 1)
    ht = (grid.t1 - grid.t0) / (grid.nt - 1)
    return ResidualReport.from_values(name, "finite-difference", res, scale, f"hx={hx!r}, ht={ht!r}")


def s_star_coefficient(problem: StefanProblem) -> float:
    """(gamma/3) [Psi(gamma) - L_m/gamma], the coefficient of ln(t*+a)."""
    p, _, _ = ermakov.psi(problem.sol.params, np.array([problem.gamma]))
    return float(problem.gamma / 3.0 * (p[0] - problem.L_m / problem.gamma))


def s_star_constant(problem: StefanProblem, n_quad: int = 16) -> float:
    """Additive constant chosen so that S*(0) equals x* at the initial front."""
    return image_front(problem, n_quad) - s_star_coefficient(problem) * math.log(problem.a)


def s_star(problem: StefanProblem, t_star, const: float | None = None):
    """Image of the moving boundary, coeff ln(t*+a) + const."""
    t_star = np.asarray(t_star, dtype=float)
    if np.any(t_star < 0.0):
        raise DomainError("s_star: t* must be non-negative")
    c = s_star_constant(problem) if const is None else const
    out = s_star_coefficient(problem) * np.log(t_star + problem.a) + c
    return float(out) if out.ndim == 0 else out


def s_star_initial(problem: StefanProblem, const: float | None = None) -> float:
    return s_star(problem, 0.0, const)


def front_quadrature(problem: StefanProblem, t: float, n_quad: int = 16) -> float:
    """x* along x = S(t): initial front image plus the integral of u S' - flux."""
    sol = problem.sol

    def rate(s):
        S = front(problem, s)
        return eval_u(sol, S, s) * front_velocity(problem, s) - flux(sol, S, s)

    panels = max(1, math.ceil(t / PANEL_T))
    return image_front(problem, n_quad) + float(composite_gauss_legendre(rate, 0.0, t, n_quad, panels))


@dataclass(frozen=True)
class ReciprocalImage:
    problem: StefanProblem
    x_star_origin: float
    x: np.ndarray
    t: np.ndarray
    x_star: np.ndarray
    u_star: np.ndarray
    s_star_coeff: float
    s_star_const: float

    def sidecar(self) -> dict:
        return {
            "x_star_origin": self.x_star_origin,
            "s_star_coeff": self.s_star_coeff,
            "s_star_const": self.s_star_const,
            "s_star_initial": self.s_star_coeff * math.log(self.problem.a) + self.s_star_const,
            "gamma": self.problem.gamma,
            "a": self.problem.a,
        }


def build_image(problem: StefanProblem, fractions, times, n_quad: int = 16) -> ReciprocalImage:
    """Tabulate (x, t, x*, u*) with x = fraction * S(t)."""
    F, T = np.meshgrid(np.asarray(fractions, dtype=float), np.asarray(times, dtype=float))
    X = F * front(problem, T)
    XS = x_star(problem, X, T, n_quad)
    US = 1.0 / eval_u(problem.sol, X, T)
    return ReciprocalImage(
        problem=problem,
        x_star_origin=0.0,
        x=X.ravel(),
        t=T.ravel(),
        x_star=np.asarray(XS).ravel(),
        u_star=US.ravel(),
        s_star_coeff=s_star_coefficient(problem),
        s_star_const=s_star_constant(problem, n_quad),
    )
