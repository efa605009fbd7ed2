"""Exact similarity solutions u = (t+a)**(-1/3) Psi(x (t+a)**(-1/3)) of

    u_t + u_xxx + lambda (t+a)**-2 u**-4 u_x = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import ermakov
from .ermakov import ErmakovParams
from .errors import DomainError
from .reports import GridSpec, ResidualReport

M_EXP = -1.0 / 3.0
N_EXP = 1.0 / 3.0
MU_EXP = -2.0


@dataclass(frozen=True)
class SimilaritySolution:
    params: ErmakovParams
    a: float
    m: float = field(default=M_EXP)
    n: float = field(default=N_EXP)
    mu: float = field(default=MU_EXP)

    def __post_init__(self):
        if not self.a > 0.0:
            raise DomainError(f"a={self.a!r}: the time offset must be positive")
        if (self.m, self.n, self.mu) != (M_EXP, N_EXP, MU_EXP):
            raise DomainError("similarity exponents are fixed at m=-1/3, n=1/3, mu=-2")

    @property
    def lam(self) -> float:
        return self.params.lam

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "a": self.a, "m": self.m, "n": self.n, "mu": self.mu}


def make_solution(lam: float, c1: float, c2: float, a: float) -> SimilaritySolution:
    return SimilaritySolution(ermakov.make_params(lam, c1, c2), a)


def _tau(sol: SimilaritySolution, t):
    tau = np.add(t, sol.a)
    if np.any(~(np.asarray(tau) > 0.0)):
        raise DomainError("t + a must be positive")
    return tau


def similarity_variable(sol: SimilaritySolution, x, t):
    return np.multiply(x, np.cbrt(_tau(sol, t)) ** -1)


def eval_u(sol: SimilaritySolution, x, t):
    """u(x, t); accepts any t with t + a > 0."""
    tau = _tau(sol, t)
    s = np.cbrt(tau)
    p, _, _ = ermakov.psi(sol.params, np.divide(x, s))
    return p / s


class UDerivatives(NamedTuple):
    u: np.ndarray
    u_t: np.ndarray
    u_x: np.ndarray
    u_xx: np.ndarray
    u_xxx: np.ndarray


def derivatives(sol: SimilaritySolution, x, t) -> UDerivatives:
    """Analytic u and its derivatives by the chain rule through Psi.

    Psi''' comes from the superposition formula, not from the reduced ODE,
    so the PDE residual built from these is a genuine check.
    """
    tau = _tau(sol, t)
    s = np.cbrt(tau)
    xi = np.divide(x, s)
    p, p1, p2 = ermakov.psi(sol.params, xi)
    p3 = ermakov.psi_third(sol.params, xi)
    u = p / s
    u_t = -(p + xi * p1) / (3.0 * tau * s)
    u_x = p1 / (s * s)
    u_xx = p2 / tau
    u_xxx = p3 / (tau * s)
    return UDerivatives(u, u_t, u_x, u_xx, u_xxx)


def flux(sol: SimilaritySolution, x, t):
    """u_xx - (lambda/3)(t+a)**-2 u**-3; the PDE reads u_t + d/dx(flux) = 0."""
    d = derivatives(sol, x, t)
    tau = np.add(t, sol.a)
    return d.u_xx - sol.lam / (3.0 * tau ** 2 * d.u ** 3)


def flux_x(sol: SimilaritySolution, x, t):
    d = derivatives(sol, x, t)
    tau = np.add(t, sol.a)
    return d.u_xxx + sol.lam * d.u_x / (tau ** 2 * d.u ** 4)


def fd_derivatives(sol: SimilaritySolution, x, t, hx: float, ht: float) -> UDerivatives:
    """Second-order central differences of eval_u (u_xx via the 3-point stencil)."""
    f = lambda dx, dt: eval_u(sol, np.add(x, dx), np.add(t, dt))  # noqa: E731
    u0 = f(0.0, 0.0)
    um1, up1 = f(-hx, 0.0), f(hx, 0.0)
    um2, up2 = f(-2 * hx, 0.0), f(2 * hx, 0.0)
    u_t = (f(0.0, ht) - f(0.0, -ht)) / (2.0 * ht)
    u_x = (up1 - um1) / (2.0 * hx)
    u_xx = (up1 - 2.0 * u0 + um1) / hx ** 2
    u_xxx = (up2 - 2.0 * up1 + 2.0 * um1 - um2) / (2.0 * hx ** 3)
    return UDerivatives(u0, u_t, u_x, u_xx, u_xxx)


def grid_points(sol: SimilaritySolution, grid: GridSpec, gamma: float | None = None):
    """Mesh (X, T) for a grid.

    With ``gamma`` the x-range is read as fractions of the front
    S(t) = gamma (t+a)**(1/3) and must lie in [0, 1]; otherwise x is absolute.
    """
    if grid.is_empty:
        return np.empty((0, 0)), np.empty((0, 0))
    if grid.t0 < 0.0:
        raise DomainError(f"grid starts at t0={grid.t0} < 0")
    X, T = grid.mesh()
    if gamma is None:
        if grid.x0 < 0.0:
            raise DomainError(f"grid starts at x0={grid.x0} < 0")
        return X, T
    if grid.x0 < 0.0 or grid.x1 > 1.0:
        raise DomainError("front-fitted grid needs 0 <= x0 < x1 <= 1")
    return X * gamma * np.cbrt(T + sol.a), T


def pde_residual(
    sol: SimilaritySolution,
    grid: GridSpec,
    method: str = "analytic",
    step: float = 1e-3,
    gamma: float | None = None,
    lam: float | None = None,
) -> ResidualReport:
    """Residual of u_t + u_xxx + lambda (t+a)**-2 u**-4 u_x on a grid.

    ``lam`` overrides the coefficient used in the residual only (the
    solution keeps its own), which is how the sensitivity check perturbs it.
    """
    X, T = grid_points(sol, grid, gamma)
    name = "pde"
    if X.size == 0:
        return ResidualReport.from_values(name, method, [])
    if method == "analytic":
        d = derivatives(sol, X, T)
    elif method == "finite-difference":
        d = fd_derivatives(sol, X, T, step, step)
    else:
        raise ValueError(f"unknown method {method!r}")
    lam_r = sol.lam if lam is None else lam
    nonlinear = lam_r * d.u_x / ((T + sol.a) ** 2 * d.u ** 4)
    res = d.u_t + d.u_xxx + nonlinear
    scale = np.abs(d.u_t) + np.abs(d.u_xxx) + np.abs(nonlinear)
    notes = f"step={step!r}" if method == "finite-difference" else ""
    return ResidualReport.from_values(name, method, res, scale, notes)


def residual_field(sol: SimilaritySolution, X, T, lam: float | None = None):
    """Pointwise analytic PDE residual on arbitrary arrays."""
    d = derivatives(sol, X, T)
    lam_r = sol.lam if lam is None else lam
    return d.u_t + d.u_xxx + lam_r * d.u_x / ((np.add(T, sol.a)) ** 2 * d.u ** 4)


@dataclass(frozen=True)
class ExponentForcing:
    conditions: tuple[str, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]
    determinant: Fraction
    m: Fraction
    n: Fraction
    mu: Fraction

    def closure(self) -> tuple[Fraction, ...]:
        """Left-hand sides minus right-hand sides at the solution; all zero."""
        sol = (self.m, self.n, self.mu)
        return tuple(sum(r * v for r, v in zip(row, sol)) - b for row, b in zip(self.matrix, self.rhs))

    def report(self) -> str:
        lines = ["condition                               | residual at solution"]
        for cond, c in zip(self.conditions, self.closure()):
            lines.append(f"{cond:<40}| {c}")
        lines.append(f"det = {self.determinant}; m = {self.m}, n = {self.n}, mu = {self.mu}")
        return "\n".join(lines)


def _det3(a) -> Fraction:
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def exponent_forcing_check() -> ExponentForcing:
    """Solve for (m, n, mu) in exact rational arithmetic.

    After inserting the ansatz and dividing by (t+a)**(m-1), the u_xxx term
    carries (t+a)**(1-3n) and the nonlinear term (t+a)**(mu-4m-n+1); both
    exponents must vanish. The remaining condition m + n = 0 makes
    m Psi - n xi Psi' the exact derivative -n (xi Psi)', so the ODE
    integrates once.
    """
    F = Fraction
    conditions = ("1 - 3n = 0   (u_xxx time factor)", "mu - 4m - n + 1 = 0   (nonlinear factor)", "m + n = 0   (exact derivative)")
    A = ((F(0), F(-3), F(0)), (F(-4), F(-1), F(1)), (F(1), F(1), F(0)))
    b = (F(-1), F(-1), F(0))
    det = _det3(A)
    solution = []
    for col in range(3):
        Ak = tuple(tuple(b[r] if c == col else A[r][c] for c in range(3)) for r in range(3))
        solution.append(_det3(Ak) / det)
    m, n, mu = solution
    return ExponentForcing(conditions, A, b, det, m, n, mu)
