"""Stefan-type moving boundary problem on 0 < x < S(t) = gamma (t+a)**(1/3).

Boundary conditions, with flux = u_xx - (lambda/3)(t+a)**-2 u**-3:

    (I)   flux(S(t), t) = L_m S**i dS/dt
    (II)  u(S(t), t)    = P_m S**j
    (III) flux(0, t)    = H_0 (t+a)**k

The similarity form removes the time dependence only for i = j = k = -1.
On solutions L_m = P_m = gamma Psi(gamma) and H_0 = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ermakov
from .errors import ConsistencyError, DomainError
from .numerics import find_root
from .reports import ResidualReport
from .similarity import SimilaritySolution, derivatives, eval_u

GAMMA_MIN = 1e-6
IDENTITY_RTOL = 1e-10
IDENTITY_ATOL = 1e-10


@dataclass(frozen=True)
class StefanProblem:
    sol: SimilaritySolution
    gamma: float
    L_m: float
    P_m: float
    H_0: float
    i: float = -1.0
    j: float = -1.0
    k: float = -1.0

    @property
    def a(self) -> float:
        return self.sol.a

    @property
    def S_0(self) -> float:
        return self.gamma * self.sol.a ** (1.0 / 3.0)

    def to_dict(self) -> dict:
        return {
            "solution": self.sol.to_dict(),
            "gamma": self.gamma,
            "L_m": self.L_m,
            "P_m": self.P_m,
            "H_0": self.H_0,
            "i": self.i,
            "j": self.j,
            "k": self.k,
            "S_0": self.S_0,
        }


def front(problem: StefanProblem, t):
    """S(t) = gamma (t+a)**(1/3)."""
    return problem.gamma * np.cbrt(np.add(t, problem.a))


def front_velocity(problem: StefanProblem, t):
    return problem.gamma / (3.0 * np.cbrt(np.add(t, problem.a)) ** 2)


def _check_gamma(gamma: float) -> None:
    if not (math.isfinite(gamma) and gamma >= GAMMA_MIN):
        raise DomainError(f"gamma={gamma!r}: front coefficient must be at least {GAMMA_MIN}")


def boundary_constants(sol: SimilaritySolution, gamma: float) -> tuple[float, float, float]:
    """(L_m, P_m, H_0) read off the similarity profile without cross-checks."""
    lam = sol.lam
    p, _, p2 = ermakov.psi(sol.params, np.array([gamma, 0.0]))
    L_m = 3.0 * (p2[0] - lam / (3.0 * p[0] ** 3))
    P_m = gamma * p[0]
    H_0 = p2[1] - lam / (3.0 * p[1] ** 3)
    return float(L_m), float(P_m), float(H_0)


def forward_solve(sol: SimilaritySolution, gamma: float) -> StefanProblem:
    """Determine L_m, P_m, H_0 for a given front coefficient gamma.

    Raises ConsistencyError if L_m = P_m or H_0 = 0 fail, which would mean
    Psi does not satisfy the reduced ODE.
    """
    _check_gamma(gamma)
    L_m, P_m, H_0 = boundary_constants(sol, gamma)
    if abs(L_m - P_m) > IDENTITY_RTOL * abs(P_m):
        raise ConsistencyError(f"L_m = P_m violated: L_m={L_m!r}, P_m={P_m!r}")
    if abs(H_0) > IDENTITY_ATOL:
        raise ConsistencyError(f"H_0 = 0 violated: H_0={H_0!r}")
    return StefanProblem(sol=sol, gamma=gamma, L_m=L_m, P_m=P_m, H_0=H_0)


def front_value(sol: SimilaritySolution, gamma: float) -> float:
    """gamma Psi(gamma), the P_m produced by a front coefficient."""
    p, _, _ = ermakov.psi(sol.params, np.array([gamma]))
    return float(gamma * p[0])


def inverse_solve(sol: SimilaritySolution, P_m_target: float, bracket: tuple[float, float]) -> float:
    """Front coefficient gamma with gamma Psi(gamma) = P_m_target inside ``bracket``."""
    lo, hi = sorted(bracket)
    _check_gamma(lo)
    return find_root(lambda g: front_value(sol, g) - P_m_target, lo, hi, ftol=1e-12, maxiter=200)


def scan_bracket(sol: SimilaritySolution, P_m_target: float, lo: float = 1e-3, hi: float = 20.0, n: int = 400):
    """First sub-interval of a uniform scan of [lo, hi] where gamma Psi(gamma) crosses the target."""
    gammas = np.linspace(lo, hi, n + 1)
    p, _, _ = ermakov.psi(sol.params, gammas)
    g = gammas * p - P_m_target
    hits = np.nonzero(np.sign(g[:-1]) != np.sign(g[1:]))[0]
    if hits.size == 0:
        return None
    return float(gammas[hits[0]]), float(gammas[hits[0] + 1])


def condition_terms(problem: StefanProblem, t):
    """Left- and right-hand sides of (I), (II), (III) at times t."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise DomainError("boundary conditions are evaluated for t >= 0")
    sol = problem.sol
    tau = t + problem.a
    S = front(problem, t)
    Sdot = front_velocity(problem, t)
    dS = derivatives(sol, S, t)
    d0 = derivatives(sol, np.zeros_like(t), t)
    lam = sol.lam
    lhs1 = dS.u_xx - lam / (3.0 * tau ** 2 * dS.u ** 3)
    rhs1 = problem.L_m * S ** problem.i * Sdot
    lhs2 = eval_u(sol, S, t)
    rhs2 = problem.P_m * S ** problem.j
    lhs3 = d0.u_xx - lam / (3.0 * tau ** 2 * d0.u ** 3)
    rhs3 = problem.H_0 * tau ** problem.k
    return (lhs1, rhs1), (lhs2, rhs2), (lhs3, rhs3)


def boundary_residuals(problem: StefanProblem, times) -> list[ResidualReport]:
    """One report per boundary condition, aggregated over ``times``."""
    times = np.asarray(times, dtype=float)
    names = ("bc-I front flux", "bc-II front value", "bc-III fixed-end flux")
    if times.size == 0:
        return [ResidualReport.from_values(n, "analytic", []) for n in names]
    reports = []
    for name, (lhs, rhs) in zip(names, condition_terms(problem, times)):
        scale = np.abs(lhs) + np.abs(rhs)
        reports.append(ResidualReport.from_values(name, "analytic", lhs - rhs, scale))
    return reports
