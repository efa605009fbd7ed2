"""Involutory temporal modulation T*: dt* = rho(t)**-2 dt, x* = x, u* = u / rho(t).

Applying T* again with rho*(t*) = 1 / rho(t(t*)) returns the original
variables. Pushing an exact solution u of

    u_t + u_xxx + lambda (t+a)**-2 u**-4 u_x = 0

forward gives a solution of the modulated equation

    u*_t* + rho**2 u*_xxx + lambda (t+a)**-2 rho**-2 u***-4 u*_x + rho rho' u* = 0,

with rho, rho' and t+a evaluated at t = t(t*).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .numerics import composite_gauss_legendre, invert_monotone
from .reports import GridSpec, ResidualReport
from .similarity import SimilaritySolution, eval_u

PANEL_T = 0.5
N_QUAD = 16


@dataclass(frozen=True)
class Modulation:
    """A positive modulation rho(t) on the working interval [0, t_max].

    Use the ``constant``, ``power`` and ``tabulated`` constructors;
    ``inverse()`` gives rho* for the second application of T*.
    """

    family: str
    t_max: float
    value: float = 1.0
    exponent: float = 0.0
    a: float = 1.0
    t_table: tuple = ()
    rho_table: tuple = ()
    base: Optional["Modulation"] = None

    @classmethod
    def constant(cls, value: float, t_max: float = 10.0) -> "Modulation":
        if not value > 0.0:
            raise DomainError("constant modulation must be positive")
        return cls("constant", float(t_max), value=float(value))

    @classmethod
    def power(cls, exponent: float, a: float = 1.0, t_max: float = 10.0) -> "Modulation":
        if not a > 0.0:
            raise DomainError("power modulation (t+a)**p needs a > 0")
        return cls("power", float(t_max), exponent=float(exponent), a=float(a))

    @classmethod
    def tabulated(cls, t, rho) -> "Modulation":
        t = tuple(float(v) for v in t)
        rho = tuple(float(v) for v in rho)
        if len(t) < 3 or len(t) != len(rho):
            raise DomainError("tabulated modulation needs matching tables of at least 3 points")
        if t[0] != 0.0 or any(b <= a for a, b in zip(t, t[1:])):
            raise DomainError("tabulated times must start at 0 and increase")
        if min(rho) <= 0.0:
            raise DomainError("tabulated rho must be positive")
        return cls("tabulated", t[-1], t_table=t, rho_table=rho)

    @classmethod
    def from_config(cls, cfg: dict, t_max: float = 10.0) -> "Modulation":
        family = cfg.get("family", "constant")
        if family == "constant":
            return cls.constant(cfg.get("value", 1.0), cfg.get("t_max", t_max))
        if family == "power":
            return cls.power(cfg["exponent"], cfg.get("a", 1.0), cfg.get("t_max", t_max))
        if family == "tabulated":
            return cls.tabulated(cfg["t"], cfg["rho"])
        raise DomainError(f"unknown modulation family {family!r}")

    # rho and its derivative -------------------------------------------------

    def rho(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == "constant":
            return np.full_like(t, self.value)
        if self.family == "power":
            return (t + self.a) ** self.exponent
        if self.family == "tabulated":
            return np.interp(t, self.t_table, self.rho_table)
        return 1.0 / self.base.rho(self.base.t_of_t_star(t))

    def drho(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == "constant":
            return np.zeros_like(t)
        if self.family == "power":
            return self.exponent * (t + self.a) ** (self.exponent - 1.0)
        if self.family == "tabulated":
            slope = np.gradient(np.asarray(self.rho_table), np.asarray(self.t_table))
            return np.interp(t, self.t_table, slope)
        # d/ds [1/rho(t(s))] = -rho'(t) / rho(t)**2 * dt/ds = -rho'(t)
        return -self.base.drho(self.base.t_of_t_star(t))

    # time maps --------------------------------------------------------------

    @cached_property
    def _knots(self) -> tuple[np.ndarray, np.ndarray]:
        """Panel knots on [0, t_max] and the cumulative t* at each knot."""
        n = max(1, math.ceil(self.t_max / PANEL_T))
        knots = np.union1d(np.linspace(0.0, self.t_max, n + 1), self._breaks())
        pieces = composite_gauss_legendre(lambda s: self.rho(s) ** -2.0, knots[:-1], knots[1:], N_QUAD)
        return knots, np.concatenate([[0.0], np.cumsum(pieces)])

    def _breaks(self) -> np.ndarray:
        """Points where rho is not smooth; panels must not straddle them."""
        if self.family == "tabulated":
            return np.asarray(self.t_table)
        if self.family == "inverse":
            # images of the base panel knots keep each panel smooth in t
            base_knots = self.base._knots[0]
            return np.clip(self.base.t_star(base_knots), 0.0, self.t_max)
        return np.array([])

    def t_star(self, t):
        """t*(t), the integral of rho**-2 from 0 to t."""
        t = np.asarray(t, dtype=float)
        if self.family == "constant":
            return t / self.value ** 2
        knots, cum = self._knots
        k = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, len(knots) - 2)
        partial = composite_gauss_legendre(lambda s: self.rho(s) ** -2.0, knots[k], t, N_QUAD)
        return cum[k] + partial

    def t_star_closed_form(self, t):
        """Closed-form t*(t) for the constant and power families."""
        t = np.asarray(t, dtype=float)
        if self.family == "constant":
            return t / self.value ** 2
        if self.family == "power":
            q = 1.0 - 2.0 * self.exponent
            if q == 0.0:
                return np.log((t + self.a) / self.a)
            return ((t + self.a) ** q - self.a ** q) / q
        raise ValueError(f"no closed form for family {self.family!r}")

    @property
    def t_star_max(self) -> float:
        return float(self.t_star(self.t_max))

    def t_of_t_star(self, s):
        """Inverse of t_star on [0, t_max]."""
        s = np.asarray(s, dtype=float)
        if self.family == "constant":
            return s * self.value ** 2
        return invert_monotone(
            self.t_star, lambda t: self.rho(t) ** -2.0, s, 0.0, self.t_max, xtol=1e-14
        )

    def inverse(self) -> "Modulation":
        """rho*(t*) = 1 / rho(t(t*)), working interval [0, t*_max]."""
        if self.family == "constant":
            return Modulation.constant(1.0 / self.value, self.t_max / self.value ** 2)
        return Modulation("inverse", self.t_star_max, base=self)


def _check_star_range(mod: Modulation, t_star) -> None:
    t_star = np.asarray(t_star, dtype=float)
    top = mod.t_star_max * (1.0 + 1e-12)
    if np.any(t_star < 0.0) or np.any(t_star > top):
        raise DomainError(f"t* must lie in [0, {mod.t_star_max!r}]")


def push_forward(u: Callable, mod: Modulation, x, t_star):
    """u*(x, t*) = u(x, t) / rho(t) with t = t(t*)."""
    _check_star_range(mod, t_star)
    t = mod.t_of_t_star(t_star)
    return u(x, t) / mod.rho(t)


def apply(mod: Modulation, t, u):
    """One application of T* to (t, u) pairs: returns (t*, u*)."""
    return mod.t_star(t), np.asarray(u) / mod.rho(t)


def involution_check(mod: Modulation, grid: GridSpec, u: Callable | None = None) -> float:
    """Max discrepancy in (t, u) after applying T* with rho and then with rho*.

    ``u`` defaults to a smooth positive test field.
    """
    if grid.is_empty:
        return 0.0
    if grid.t0 < 0.0 or grid.t1 > mod.t_max:
        raise DomainError(f"grid times must lie in [0, {mod.t_max!r}]")
    if u is None:
        u = lambda x, t: (1.0 + np.asarray(x) ** 2) * np.exp(-0.1 * np.asarray(t))  # noqa: E731
    X, T = grid.mesh()
    U = u(X, T)
    T1, U1 = apply(mod, T, U)
    T2, U2 = apply(mod.inverse(), T1, U1)
    return float(max(np.max(np.abs(T2 - T)), np.max(np.abs(U2 - U))))


def modulated_residual(
    sol: SimilaritySolution,
    mod: Modulation,
    grid: GridSpec,
    step: float = 1e-3,
    drop_drift: bool = False,
) -> ResidualReport:
    """Finite-difference residual of the modulated equation on an (x, t*) grid.

    ``drop_drift`` omits the rho rho' u* term (ablation check).
    """
    name = "modulated pde" + (" (no rho rho' term)" if drop_drift else "")
    if grid.is_empty:
        return ResidualReport.from_values(name, "finite-difference", [])
    if grid.x0 < 0.0:
        raise DomainError("grid starts at x0 < 0")
    if grid.t0 - step < 0.0 or grid.t1 + step > mod.t_star_max:
        raise DomainError(f"grid t* range +/- step must lie in [0, {mod.t_star_max!r}]")
    X, TS = grid.mesh()

    def ustar(dx, dts):
        t = mod.t_of_t_star(TS + dts)
        return eval_u(sol, X + dx, t) / mod.rho(t)

    h = step
    u0 = ustar(0.0, 0.0)
    up1, um1 = ustar(h, 0.0), ustar(-h, 0.0)
    up2, um2 = ustar(2 * h, 0.0), ustar(-2 * h, 0.0)
    du_t = (ustar(0.0, h) - ustar(0.0, -h)) / (2.0 * h)
    du_x = (up1 - um1) / (2.0 * h)
    du_xxx = (up2 - 2.0 * up1 + 2.0 * um1 - um2) / (2.0 * h ** 3)

    T = mod.t_of_t_star(TS)
    rho, drho = mod.rho(T), mod.drho(T)
    tau = T + sol.a
    terms = [du_t, rho ** 2 * du_xxx, sol.lam * du_x / (tau ** 2 * rho ** 2 * u0 ** 4)]
    if not drop_drift:
        terms.append(rho * drho * u0)
    res = sum(terms)
    scale = sum(np.abs(term) for term in terms)
    return ResidualReport.from_values(name, "finite-difference", res, scale, f"step={step!r}")
