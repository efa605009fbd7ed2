"""Ermakov superposition solution of the integrated similarity ODE.

With xi = epsilon * z and epsilon**3 = -3/2, the reduced ODE

    Psi'' - (xi/3) Psi - (lambda/3) Psi**-3 = 0          (d/dxi)

becomes the Ermakov equation

    Psi_zz + (z/2) Psi = kstar Psi**-3,   kstar = epsilon**2 lambda / 3.

Its general solution is Psi = sqrt(c1 W1**2 + 2 c2 W1 W2 + c3 W2**2) where
W1(z) = Ai(sigma z), W2(z) = Bi(sigma z), sigma = -2**(-1/3) solve
Omega_zz + (z/2) Omega = 0, subject to c1 c3 - c2**2 = kstar / W**2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError, IntegrationError, UnsupportedRegimeError
from .specialfn import airy_scaled

EPSILON = -(1.5 ** (1.0 / 3.0))
SIGMA = -(2.0 ** (-1.0 / 3.0))
BASIS_WRONSKIAN = SIGMA / math.pi
# Argument scale as printed in the source formula, -2**(1/3)/epsilon; kept for reports only.
PRINTED_XI_SCALE = -(2.0 ** (1.0 / 3.0)) / EPSILON
IMPLEMENTED_XI_SCALE = SIGMA / EPSILON


@dataclass(frozen=True)
class ErmakovParams:
    """Constants of one superposition solution.

    ``zeta`` is the integration constant of the reduced ODE; the Airy
    representation needs it to be zero.
    """

    lam: float
    c1: float
    c2: float
    c3: float
    kstar: float
    epsilon: float = EPSILON
    sigma: float = SIGMA
    wronskian: float = BASIS_WRONSKIAN
    zeta: float = 0.0

    @property
    def constraint_defect(self) -> float:
        """Relative defect of c1 c3 - c2**2 = kstar / W**2."""
        target = self.kstar / self.wronskian ** 2
        lhs = self.c1 * self.c3 - self.c2 ** 2
        return abs(lhs - target) / max(abs(target), np.finfo(float).tiny)

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "c1": self.c1,
            "c2": self.c2,
            "c3": self.c3,
            "kstar": self.kstar,
            "epsilon": self.epsilon,
            "sigma": self.sigma,
            "wronskian": self.wronskian,
            "zeta": self.zeta,
        }


def make_params(lam: float, c1: float, c2: float) -> ErmakovParams:
    """Build consistent parameters, solving the Wronskian constraint for c3."""
    if not (math.isfinite(lam) and math.isfinite(c1) and math.isfinite(c2)):
        raise DomainError("make_params: lambda, c1, c2 must be finite")
    if lam <= 0.0:
        raise UnsupportedRegimeError(
            f"lambda={lam!r}: only lambda > 0 (kstar > 0, positive-definite Psi**2) is supported"
        )
    if c1 <= 0.0:
        raise DomainError(f"c1={c1!r}: c1 must be positive")
    kstar = EPSILON ** 2 * lam / 3.0
    c3 = (c2 ** 2 + kstar / BASIS_WRONSKIAN ** 2) / c1
    return ErmakovParams(lam=lam, c1=c1, c2=c2, c3=c3, kstar=kstar)


def omega_basis(z, sigma: float = SIGMA):
    """Return (Omega1, Omega2, dOmega1/dz, dOmega2/dz) at z."""
    v = airy_scaled(z, sigma)
    return v.ai, v.bi, v.aip, v.bip


def _quadratic_form(params: ErmakovParams, z):
    """Q = Psi**2 and its first three z-derivatives.

    Q''' = -Q - 2 z Q' follows from Omega'' = -(z/2) Omega alone, so no
    use of the Ermakov equation is made here.
    """
    w1, w2, d1, d2 = omega_basis(z, params.sigma)
    c1, c2, c3 = params.c1, params.c2, params.c3
    q = c1 * w1 * w1 + 2.0 * c2 * w1 * w2 + c3 * w2 * w2
    q_z = 2.0 * (c1 * w1 * d1 + c2 * (d1 * w2 + w1 * d2) + c3 * w2 * d2)
    grad = c1 * d1 * d1 + 2.0 * c2 * d1 * d2 + c3 * d2 * d2
    q_zz = 2.0 * grad - z * q
    q_zzz = -q - 2.0 * z * q_z
    return q, q_z, q_zz, q_zzz


def psi_z(params: ErmakovParams, z):
    """Psi and its first three derivatives with respect to z."""
    q, q_z, q_zz, q_zzz = _quadratic_form(params, z)
    if np.any(~(np.asarray(q) > 0.0)):
        raise ConsistencyError("quadratic form c1 W1^2 + 2 c2 W1 W2 + c3 W2^2 is not positive")
    p = np.sqrt(q)
    p1 = q_z / (2.0 * p)
    p2 = (q_zz - 2.0 * p1 * p1) / (2.0 * p)
    p3 = (q_zzz - 6.0 * p1 * p2) / (2.0 * p)
    return p, p1, p2, p3


def psi(params: ErmakovParams, xi):
    """Return (Psi, dPsi/dxi, d2Psi/dxi2) at xi."""
    p, p1, p2, _ = psi_z(params, np.divide(xi, params.epsilon))
    e = params.epsilon
    return p, p1 / e, p2 / (e * e)


def psi_third(params: ErmakovParams, xi):
    """d3Psi/dxi3, from the superposition formula (independent of the ODE)."""
    _, _, _, p3 = psi_z(params, np.divide(xi, params.epsilon))
    return p3 / params.epsilon ** 3


def ermakov_residual(params: ErmakovParams, z):
    """Psi_zz + (z/2) Psi - kstar Psi**-3 using the analytic derivatives."""
    p, _, p2, _ = psi_z(params, z)
    return p2 + 0.5 * z * p - params.kstar / p ** 3


def reduced_residual(params: ErmakovParams, xi):
    """Psi'' - (xi/3) Psi - (lambda/3) Psi**-3 - zeta in the xi variable."""
    p, _, p2 = psi(params, xi)
    return p2 - xi * p / 3.0 - params.lam / (3.0 * p ** 3) - params.zeta


def _rk4_path(params: ErmakovParams, z0: float, z1: float, n_steps: int) -> np.ndarray:
    """Classical RK4 for Psi_zz = -(z/2) Psi + kstar Psi**-3, started from psi at z0."""
    p0, p1, _, _ = psi_z(params, z0)
    y, v = float(p0), float(p1)
    k = params.kstar
    h = (z1 - z0) / n_steps
    out = np.empty(n_steps + 1)
    out[0] = y

    def acc(z, y):
        return -0.5 * z * y + k / (y * y * y)

    for i in range(n_steps):
        z = z0 + i * h
        k1y, k1v = v, acc(z, y)
        k2y, k2v = v + 0.5 * h * k1v, acc(z + 0.5 * h, y + 0.5 * h * k1y)
        k3y, k3v = v + 0.5 * h * k2v, acc(z + 0.5 * h, y + 0.5 * h * k2y)
        k4y, k4v = v + h * k3v, acc(z + h, y + h * k3y)
        y += h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
        v += h * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        if not (math.isfinite(y) and math.isfinite(v)):
            raise IntegrationError(f"non-finite state at z={z + h!r} (xi={(z + h) * params.epsilon!r})")
        out[i + 1] = y
    return out


def integrate_oracle(
    params: ErmakovParams, xi0: float, xi1: float, n_steps: int, extrapolate: bool = True
) -> float:
    """Max |Psi_numeric - psi| over [xi0, xi1] from direct integration of the Ermakov ODE.

    The ODE is integrated in z with fixed-step RK4; with ``extrapolate`` the
    n and 2n step solutions are Richardson-combined at the coarse nodes.
    """
    if n_steps < 100:
        raise DomainError(f"n_steps={n_steps}: at least 100 steps are required")
    if xi0 == xi1:
        return 0.0
    z0, z1 = xi0 / params.epsilon, xi1 / params.epsilon
    coarse = _rk4_path(params, z0, z1, n_steps)
    if extrapolate:
        fine = _rk4_path(params, z0, z1, 2 * n_steps)[::2]
        approx = (16.0 * fine - coarse) / 15.0
    else:
        approx = coarse
    z = np.linspace(z0, z1, n_steps + 1)
    exact = psi_z(params, z)[0]
    return float(np.max(np.abs(approx - exact)))
