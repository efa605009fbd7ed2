"""Airy functions Ai, Bi and their derivatives for real arguments.

Evaluation strategy
-------------------
``|z| <= Z_SWITCH``
    Taylor series re-centred on a table of nodes spaced ``NODE_STEP`` apart.
    The node values come from the Maclaurin series summed once in 60-digit
    decimal arithmetic at import, so the cancellation that ruins the double
    precision Maclaurin sum away from the origin never enters.
``z > Z_SWITCH``
    Exponential asymptotic expansions, truncated at the smallest term.
``z < -Z_SWITCH``
    Modulus/phase (sine/cosine) asymptotic expansions.

All functions accept scalars or numpy arrays and are pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

import numpy as np

from .errors import AiryOverflowError, DomainError

__all__ = ["AiryValues", "airy", "airy_scaled", "Z_SWITCH", "NODE_STEP", "INV_PI"]

# Gamma(1/3), Gamma(2/3) to 60 digits.
GAMMA_ONE_THIRD = "2.67893853470774763365569294097467764412868937795730110095043"
GAMMA_TWO_THIRDS = "1.35411793942640041694528802815451378551932726605679369839402"

Z_SWITCH = 8.0
NODE_STEP = 0.5
N_LOCAL_TERMS = 24
N_ASYMPTOTIC_TERMS = 40
INV_PI = 1.0 / math.pi

_LOG_DBL_MAX = math.log(np.finfo(float).max)
_SQRT_PI = math.sqrt(math.pi)
_QUARTER_PI = 0.25 * math.pi


@dataclass(frozen=True)
class AiryValues:
    """Ai, Ai', Bi, Bi' at one argument (or elementwise over an array)."""

    ai: float | np.ndarray
    aip: float | np.ndarray
    bi: float | np.ndarray
    bip: float | np.ndarray

    @property
    def wronskian(self):
        return self.ai * self.bip - self.aip * self.bi


def _origin_values(prec: int = 60) -> tuple[Decimal, Decimal, Decimal, Decimal]:
    with localcontext() as ctx:
        ctx.prec = prec
        three = Decimal(3)
        g13 = Decimal(GAMMA_ONE_THIRD)
        g23 = Decimal(GAMMA_TWO_THIRDS)
        ai0 = 1 / (three ** (Decimal(2) / three) * g23)
        aip0 = -1 / (three ** (Decimal(1) / three) * g13)
        sqrt3 = three.sqrt()
        return ai0, aip0, sqrt3 * ai0, -sqrt3 * aip0


def _maclaurin_decimal(w0: Decimal, w1: Decimal, z: Decimal, prec: int = 60) -> tuple[Decimal, Decimal]:
    """Sum the Maclaurin series of the solution of w'' = z w with w(0)=w0, w'(0)=w1."""
    with localcontext() as ctx:
        ctx.prec = prec
        coeffs = [w0, w1, Decimal(0)]
        value = w0 + w1 * z
        deriv = w1
        zpow = z  # z**(n-1) for the derivative term at index n
        tiny = Decimal(10) ** (-prec + 5)
        n = 2
        small_run = 0
        while True:
            if n >= 3:
                coeffs.append(coeffs[n - 3] / (n * (n - 1)))
            c = coeffs[n]
            dterm = n * c * zpow
            zpow *= z
            term = c * zpow
            value += term
            deriv += dterm
            if n > 10 and abs(term) <= tiny * (1 + abs(value)) and abs(dterm) <= tiny * (1 + abs(deriv)):
                small_run += 1
                if small_run >= 3:
                    break
            else:
                small_run = 0
            n += 1
        return value, deriv


def _build_node_table() -> tuple[np.ndarray, np.ndarray]:
    n_half = int(round(Z_SWITCH / NODE_STEP))
    nodes = np.arange(-n_half, n_half + 1) * NODE_STEP
    ai0, aip0, bi0, bip0 = _origin_values()
    table = np.empty((len(nodes), 4))
    for idx, z0 in enumerate(nodes):
        zd = Decimal(repr(float(z0)))
        ai, aip = _maclaurin_decimal(ai0, aip0, zd)
        bi, bip = _maclaurin_decimal(bi0, bip0, zd)
        table[idx] = [float(ai), float(aip), float(bi), float(bip)]
    return nodes, table


_NODES, _NODE_TABLE = _build_node_table()


def _compensated_add(total, comp, term):
    # Neumaier variant of Kahan summation, elementwise.
    t = total + term
    big = np.abs(total) >= np.abs(term)
    comp = comp + np.where(big, (total - t) + term, (term - t) + total)
    return t, comp


def _airy_taylor(z: np.ndarray) -> tuple[np.ndarray, ...]:
    """Re-centred Taylor evaluation; valid for |z| <= Z_SWITCH."""
    k = np.rint(z / NODE_STEP).astype(int)
    idx = k + (len(_NODES) - 1) // 2
    z0 = k * NODE_STEP
    h = z - z0
    base = _NODE_TABLE[idx]  # (npts, 4)
    out = []
    for col in (0, 2):
        b_prev2 = np.zeros_like(z)  # b_{n-1}
        b_prev = base[:, col]  # b_n, n = 0
        b_cur = base[:, col + 1]  # b_{n+1}
        val, val_c = b_prev.copy(), np.zeros_like(z)
        der, der_c = b_cur.copy(), np.zeros_like(z)
        hpow = np.ones_like(z)  # h**n
        # shift (b_{n-1}, b_n, b_{n+1}) -> (b_n, b_{n+1}, b_{n+2})
        for n in range(0, N_LOCAL_TERMS):
            b_next = (z0 * b_prev + b_prev2) / ((n + 2) * (n + 1))
            der, der_c = _compensated_add(der, der_c, (n + 2) * b_next * hpow * h)
            hpow = hpow * h
            val, val_c = _compensated_add(val, val_c, b_cur * hpow)
            b_prev2, b_prev, b_cur = b_prev, b_cur, b_next
        out.append(val + val_c)
        out.append(der + der_c)
    return tuple(out)


def _asymptotic_coefficients(n: int) -> tuple[np.ndarray, np.ndarray]:
    u = np.empty(n)
    v = np.empty(n)
    u[0] = v[0] = 1.0
    for k in range(1, n):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        v[k] = -u[k] * (6 * k + 1) / (6 * k - 1)
    return u, v


_U_COEF, _V_COEF = _asymptotic_coefficients(N_ASYMPTOTIC_TERMS)


def _truncated_terms(coef: np.ndarray, zeta: np.ndarray, sign: float) -> np.ndarray:
    """Terms sign**k coef_k / zeta**k, zeroed from the smallest-magnitude term on."""
    k = np.arange(len(coef))[:, None]
    terms = (sign ** k) * coef[:, None] / zeta[None, :] ** k
    mag = np.abs(terms)
    rising = np.zeros_like(mag, dtype=bool)
    rising[1:] = mag[1:] > mag[:-1]
    keep = ~np.logical_or.accumulate(rising, axis=0)
    return np.where(keep, terms, 0.0)


def _airy_asymptotic_positive(z: np.ndarray) -> tuple[np.ndarray, ...]:
    zeta = (2.0 / 3.0) * z ** 1.5
    q = z ** 0.25
    su_alt = _truncated_terms(_U_COEF, zeta, -1.0).sum(axis=0)
    sv_alt = _truncated_terms(_V_COEF, zeta, -1.0).sum(axis=0)
    su = _truncated_terms(_U_COEF, zeta, 1.0).sum(axis=0)
    sv = _truncated_terms(_V_COEF, zeta, 1.0).sum(axis=0)
    decay = np.exp(-zeta) / (2.0 * _SQRT_PI)
    grow = np.exp(zeta) / _SQRT_PI
    return decay / q * su_alt, -decay * q * sv_alt, grow / q * su, grow * q * sv


def _airy_asymptotic_negative(z: np.ndarray) -> tuple[np.ndarray, ...]:
    x = -z
    zeta = (2.0 / 3.0) * x ** 1.5
    q = x ** 0.25
    tu = _truncated_terms(_U_COEF, zeta, 1.0)
    tv = _truncated_terms(_V_COEF, zeta, 1.0)
    alt_even = np.where(np.arange(0, N_ASYMPTOTIC_TERMS, 2) % 4 == 0, 1.0, -1.0)[:, None]
    # sum_k (-1)^k c_{2k} zeta^{-2k} and sum_k (-1)^k c_{2k+1} zeta^{-2k-1}
    pu = (alt_even * tu[0::2]).sum(axis=0)
    qu = (alt_even * tu[1::2]).sum(axis=0)
    pv = (alt_even * tv[0::2]).sum(axis=0)
    qv = (alt_even * tv[1::2]).sum(axis=0)
    phase = zeta - _QUARTER_PI
    c, s = np.cos(phase), np.sin(phase)
    amp = 1.0 / (_SQRT_PI * q)
    damp = q / _SQRT_PI
    ai = amp * (c * pu + s * qu)
    aip = damp * (s * pv - c * qv)
    bi = amp * (-s * pu + c * qu)
    bip = damp * (c * pv + s * qv)
    return ai, aip, bi, bip


def _check_overflow(z: np.ndarray) -> None:
    pos = z[z > Z_SWITCH]
    if pos.size == 0:
        return
    zmax = float(pos.max())
    zeta = (2.0 / 3.0) * zmax ** 1.5
    log_bip = zeta + 0.25 * math.log(zmax) - math.log(_SQRT_PI)
    log_bi = zeta - 0.25 * math.log(zmax) - math.log(_SQRT_PI)
    if log_bi > _LOG_DBL_MAX:
        raise AiryOverflowError(f"Bi overflows double precision at z={zmax!r}")
    if log_bip > _LOG_DBL_MAX:
        raise AiryOverflowError(f"Bi' overflows double precision at z={zmax!r}")


def airy(z) -> AiryValues:
    """Return Ai(z), Ai'(z), Bi(z), Bi'(z).

    Scalars in give floats out; arrays are evaluated elementwise.

    Raises
    ------
    DomainError
        If any argument is NaN or infinite.
    AiryOverflowError
        If Bi or Bi' exceeds the double range (z above roughly 104).
    """
    scalar = np.ndim(z) == 0
    zarr = np.atleast_1d(np.asarray(z, dtype=float))
    if not np.all(np.isfinite(zarr)):
        raise DomainError("airy: argument must be finite")
    _check_overflow(zarr)

    flat = zarr.ravel()
    out = np.empty((4, flat.size))
    inner = np.abs(flat) <= Z_SWITCH
    right = flat > Z_SWITCH
    left = flat < -Z_SWITCH
    if inner.any():
        out[:, inner] = _airy_taylor(flat[inner])
    if right.any():
        out[:, right] = _airy_asymptotic_positive(flat[right])
    if left.any():
        out[:, left] = _airy_asymptotic_negative(flat[left])

    out = out.reshape((4,) + zarr.shape)
    if scalar:
        return AiryValues(*(float(v[0]) for v in out))
    return AiryValues(*out)


def airy_scaled(z, sigma: float) -> AiryValues:
    """Ai(sigma z), Bi(sigma z) and their derivatives with respect to z.

    The derivative fields carry the chain-rule factor, so the returned
    Wronskian is sigma/pi rather than 1/pi.
    """
    base = airy(np.multiply(sigma, z))
    return AiryValues(base.ai, sigma * base.aip, base.bi, sigma * base.bip)
