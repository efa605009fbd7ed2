import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ermakov_stefan.ermakov import (
    BASIS_WRONSKIAN,
    EPSILON,
    SIGMA,
    ErmakovParams,
    ermakov_residual,
    integrate_oracle,
    make_params,
    omega_basis,
    psi,
    psi_third,
    psi_z,
    reduced_residual,
)
from ermakov_stefan.errors import DomainError, UnsupportedRegimeError
from ermakov_stefan.specialfn import airy

lams = st.floats(0.1, 5.0)
c1s = st.floats(0.2, 5.0)
c2s = st.floats(-2.0, 2.0)


def test_constants():
    assert EPSILON ** 3 == pytest.approx(-1.5, rel=1e-15)
    assert SIGMA ** 3 == pytest.approx(-0.5, rel=1e-15)
    assert BASIS_WRONSKIAN == pytest.approx(-(2.0 ** (-1.0 / 3.0)) / math.pi, rel=1e-15)


def test_make_params_c2_zero():
    p = make_params(2.0, 1.0, 0.0)
    assert p.c3 == pytest.approx(p.kstar / p.wronskian ** 2, rel=1e-15)
    assert p.kstar == pytest.approx(EPSILON ** 2 * 2.0 / 3.0, rel=1e-15)


def test_make_params_unit_kstar():
    p = make_params(3.0 / EPSILON ** 2, 1.0, 0.0)
    assert p.kstar == pytest.approx(1.0, rel=1e-15)
    assert p.c3 == pytest.approx(math.pi ** 2 * 2.0 ** (2.0 / 3.0), rel=1e-14)
    z = np.linspace(-3, 3, 41)
    assert np.max(np.abs(ermakov_residual(p, z))) < 1e-12


@pytest.mark.parametrize("lam", [0.0, -1.0])
def test_make_params_rejects_nonpositive_lambda(lam):
    with pytest.raises(UnsupportedRegimeError):
        make_params(lam, 1.0, 0.0)


def test_make_params_rejects_nonpositive_c1():
    with pytest.raises(DomainError):
        make_params(1.0, 0.0, 0.0)


@settings(max_examples=100, deadline=None)
@given(lams, c1s, c2s)
def test_constraint_closure(lam, c1, c2):
    assert make_params(lam, c1, c2).constraint_defect < 1e-12


def test_omega_basis_at_origin():
    w1, w2, d1, d2 = omega_basis(0.0)
    a = airy(0.0)
    assert (w1, w2) == (a.ai, a.bi)
    assert d1 == pytest.approx(SIGMA * a.aip, rel=1e-15)
    assert d2 == pytest.approx(SIGMA * a.bip, rel=1e-15)


def test_omega_second_derivative_solves_linear_equation():
    z, h = 1.3, 1e-4
    f = lambda s: omega_basis(s)[0]  # noqa: E731
    second = (f(z + h) - 2 * f(z) + f(z - h)) / h ** 2
    assert second == pytest.approx(-(z / 2) * f(z), abs=1e-6)


@pytest.mark.parametrize("z", [-2.0, 0.0, 3.0])
def test_omega_wronskian_constant(z):
    w1, w2, d1, d2 = omega_basis(z)
    assert w1 * d2 - d1 * w2 == pytest.approx(SIGMA / math.pi, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(lams, c1s, c2s)
def test_superposition_residuals(lam, c1, c2):
    p = make_params(lam, c1, c2)
    z = np.linspace(-3.0, 3.0, 101)
    psi_val = psi_z(p, z)[0]
    assert np.all(psi_val > 0)
    assert np.all(np.abs(ermakov_residual(p, z)) < 1e-9 * (1 + np.abs(p.kstar / psi_val ** 3)))
    assert np.max(np.abs(reduced_residual(p, z * p.epsilon))) < 1e-9


def test_reduced_residual_random_points():
    rng = np.random.default_rng(3)
    p = make_params(1.7, 0.8, -0.4)
    z = rng.uniform(-3, 3, 100)
    assert np.max(np.abs(ermakov_residual(p, z))) < 1e-9
    assert np.max(np.abs(reduced_residual(p, p.epsilon * z))) < 1e-9


def test_analytic_derivatives_match_central_differences():
    p = make_params(1.0, 1.0, 0.25)
    xi = np.linspace(-2.5, 2.5, 51)
    h = 1e-5
    val, d1, d2 = psi(p, xi)
    fd1 = (psi(p, xi + h)[0] - psi(p, xi - h)[0]) / (2 * h)
    fd2 = (psi(p, xi + h)[1] - psi(p, xi - h)[1]) / (2 * h)
    fd3 = (psi(p, xi + h)[2] - psi(p, xi - h)[2]) / (2 * h)
    assert np.max(np.abs(d1 - fd1)) < 1e-6
    assert np.max(np.abs(d2 - fd2)) < 1e-6
    assert np.max(np.abs(psi_third(p, xi) - fd3)) < 1e-6


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(0.1, 5.0), st.floats(-3.0, 3.0))
def test_third_derivative_agrees_with_differentiated_ode(lam, c1, c2):
    # psi_third comes from the superposition alone; the ODE gives it independently
    p = make_params(lam, c1, c2)
    xi = np.linspace(-3.0, 3.0, 61)
    val, d1, _ = psi(p, xi)
    from_ode = (val + xi * d1) / 3.0 - lam * d1 / val ** 4
    assert np.allclose(psi_third(p, xi), from_ode, rtol=1e-10, atol=1e-10)


def test_degenerate_kstar_zero_is_linear_solution():
    # c2**2 = c1 c3 and kstar = 0: Psi = |W1 + 2 W2|
    p = ErmakovParams(lam=0.0, c1=1.0, c2=2.0, c3=4.0, kstar=0.0)
    z = np.linspace(-1.0, 1.0, 21)
    w1, w2, _, _ = omega_basis(z)
    val = psi_z(p, z)[0]
    assert np.allclose(val, np.abs(w1 + 2 * w2), rtol=1e-14)
    assert np.max(np.abs(ermakov_residual(p, z))) < 1e-12


def test_oracle_fourth_order_and_accuracy():
    p = make_params(1.0, 1.0, 0.3)
    e1 = integrate_oracle(p, -3.0, 3.0, 100, extrapolate=False)
    e2 = integrate_oracle(p, -3.0, 3.0, 200, extrapolate=False)
    assert math.log2(e1 / e2) > 3.8
    assert integrate_oracle(p, 0.0, 1.0, 10_000) < 1e-8
    assert integrate_oracle(p, -3.0, 3.0, 10_000) < 1e-8


def test_oracle_zero_length_and_precondition():
    p = make_params(1.0, 1.0, 0.3)
    assert integrate_oracle(p, 0.5, 0.5, 100) == 0.0
    with pytest.raises(DomainError):
        integrate_oracle(p, 0.0, 1.0, 50)
