import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ermakov_stefan.ermakov import psi
from ermakov_stefan.errors import DomainError
from ermakov_stefan.reports import GridSpec
from ermakov_stefan.similarity import (
    SimilaritySolution,
    derivatives,
    eval_u,
    exponent_forcing_check,
    fd_derivatives,
    flux_x,
    make_solution,
    pde_residual,
)

GRID = GridSpec(0.0, 1.0, 0.0, 10.0, 50, 50)


def test_offsets_collapse_at_origin(sol):
    assert eval_u(sol, 0.0, 0.0) == pytest.approx(psi(sol.params, 0.0)[0], rel=1e-15)


def test_direct_ansatz_arithmetic(sol):
    expected = 3.0 ** (-1.0 / 3.0) * psi(sol.params, 0.5 * 3.0 ** (-1.0 / 3.0))[0]
    assert eval_u(sol, 0.5, 2.0) == pytest.approx(expected, rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 2.0), st.floats(0.0, 10.0))
def test_scaling_self_similarity(x, t):
    sol = make_solution(1.0, 1.0, 0.25, 1.0)
    k = 2.0
    lhs = eval_u(sol, k ** (1 / 3) * x, k * (t + sol.a) - sol.a) * k ** (1 / 3)
    assert lhs == pytest.approx(eval_u(sol, x, t), rel=1e-12)


def test_fixed_exponents_and_offset():
    s = make_solution(1.0, 1.0, 0.0, 2.0)
    assert (s.m, s.n, s.mu) == (-1 / 3, 1 / 3, -2.0)
    with pytest.raises(DomainError):
        make_solution(1.0, 1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        SimilaritySolution(s.params, 1.0, mu=-1.0)


def test_analytic_residual(sol):
    r = pde_residual(sol, GRID, gamma=1.0)
    assert r.n_points == 2500
    assert r.max_abs < 1e-9
    assert r.max_abs >= r.mean_abs >= 0


def test_finite_difference_residual_and_order(sol):
    assert pde_residual(sol, GRID, "finite-difference", 1e-3, gamma=1.0).max_abs < 1e-5
    errs = [pde_residual(sol, GRID, "finite-difference", h, gamma=1.0).max_abs for h in (4e-2, 2e-2, 1e-2)]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert all(1.8 < q < 2.2 for q in orders)


def test_lambda_perturbation_is_detected(sol):
    r = pde_residual(sol, GRID, gamma=1.0, lam=sol.lam * (1 + 1e-3))
    assert r.max_abs > 1e-6


def test_empty_grid(sol):
    r = pde_residual(sol, GridSpec(0.0, 1.0, 0.0, 1.0, 0, 0))
    assert (r.n_points, r.max_abs, r.mean_abs, r.notes) == (0, 0.0, 0.0, "empty")


def test_grid_outside_domain(sol):
    with pytest.raises(DomainError):
        pde_residual(sol, GridSpec(-1.0, 1.0, 0.0, 1.0, 5, 5))
    with pytest.raises(DomainError):
        pde_residual(sol, GridSpec(0.0, 1.5, 0.0, 1.0, 5, 5), gamma=1.0)
    with pytest.raises(DomainError):
        GridSpec(0.0, 1.0, 0.0, 1.0, 1, 5)


def test_conservation_form(sol):
    X, T = GridSpec(0.0, 1.2, 0.0, 10.0, 25, 25).mesh()
    d = derivatives(sol, X, T)
    assert np.max(np.abs(flux_x(sol, X, T) + d.u_t)) < 1e-9


def test_fd_derivatives_converge_at_second_order(sol):
    X, T = GridSpec(0.1, 1.0, 0.0, 5.0, 10, 10).mesh()
    exact = derivatives(sol, X, T)
    errs = []
    for h in (2e-2, 1e-2, 5e-3):
        fd = fd_derivatives(sol, X, T, h, h)
        errs.append([np.max(np.abs(getattr(fd, f) - getattr(exact, f))) for f in ("u_t", "u_x", "u_xxx")])
    errs = np.array(errs)
    orders = np.log2(errs[:-1] / errs[1:])
    assert np.all(orders >= 1.9)


def test_positivity(sol):
    X, T = GridSpec(0.0, 3.0, 0.0, 20.0, 40, 40).mesh()
    assert np.all(eval_u(sol, X, T) > 0)


def test_exponent_forcing():
    f = exponent_forcing_check()
    assert (f.m, f.n, f.mu) == (Fraction(-1, 3), Fraction(1, 3), Fraction(-2))
    assert f.determinant != 0
    assert f.closure() == (0, 0, 0)
    assert "mu = -2" in f.report()
