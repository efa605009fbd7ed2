import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ermakov_stefan.errors import DomainError
from ermakov_stefan.involutory import Modulation, apply, involution_check, modulated_residual, push_forward
from ermakov_stefan.reports import GridSpec
from ermakov_stefan.similarity import eval_u

GRID = GridSpec(0.0, 2.0, 0.0, 5.0, 20, 20)
MGRID = GridSpec(0.1, 0.9, 0.1, 2.0, 30, 30)


def test_identity_modulation(sol):
    mod = Modulation.constant(1.0)
    t = np.linspace(0, 5, 7)
    ts, us = apply(mod, t, eval_u(sol, 0.3, t))
    assert np.array_equal(ts, t)
    assert np.array_equal(us, eval_u(sol, 0.3, t))


def test_half_power_gives_log():
    mod = Modulation.power(0.5, a=1.0)
    assert mod.t_star(1.0) == pytest.approx(np.log(2.0), rel=1e-12)


@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 1.0, -0.5])
def test_closed_form_vs_quadrature(p):
    mod = Modulation.power(p)
    t = np.linspace(0, 10, 23)
    assert np.max(np.abs(mod.t_star(t) - mod.t_star_closed_form(t))) < 1e-10


def test_t_star_increasing():
    mod = Modulation.tabulated([0, 1, 2, 4], [1.0, 2.0, 0.5, 1.5])
    t = np.linspace(0, 4, 101)
    assert np.all(np.diff(mod.t_star(t)) > 0)


@pytest.mark.parametrize(
    "mod", [Modulation.constant(1.0), Modulation.constant(2.0), Modulation.power(0.5)], ids=["one", "two", "sqrt"]
)
def test_involution(mod):
    assert involution_check(mod, GRID) < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.floats(-1.0, 1.0), st.floats(0.5, 3.0))
def test_involution_power_sweep(p, a):
    assert involution_check(Modulation.power(p, a), GridSpec(0.0, 1.0, 0.0, 5.0, 5, 8)) < 1e-10


def test_involution_tabulated():
    mod = Modulation.tabulated(np.linspace(0, 10, 11), 1.0 + 0.3 * np.sin(np.linspace(0, 10, 11)))
    assert involution_check(mod, GRID) < 1e-10


def test_push_forward_matches_apply(sol):
    mod = Modulation.power(0.5)
    u = lambda x, t: eval_u(sol, x, t)  # noqa: E731
    ts, us = apply(mod, 3.0, u(0.4, 3.0))
    assert push_forward(u, mod, 0.4, ts) == pytest.approx(us, rel=1e-12)
    with pytest.raises(DomainError):
        push_forward(u, mod, 0.4, mod.t_star_max * 1.1)


def test_modulated_residual(sol):
    mod = Modulation.power(0.5)
    assert modulated_residual(sol, mod, MGRID).max_rel < 1e-4
    errs = [modulated_residual(sol, mod, MGRID, step=h).max_rel for h in (4e-2, 2e-2, 1e-2)]
    assert all(3.5 < a / b < 4.5 for a, b in zip(errs, errs[1:]))


def test_ablation_breaks_residual(sol):
    mod = Modulation.power(0.5)
    assert modulated_residual(sol, mod, MGRID, drop_drift=True).max_rel > 1e-2
    assert modulated_residual(sol, Modulation.constant(1.0), MGRID, drop_drift=True).max_rel < 1e-4


def test_residual_domain(sol):
    with pytest.raises(DomainError):
        modulated_residual(sol, Modulation.power(0.5), GridSpec(0.1, 0.9, 0.0, 1.0, 5, 5))


def test_invalid_modulations():
    with pytest.raises(DomainError):
        Modulation.constant(0.0)
    with pytest.raises(DomainError):
        Modulation.tabulated([0, 1, 1], [1, 1, 1])
    with pytest.raises(DomainError):
        Modulation.tabulated([0, 1, 2], [1, -1, 1])
    with pytest.raises(DomainError):
        Modulation.from_config({"family": "cubic"})
