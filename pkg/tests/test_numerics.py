import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ermakov_stefan.errors import BracketError, ConvergenceError
from ermakov_stefan.numerics import composite_gauss_legendre, find_root, invert_monotone


def test_gauss_legendre_polynomial_exactness():
    v = composite_gauss_legendre(lambda x: x ** 31, 0.0, 1.0, 16)
    assert v == pytest.approx(1 / 32, rel=1e-14)


def test_composite_broadcast():
    b = np.array([1.0, 2.0, 3.0])
    v = composite_gauss_legendre(np.exp, np.zeros(3), b, 16, panels=3)
    assert np.allclose(v, np.expm1(b), rtol=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5))
def test_find_root_cubic(c):
    r = find_root(lambda x: x ** 3 + x - c, -3.0, 3.0, ftol=1e-14)
    assert r ** 3 + r == pytest.approx(c, abs=1e-13)


def test_find_root_errors():
    with pytest.raises(BracketError):
        find_root(lambda x: x * x + 1, -1.0, 1.0)
    with pytest.raises(ConvergenceError):
        find_root(lambda x: x - 0.3, 0.0, 1.0, ftol=0.0, maxiter=1)


def test_find_root_endpoint():
    assert find_root(lambda x: x - 1.0, 1.0, 2.0) == 1.0


def test_invert_monotone():
    y = np.linspace(0.0, 20.0, 50)
    x = invert_monotone(np.exp, np.exp, np.exp(np.linspace(0, 3, 50)), 0.0, 3.0)
    assert np.allclose(x, np.linspace(0, 3, 50), atol=1e-12)
    x = invert_monotone(lambda v: v ** 3 + v, lambda v: 3 * v ** 2 + 1, y, 0.0, 3.0)
    assert np.allclose(x ** 3 + x, y, atol=1e-10)
