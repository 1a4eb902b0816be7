import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msgrav.tangents import Jet2, Tan, sabs, ssqrt, value_of


def rational(x, y):
    return (x * x * y + 3.0 * x / y - y / x) / (x + y)


def with_sqrt(x, y):
    return ssqrt(x * x + y * y) / (1.0 + sabs(x * y))


def fd_grad(f, x0, y0, h=1e-6):
    return np.array([
        (f(x0 + h, y0) - f(x0 - h, y0)) / (2 * h),
        (f(x0, y0 + h) - f(x0, y0 - h)) / (2 * h)])


@pytest.mark.parametrize("f", [rational, with_sqrt])
@pytest.mark.parametrize("x0,y0", [(1.3, 0.7), (2.0, -1.1), (0.5, 3.0)])
def test_tan_gradient_matches_finite_differences(f, x0, y0):
    x = Tan.seed(x0, 2, 0)
    y = Tan.seed(y0, 2, 1)
    out = f(x, y)
    assert out.v == pytest.approx(f(x0, y0))
    assert np.allclose(out.g, fd_grad(f, x0, y0), rtol=1e-7, atol=1e-8)


def test_tan_vector_forward_mode_directional():
    # seeding a whole direction gives the directional derivative directly
    x = Tan(1.3, np.array([2.0]))
    y = Tan(0.7, np.array([-1.0]))
    out = rational(x, y)
    g = fd_grad(rational, 1.3, 0.7)
    assert out.g[0] == pytest.approx(2.0 * g[0] - 1.0 * g[1], rel=1e-6)


def test_tan_constant_interaction_leaves_operands_intact():
    g = np.zeros(3)
    t = Tan(2.0, g)
    _ = ((t + 1.0) * 4.0 - 0.5) / 2.0
    _ = 1.0 / t, 3.0 - t, -t
    assert t.v == 2.0 and np.all(t.g == 0.0) and np.all(g == 0.0)


def _jet2_pair(x0, y0):
    # inner seeds: x; outer seeds: y
    x = Jet2(x0, np.array([1.0]), np.zeros(1), np.zeros((1, 1)))
    y = Jet2(y0, np.zeros(1), np.array([1.0]), np.zeros((1, 1)))
    return x, y


@pytest.mark.parametrize("f", [rational, with_sqrt])
@pytest.mark.parametrize("x0,y0", [(1.3, 0.7), (0.8, 2.2)])
def test_jet2_mixed_second_derivative(f, x0, y0):
    x, y = _jet2_pair(x0, y0)
    out = f(x, y)
    h = 1e-5

    def dx(xx, yy):
        t = f(Tan.seed(xx, 1, 0), Tan.seed(yy, 1))
        return t.g[0]

    mixed_fd = (dx(x0, y0 + h) - dx(x0, y0 - h)) / (2 * h)
    assert out.v == pytest.approx(f(x0, y0))
    assert out.a[0] == pytest.approx(fd_grad(f, x0, y0)[0], rel=1e-6)
    assert out.b[0] == pytest.approx(fd_grad(f, x0, y0)[1], rel=1e-6)
    assert out.m[0, 0] == pytest.approx(mixed_fd, rel=1e-5, abs=1e-7)


def test_jet2_same_variable_both_blocks():
    # seeding one variable in both blocks yields d^2f/dx^2 in the mixed slot
    x0 = 1.7
    x = Jet2(x0, np.array([1.0]), np.array([1.0]), np.zeros((1, 1)))
    out = x * x * x
    assert out.m[0, 0] == pytest.approx(6.0 * x0)


def test_jet2_sqrt_second_derivative():
    x0 = 2.3
    x = Jet2(x0, np.array([1.0]), np.array([1.0]), np.zeros((1, 1)))
    out = x.sqrt()
    assert out.m[0, 0] == pytest.approx(-0.25 * x0 ** -1.5)


def test_jet2_reciprocal_second_derivative():
    x0 = 1.9
    x = Jet2(x0, np.array([1.0]), np.array([1.0]), np.zeros((1, 1)))
    out = 1.0 / x
    assert out.m[0, 0] == pytest.approx(2.0 / x0 ** 3)


def test_value_of_unwraps():
    assert value_of(3.5) == 3.5
    assert value_of(Tan(2.0, np.zeros(1))) == 2.0
    assert value_of(Jet2(1.5, np.zeros(1), np.zeros(1),
                         np.zeros((1, 1)))) == 1.5


@given(st.floats(min_value=0.3, max_value=3.0),
       st.floats(min_value=0.3, max_value=3.0))
@settings(max_examples=30, deadline=None)
def test_jet2_matches_tan_on_first_order(x0, y0):
    x, y = _jet2_pair(x0, y0)
    out2 = rational(x, y)
    out1 = rational(Tan.seed(x0, 2, 0), Tan.seed(y0, 2, 1))
    assert out2.a[0] == pytest.approx(out1.g[0], rel=1e-12)
    assert out2.b[0] == pytest.approx(out1.g[1], rel=1e-12)
