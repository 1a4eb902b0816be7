import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msgrav.errors import SingularPointError
from msgrav.series import DEFAULT_ORDER, JetScalar, multi_indices


def var(i, base=(0.0, 0.0, 0.0, 0.0), order=DEFAULT_ORDER):
    return JetScalar.variable(i, base, order=order)


def const(v, base=(0.0, 0.0, 0.0, 0.0), order=DEFAULT_ORDER):
    return JetScalar.constant(v, base, order=order)


def test_variable_and_constant_coefficients():
    x = var(1)
    assert x.value() == 0.0
    assert x.coeff((0, 1, 0, 0)) == 1.0
    assert x.coeff((0, 0, 0, 0)) == 0.0
    c = const(3.5)
    assert c.value() == 3.5
    assert c.coeff((1, 0, 0, 0)) == 0.0


def test_variable_centering():
    x = var(2, base=(0.0, 0.0, 1.5, 0.0))
    assert x.value() == 1.5
    assert x.coeff((0, 0, 1, 0)) == 1.0


def test_square_expansion():
    x = var(0, base=(2.0, 0, 0, 0))
    s = (x + 1.0) * (x + 1.0)  # (3 + u)^2 = 9 + 6u + u^2
    assert s.value() == 9.0
    assert s.coeff((1, 0, 0, 0)) == 6.0
    assert s.coeff((2, 0, 0, 0)) == 1.0
    assert s.coeff((3, 0, 0, 0)) == 0.0


def test_derivative_restores_factorials():
    x, y = var(0), var(1)
    s = x * x * x * y  # d^3/dx^3 d/dy = 6
    assert s.derivative((3, 1, 0, 0)) == pytest.approx(6.0)
    assert s.coeff((3, 1, 0, 0)) == pytest.approx(1.0)


def test_reciprocal_inverts():
    x = var(0, base=(2.0, 0, 0, 0))
    s = (1.0 + x * x)
    prod = s * (1.0 / s)
    assert prod.value() == pytest.approx(1.0)
    for m in multi_indices(s.order):
        if any(m):
            assert prod.coeff(m) == pytest.approx(0.0, abs=1e-13)


def test_division_by_zero_constant_term_raises():
    x = var(0)  # value 0 at base
    with pytest.raises(SingularPointError):
        1.0 / x


def test_sqrt_squares_back():
    x = var(0, base=(1.3, 0, 0, 0))
    r = x.sqrt()
    sq = r * r
    for m in multi_indices(x.order):
        assert sq.coeff(m) == pytest.approx(x.coeff(m), abs=1e-12)


def test_sqrt_of_nonpositive_raises():
    with pytest.raises(SingularPointError):
        var(0).sqrt()
    with pytest.raises(SingularPointError):
        const(-2.0).sqrt()


def test_exp_ln_inverse_pair():
    x = var(0, base=(0.7, 0, 0, 0))
    s = (1.0 + x * x)
    back = s.ln().exp()
    for m in multi_indices(s.order):
        assert back.coeff(m) == pytest.approx(s.coeff(m), abs=1e-12)


def test_ln_derivatives():
    x = var(1, base=(0.0, 2.0, 0.0, 0.0))
    s = x.ln()
    assert s.value() == pytest.approx(math.log(2.0))
    assert s.derivative((0, 1, 0, 0)) == pytest.approx(0.5)
    assert s.derivative((0, 2, 0, 0)) == pytest.approx(-0.25)


def test_trig_identity():
    x = var(3, base=(0, 0, 0, 0.9))
    s = x.sin() * x.sin() + x.cos() * x.cos()
    assert s.value() == pytest.approx(1.0)
    for m in multi_indices(x.order):
        if any(m):
            assert s.coeff(m) == pytest.approx(0.0, abs=1e-13)


def test_sin_cos_derivative_chain():
    x = var(0, base=(0.4, 0, 0, 0))
    assert x.sin().derivative((1, 0, 0, 0)) == pytest.approx(math.cos(0.4))
    assert x.cos().derivative((1, 0, 0, 0)) == pytest.approx(-math.sin(0.4))


def test_partial_lowers_order():
    x, y = var(0), var(1)
    s = x * x * y
    p = s.partial(0)  # d/dx -> 2xy
    assert p.order == s.order - 1
    assert p.coeff((1, 1, 0, 0)) == pytest.approx(2.0)


def test_partial_matches_derivative_extraction():
    x = var(0, base=(1.2, 0, 0, 0))
    s = (1.0 + x).ln() * x
    p = s.partial(0)
    assert p.value() == pytest.approx(s.derivative((1, 0, 0, 0)))
    assert p.derivative((1, 0, 0, 0)) == pytest.approx(
        s.derivative((2, 0, 0, 0)))


def test_truncate():
    x = var(0)
    s = (1.0 + x).powi(4)
    t = s.truncate(2)
    assert t.order == 2
    assert t.coeff((2, 0, 0, 0)) == pytest.approx(6.0)


def test_powi_negative_matches_reciprocal():
    x = var(0, base=(1.7, 0, 0, 0))
    s = 1.0 + x * x
    a = s.powi(-3)
    b = 1.0 / (s * s * s)
    for m in multi_indices(s.order):
        assert a.coeff(m) == pytest.approx(b.coeff(m), rel=1e-12, abs=1e-12)


def test_finite_difference_oracle_on_composite():
    # d/dx of exp(sin(x)) / (2 + x) against central differences
    def f(v):
        return math.exp(math.sin(v)) / (2.0 + v)

    x0 = 0.6
    x = var(0, base=(x0, 0, 0, 0))
    s = x.sin().exp() / (2.0 + x)
    h = 1e-5
    fd = (f(x0 + h) - f(x0 - h)) / (2 * h)
    assert s.derivative((1, 0, 0, 0)) == pytest.approx(fd, rel=1e-8)


coeff_st = st.floats(min_value=-3, max_value=3, allow_nan=False)


def _poly(c):
    x, y = var(0, order=3), var(1, order=3)
    return c[0] + c[1] * x + c[2] * y + c[3] * x * y + c[4] * x * x


@given(st.lists(coeff_st, min_size=5, max_size=5),
       st.lists(coeff_st, min_size=5, max_size=5),
       st.lists(coeff_st, min_size=5, max_size=5))
@settings(max_examples=40, deadline=None)
def test_ring_laws(ca, cb, cc):
    a, b, c = _poly(ca), _poly(cb), _poly(cc)
    lhs = (a * b) * c
    rhs = a * (b * c)
    assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-9)
    assert np.allclose((a * b).coeffs, (b * a).coeffs, atol=1e-12)
    assert np.allclose((a * (b + c)).coeffs, (a * b + a * c).coeffs,
                       atol=1e-9)
