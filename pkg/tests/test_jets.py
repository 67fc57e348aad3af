import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from biumbilical import jets
from oracles import central_hessian, complex_step_grad

finite = st.floats(-2.0, 2.0, allow_nan=False)


def _jet_derivs(fn, x, y):
    xj, yj = jets.variables(x, y, order=2)
    J = fn(xj, yj)
    grad = np.array([J.deriv(1, 0), J.deriv(0, 1)])
    hess = np.array([[J.deriv(2, 0), J.deriv(1, 1)], [J.deriv(1, 1), J.deriv(0, 2)]])
    return J.value, grad, hess


def f_mixed(x, y):
    return jets.sin(x) * jets.exp(y) + jets.cosh(x * y) / (2.0 + jets.cos(y))


def f_mixed_np(x, y):
    return np.sin(x) * np.exp(y) + np.cosh(x * y) / (2.0 + np.cos(y))


@given(finite, finite)
def test_gradient_matches_complex_step(x, y):
    _, grad, _ = _jet_derivs(f_mixed, x, y)
    np.testing.assert_allclose(grad, complex_step_grad(f_mixed_np, [x, y]), rtol=1e-12, atol=1e-12)


@given(finite, finite)
def test_hessian_matches_finite_differences(x, y):
    _, _, hess = _jet_derivs(f_mixed, x, y)
    np.testing.assert_allclose(hess, central_hessian(f_mixed_np, [x, y]), rtol=1e-6, atol=1e-6)


@given(st.floats(0.1, 5.0), finite)
def test_inverse_functions_round_trip(x, y):
    xj, _ = jets.variables(x, y, order=3)
    for expr in (jets.exp(jets.log(xj)), jets.sqrt(xj) * jets.sqrt(xj), 1.0 / (1.0 / xj)):
        np.testing.assert_allclose(expr.coef, xj.coef, atol=1e-12, rtol=1e-12)


@given(finite)
def test_arctan_derivatives(x):
    (xj,) = jets.variables(x, order=3)
    t = jets.arctan(xj)
    q = 1 + x * x
    assert t.value == pytest.approx(math.atan(x))
    assert t.deriv(1) == pytest.approx(1 / q)
    assert t.deriv(2) == pytest.approx(-2 * x / q**2)
    assert t.deriv(3) == pytest.approx((6 * x * x - 2) / q**3)


def test_arctan_order_limit():
    (xj,) = jets.variables(0.3, order=4)
    with pytest.raises(NotImplementedError):
        jets.arctan(xj)


@given(finite, finite)
def test_product_rule(x, y):
    xj, yj = jets.variables(x, y, order=2)
    u, v = jets.sin(xj + yj), jets.exp(xj - 2 * yj)
    p = u * v
    assert p.deriv(1, 0) == pytest.approx(u.deriv(1, 0) * v.value + u.value * v.deriv(1, 0), abs=1e-12)
    assert p.deriv(1, 1) == pytest.approx(
        u.deriv(1, 1) * v.value + u.deriv(1, 0) * v.deriv(0, 1) + u.deriv(0, 1) * v.deriv(1, 0) + u.value * v.deriv(1, 1),
        abs=1e-10,
    )


def test_tanh_matches_numpy():
    (xj,) = jets.variables(0.4, order=2)
    t = jets.tanh(xj)
    s = 1 / math.cosh(0.4)
    assert t.value == pytest.approx(math.tanh(0.4))
    assert t.deriv(1) == pytest.approx(s * s)
    assert t.deriv(2) == pytest.approx(-2 * s * s * math.tanh(0.4))


def test_partial_lowers_order():
    xj, yj = jets.variables(0.2, 0.5, order=3)
    f = xj * xj * yj
    fx = f.partial(0)
    assert fx.order == 2
    assert fx.value == pytest.approx(2 * 0.2 * 0.5)
    assert fx.deriv(1, 0) == pytest.approx(2 * 0.5)
    assert fx.deriv(1, 1) == pytest.approx(2.0)


def test_truncation_on_mixed_orders():
    a, _ = jets.variables(1.0, 2.0, order=3)
    b, _ = jets.variables(1.0, 2.0, order=2)
    assert (a * b).order == 2
    with pytest.raises(ValueError):
        (a * b).deriv(3, 0)


def test_array_points_and_stack():
    x = np.linspace(-1, 1, 5)
    xj, yj = jets.variables(x, 0.3, order=2)
    v = jets.stack([jets.cos(xj), jets.sin(xj), yj, 1.0])
    assert v.shape == (4, 5)
    np.testing.assert_allclose(v.deriv(1, 0)[0], -np.sin(x))
    np.testing.assert_allclose(v.deriv(0, 1)[2], np.ones(5))
    np.testing.assert_allclose(v.deriv(1, 0)[3], np.zeros(5))
    norm2 = jets.dot(v, v)
    np.testing.assert_allclose(norm2.deriv(1, 0), 0.0, atol=1e-15)


def test_plain_inputs_fall_through_to_numpy():
    assert jets.sin(0.5) == pytest.approx(math.sin(0.5))
    np.testing.assert_allclose(jets.stack([1.0, np.zeros(3)]), [[1, 1, 1], [0, 0, 0]])
    assert jets.dot(np.array([1.0, 2.0]), np.array([3.0, 4.0])) == 11.0


def test_numpy_operand_on_left():
    (xj,) = jets.variables(0.5, order=2)
    out = np.float64(2.0) * xj
    assert isinstance(out, jets.Jet)
    assert out.deriv(1) == 2.0
