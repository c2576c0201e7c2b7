import numpy as np
import pytest

from autodiff.jet import JetTensor, activation, cos, exp, sin, tanh, wave
from autodiff.tensor import Tensor
from exceptions.AutodiffException import UnsupportedOrderError, UnsupportedPrimitiveError
from exceptions.ConfigurationException import UnknownNameError


def numeric_gradient(fn, x, step=1e-6):
    grad = np.zeros_like(x)
    for i in np.ndindex(x.shape):
        plus, minus = x.copy(), x.copy()
        plus[i] += step
        minus[i] -= step
        grad[i] = (fn(plus) - fn(minus)) / (2 * step)
    return grad


def test_backward_through_matmul_tanh_and_indexing(rng):
    a = rng.normal(size=(3, 4))
    w = rng.normal(size=(4, 2))

    def loss(values):
        return float(np.sum(np.tanh(values @ w)[1:] ** 2))

    x = Tensor(a, requires_grad=True)
    out = (x @ Tensor(w)).tanh()[1:].square().sum()
    out.backward()
    np.testing.assert_allclose(out.data, loss(a), rtol=1e-14)
    np.testing.assert_allclose(x.grad, numeric_gradient(loss, a), rtol=1e-6, atol=1e-9)


def test_backward_through_concat_mean_and_broadcast(rng):
    a = rng.normal(size=(2, 3))
    b = rng.normal(size=(3,))

    def loss(values):
        stacked = np.concatenate([values, values * b], axis=0)
        return float(np.mean(np.sin(stacked)))

    x = Tensor(a, requires_grad=True)
    out = Tensor.concat([x, x * b], axis=0).sin().mean()
    out.backward()
    np.testing.assert_allclose(x.grad, numeric_gradient(loss, a), rtol=1e-6, atol=1e-10)


def test_gradient_accumulates_over_reused_nodes():
    x = Tensor(np.array([2.0]), requires_grad=True)
    y = x * x + x * 3.0
    y.sum().backward()
    np.testing.assert_allclose(x.grad, [7.0])


@pytest.mark.parametrize(
    "fn, f, df, ddf",
    [
        (sin, np.sin, np.cos, lambda v: -np.sin(v)),
        (cos, np.cos, lambda v: -np.sin(v), lambda v: -np.cos(v)),
        (exp, np.exp, np.exp, np.exp),
        (tanh, np.tanh, lambda v: 1 - np.tanh(v) ** 2, lambda v: -2 * np.tanh(v) * (1 - np.tanh(v) ** 2)),
        (wave, lambda v: np.sin(v) + np.cos(v), lambda v: np.cos(v) - np.sin(v), lambda v: -np.sin(v) - np.cos(v)),
    ],
)
def test_jet_of_elementwise_function_of_a_coordinate(fn, f, df, ddf):
    points = np.array([[0.3, -0.7], [1.1, 0.2]])
    jet = fn(JetTensor.seed(points, 2).coordinate(0) * 2.0)
    x = points[:, 0]
    np.testing.assert_allclose(jet.value.data, f(2 * x), rtol=1e-14)
    np.testing.assert_allclose(jet.d1(0).data, 2 * df(2 * x), rtol=1e-14)
    np.testing.assert_allclose(jet.d2(0).data, 4 * ddf(2 * x), rtol=1e-13, atol=1e-15)
    np.testing.assert_array_equal(jet.d1(1).data, 0.0)
    np.testing.assert_array_equal(jet.d2(1).data, 0.0)


def test_jet_product_and_quotient_rules():
    points = np.array([[0.5, 2.0]])
    seed = JetTensor.seed(points, 2)
    x, t = seed.coordinate(0), seed.coordinate(1)
    product = x * x * t
    np.testing.assert_allclose(product.value.data, [0.5])
    np.testing.assert_allclose(product.d1(0).data, [2.0])
    np.testing.assert_allclose(product.d2(0).data, [4.0])
    np.testing.assert_allclose(product.d1(1).data, [0.25])
    quotient = 1.0 / x
    np.testing.assert_allclose(quotient.d1(0).data, [-4.0])
    np.testing.assert_allclose(quotient.d2(0).data, [16.0])


def test_jet_orders_are_checked():
    with pytest.raises(UnsupportedOrderError):
        JetTensor.seed(np.zeros((1, 2)), 3)
    with pytest.raises(UnsupportedOrderError):
        JetTensor.seed(np.zeros((1, 2)), 1).d2(0)


def test_activation_lookup():
    assert activation("tanh") is tanh
    assert activation("wave") is wave
    with pytest.raises(UnsupportedPrimitiveError):
        activation("relu")
    with pytest.raises(UnknownNameError):
        activation("swish")
