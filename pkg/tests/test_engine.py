import numpy as np
import pytest
from conftest import small_mlp, small_propinn

from autodiff.engine import (
    LossTerm,
    ResidualOperator,
    forward,
    input_jet,
    input_jets,
    loss_and_gradient,
    param_gradient,
    param_gradient_of_residual_loss,
    residual_values,
)
from core.config import NUMERIC_SETTINGS
from exceptions.AutodiffException import UnsupportedOrderError
from exceptions.ConfigurationException import DimensionMismatchError, EmptyCollocationError
from models.combination_model import LinearCombinationModel, ShiftedModel
from problems.collocation import sample_collocation
from problems.convection import convection_problem, convection_residual
from problems.wave import wave_residual
from schemas.problem_schema import GridSpec, LossWeights
from services.training_services import TrainingServices


def models_for(seed):
    return [small_mlp(), small_propinn()][seed % 2]


def fd_input_derivatives(model, params, x, step):
    d1, d2 = [], []
    base = forward(model, params, x)
    for axis in range(len(x)):
        e = np.zeros_like(x)
        e[axis] = step
        plus, minus = forward(model, params, x + e), forward(model, params, x - e)
        d1.append((plus - minus) / (2 * step))
        d2.append((plus - 2 * base + minus) / step**2)
    return np.array(d1), np.array(d2)


@pytest.mark.parametrize("seed", range(50))
def test_input_jet_matches_finite_differences(seed):
    model = models_for(seed)
    params = model.init_params(seed)
    x = np.random.default_rng(seed).uniform(-1, 1, size=2)
    jet = input_jet(model, params, x)[0]
    fd1, _ = fd_input_derivatives(model, params, x, 1e-4)
    _, fd2 = fd_input_derivatives(model, params, x, 1e-3)
    np.testing.assert_allclose(jet.value, forward(model, params, x)[0], rtol=1e-14)
    np.testing.assert_allclose(jet.d1, fd1[:, 0], rtol=1e-6, atol=1e-8)
    np.testing.assert_allclose(jet.d2, fd2[:, 0], rtol=1e-4, atol=1e-6)


@pytest.mark.parametrize("seed", range(50))
def test_param_gradient_matches_finite_differences(seed):
    model = models_for(seed)
    params = model.init_params(seed)
    rng = np.random.default_rng(100 + seed)
    x = rng.uniform(-1, 1, size=2)
    gradient = param_gradient(model, params, x)
    assert (gradient.rows, gradient.cols) == (1, len(params))
    step = 1e-6
    for k in rng.choice(len(params), size=15, replace=False):
        e = np.zeros(len(params))
        e[k] = step
        plus = forward(model, params.with_values(params.values + e), x)[0]
        minus = forward(model, params.with_values(params.values - e), x)[0]
        np.testing.assert_allclose(gradient.entries[0, k], (plus - minus) / (2 * step), rtol=1e-6, atol=1e-9)


@pytest.mark.parametrize("model_factory", [small_mlp, small_propinn])
@pytest.mark.parametrize(
    "operator, upper",
    [
        # u_tt - 4 u_xx: the gradient over theta passes through second input derivatives
        (ResidualOperator(wave_residual, order=2, name="wave"), (1.0, 1.0)),
        (ResidualOperator(convection_residual, order=1, name="convection"), (2.0 * np.pi, 1.0)),
    ],
)
def test_nested_gradient_of_residual_loss(model_factory, operator, upper):
    model = model_factory()
    params = model.init_params(7)
    rng = np.random.default_rng(7)
    points = rng.uniform(0, 1, size=(6, 2)) * upper
    gradient = param_gradient_of_residual_loss(model, params, points, operator)

    def loss(values):
        residual = residual_values(model, params.with_values(values), points, operator)
        return float(np.mean(np.square(residual)))

    step = 1e-6
    for k in rng.choice(len(params), size=10, replace=False):
        e = np.zeros(len(params))
        e[k] = step
        numeric = (loss(params.values + e) - loss(params.values - e)) / (2 * step)
        np.testing.assert_allclose(gradient[k], numeric, rtol=1e-5, atol=1e-8)


def test_batched_jets_agree_with_single_points(mlp, rng):
    params = mlp.init_params(0)
    points = rng.uniform(-1, 1, size=(5, 2))
    batch = input_jets(mlp, params, points)
    for i, point in enumerate(points):
        single = input_jet(mlp, params, point)[0]
        np.testing.assert_allclose(batch.at(i)[0].d2, single.d2, rtol=1e-13)
    assert forward(mlp, params, points).shape == (5, 1)
    assert forward(mlp, params, points[0]).shape == (1,)


def test_thread_count_does_not_change_loss_bits(monkeypatch, propinn, rng):
    params = propinn.init_params(3)
    points = rng.uniform(0, 1, size=(40, 2))
    terms = [LossTerm("res", 1.0, (points,), ResidualOperator(lambda u: u.d1(1) + u.d1(0), 1))]
    monkeypatch.setattr(NUMERIC_SETTINGS, "chunk_size", 7)
    monkeypatch.setattr(NUMERIC_SETTINGS, "num_threads", 1)
    serial = loss_and_gradient(propinn, params, terms)
    monkeypatch.setattr(NUMERIC_SETTINGS, "num_threads", 4)
    threaded = loss_and_gradient(propinn, params, terms)
    assert serial.total == threaded.total
    np.testing.assert_array_equal(serial.gradient, threaded.gradient)


def test_loss_terms_are_weighted_means(mlp, rng):
    params = mlp.init_params(0)
    points = rng.uniform(0, 1, size=(9, 2))
    value = ResidualOperator(lambda u: u.value, 0)
    single = loss_and_gradient(mlp, params, [LossTerm("a", 1.0, (points,), value)])
    double = loss_and_gradient(mlp, params, [LossTerm("a", 2.0, (points,), value)])
    expected = np.mean(np.square(forward(mlp, params, points)))
    np.testing.assert_allclose(single.total, expected, rtol=1e-13)
    np.testing.assert_allclose(double.total, 2 * single.total, rtol=1e-15)
    np.testing.assert_allclose(double.gradient, 2 * single.gradient, rtol=1e-14)


def test_engine_errors(mlp):
    params = mlp.init_params(0)
    with pytest.raises(DimensionMismatchError):
        forward(mlp, params, np.zeros((4, 3)))
    with pytest.raises(UnsupportedOrderError):
        input_jets(mlp, params, np.zeros((1, 2)), order=3)
    empty = LossTerm("ic", 1.0, (np.zeros((0, 2)),), ResidualOperator(lambda u: u.value, 0))
    with pytest.raises(EmptyCollocationError):
        loss_and_gradient(mlp, params, [empty])
    skipped = LossTerm("ic", 0.0, (np.zeros((0, 2)),), ResidualOperator(lambda u: u.value, 0))
    assert loss_and_gradient(mlp, params, [skipped]).total == 0.0
    with pytest.raises(DimensionMismatchError):
        forward(small_mlp(width=4), params, np.zeros((1, 2)))


@pytest.mark.parametrize("model_factory", [small_mlp, small_propinn])
def test_first_derivatives_do_not_depend_on_the_jet_order(model_factory, rng):
    model = model_factory()
    params = model.init_params(4)
    points = rng.uniform(-1, 1, size=(12, 2))
    first = input_jets(model, params, points, order=1)
    second = input_jets(model, params, points, order=2)
    assert first.d2 is None
    np.testing.assert_allclose(first.value, second.value, rtol=0, atol=1e-12)
    np.testing.assert_allclose(first.d1, second.d1, rtol=0, atol=1e-12)


def test_param_gradient_is_linear_in_the_model(mlp, rng):
    params = mlp.init_params(6)
    shifted = ShiftedModel(mlp, [0.25, -0.1])
    a, b = 1.5, -0.75
    combined = LinearCombinationModel([(a, mlp), (b, shifted)])
    for x in rng.uniform(0, 1, size=(5, 2)):
        expected = a * param_gradient(mlp, params, x).entries + b * param_gradient(shifted, params, x).entries
        np.testing.assert_allclose(param_gradient(combined, params, x).entries, expected, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("model_factory", [small_mlp, small_propinn])
def test_training_gradient_is_the_residual_loss_gradient(model_factory):
    problem = convection_problem()
    model = model_factory()
    params = model.init_params(2)
    collocation = sample_collocation(problem, GridSpec(n_x=6, n_t=5))
    only_residual = LossWeights(res=1.0, ic=0.0, bc=0.0)
    training = TrainingServices.composite_loss(
        model, params, problem, collocation, only_residual, with_gradient=True
    )
    direct = param_gradient_of_residual_loss(model, params, collocation.interior, problem.residual_operator)
    np.testing.assert_allclose(training.gradient, direct, rtol=1e-14, atol=1e-16)
