import numpy as np
import pytest
from conftest import small_mlp, small_propinn

from autodiff.engine import forward, param_gradient
from autodiff.jet import JetTensor
from autodiff.tensor import Tensor
from exceptions.AutodiffException import UnsupportedPrimitiveError
from exceptions.ConfigurationException import (
    ConfigurationException,
    DimensionMismatchError,
    PerturbationMismatchError,
    UnknownNameError,
)
from exceptions.ModelException import ModelException
from models.closed_form_model import ClosedFormModel
from models.combination_model import LinearCombinationModel, ShiftedModel, region_lifted_model
from models.factory import build_model, parse_model_config
from models.mlp_model import MLPModel
from models.perturbation import PerturbationBatch, sample_offsets, sample_perturbations
from models.propinn_model import ProPINNModel
from problems.convection import convection_exact
from schemas.model_schema import MLPConfig, ProPINNConfig
from utils.cli_utils import exit_code


def test_mlp_layout_and_glorot_init():
    model = small_mlp(width=8, depth=3)
    assert model.layout.size == (2 * 8 + 8) + (8 * 8 + 8) + (8 * 1 + 1)
    first, again = model.init_params(5), model.init_params(5)
    np.testing.assert_array_equal(first.values, again.values)
    assert not np.array_equal(first.values, model.init_params(6).values)
    weight = first.view(model.layout.names()[0])
    assert np.max(np.abs(weight)) <= np.sqrt(6.0 / (2 + 8))


def test_mlp_rejects_non_smooth_activation():
    with pytest.raises(UnsupportedPrimitiveError):
        small_mlp(activation="relu")


def test_propinn_default_layout_size():
    model = ProPINNModel(ProPINNConfig())
    assert model.config.counts == (9, 25, 49)
    assert model.layout.size == (2 * 8 + 8 + 8 * 32 + 32) + (4 * 8 + 8 + 8 + 1) + (
        32 * 64 + 64 + 64 * 64 + 64 + 64 + 1
    )


def test_propinn_is_invariant_to_the_order_of_offsets(propinn, rng):
    params = propinn.init_params(0)
    points = rng.uniform(0, 1, size=(6, 2))
    batch = propinn.perturbations
    shuffled = propinn.with_perturbations(batch.permuted(2, rng.permutation(batch.counts[2])))
    np.testing.assert_array_equal(forward(propinn, params, points), forward(shuffled, params, points))


def test_output_with_zero_offsets_ignores_their_number(rng):
    config = small_propinn().config
    one = small_propinn().with_perturbations(PerturbationBatch.zeros(config.region_sizes, (1, 1, 1), 2))
    many = small_propinn().with_perturbations(PerturbationBatch.zeros(config.region_sizes, (5, 2, 7), 2))
    params = one.init_params(0)
    points = rng.uniform(0, 1, size=(3, 2))
    np.testing.assert_allclose(forward(one, params, points), forward(many, params, points), rtol=1e-14)


def test_detached_perturbations_keep_values_but_change_gradients(rng):
    attached = small_propinn()
    detached = small_propinn(detach_perturbations=True)
    params = attached.init_params(1)
    x = rng.uniform(0, 1, size=2)
    np.testing.assert_array_equal(forward(attached, params, x), forward(detached, params, x))
    assert not np.allclose(
        param_gradient(attached, params, x).entries, param_gradient(detached, params, x).entries
    )


def test_perturbation_mismatch_is_rejected():
    model = small_propinn()
    wrong = sample_offsets((0.01, 0.05), (2, 3), 2, seed=0)
    with pytest.raises(PerturbationMismatchError):
        model.with_perturbations(wrong)
    too_wide = sample_offsets((0.01, 0.05, 0.5), (2, 3, 4), 2, seed=0)
    with pytest.raises(PerturbationMismatchError):
        model.with_perturbations(too_wide)


def test_perturbation_mismatch_is_a_configuration_error():
    assert issubclass(PerturbationMismatchError, ConfigurationException)
    assert not issubclass(PerturbationMismatchError, ModelException)
    assert exit_code(PerturbationMismatchError("scales differ")) == 2


def test_perturbations_are_seeded_and_bounded():
    config = small_propinn().config
    first = sample_perturbations(config, seed=(3, 17))
    again = sample_perturbations(config, seed=(3, 17))
    other = sample_perturbations(config, seed=(3, 18))
    for a, b, c, bound in zip(first.offsets, again.offsets, other.offsets, config.region_sizes):
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)
        assert np.max(np.abs(a)) <= bound
    assert first.counts == (2, 3, 4)
    with pytest.raises(ValueError):
        first.offsets[0][0, 0] = 1.0


def test_linear_combination_is_linear_in_outputs(mlp, rng):
    params = mlp.init_params(2)
    other = ShiftedModel(mlp, [0.1, -0.2])
    combined = LinearCombinationModel([(2.0, mlp), (-0.5, other)])
    points = rng.uniform(0, 1, size=(4, 2))
    expected = 2.0 * forward(mlp, params, points) - 0.5 * forward(mlp, params, points + [0.1, -0.2])
    np.testing.assert_allclose(forward(combined, params, points), expected, rtol=1e-13)
    with pytest.raises(DimensionMismatchError):
        LinearCombinationModel([(1.0, mlp), (1.0, small_mlp(width=4))])


def test_region_lift_with_zero_offsets_doubles_the_model(mlp, rng):
    params = mlp.init_params(0)
    lifted = region_lifted_model(mlp, np.zeros((3, 2)))
    x = rng.uniform(0, 1, size=2)
    np.testing.assert_allclose(forward(lifted, params, x), 2.0 * forward(mlp, params, x), rtol=1e-15)


def test_closed_form_model_amplitude_and_freeze():
    model = ClosedFormModel(convection_exact, amplitude=3.0)
    frozen = ClosedFormModel(convection_exact, amplitude=3.0, frozen=True)
    x = np.array([0.4, 0.01])
    np.testing.assert_allclose(forward(model, model.init_params(), x), 3.0 * np.sin(0.4 - 0.5))
    np.testing.assert_allclose(param_gradient(model, model.init_params(), x).entries, [[np.sin(0.4 - 0.5)]])
    np.testing.assert_array_equal(param_gradient(frozen, frozen.init_params(), x).entries, [[0.0]])


def test_factory_dispatches_on_kind_and_profile():
    pinn = build_model({"kind": "pinn"}, profile="paper")
    assert isinstance(pinn, MLPModel) and pinn.config.hidden_width == 512
    assert build_model(MLPConfig(), profile="desk").config.hidden_width == 128
    assert isinstance(build_model({"kind": "propinn", "d_model": 8}), ProPINNModel)
    with pytest.raises(UnknownNameError):
        parse_model_config({"kind": "transformer"})
    with pytest.raises(ConfigurationException):
        parse_model_config({"kind": "propinn", "region_sizes": [0.05, 0.01, 0.09]})
    with pytest.raises(ConfigurationException):
        parse_model_config({"kind": "propinn", "num_scales": 2})


def wave_np(v):
    return np.sin(v) + np.cos(v)


def randomized(model, rng):
    params = model.init_params(0)
    return params.with_values(rng.normal(scale=0.5, size=len(params)))


def test_pooled_hidden_is_the_plain_mean_over_offsets(propinn, rng):
    params = randomized(propinn, rng)
    points = rng.uniform(0, 1, size=(7, 2))
    w = params.layout.split(params.values)
    pooled = propinn.pooled_hidden(params.layout.split(Tensor(params.values)), JetTensor.seed(points, 0))
    for block, jet in zip(propinn.perturbations.offsets, pooled):
        total = np.zeros((len(points), propinn.config.projector_hidden))
        for delta in block:
            total += wave_np((points + delta) @ w["projector0.weight"] + w["projector0.bias"])
        np.testing.assert_allclose(jet.value.data, total / len(block), rtol=0, atol=1e-15)


def test_propinn_forward_matches_a_pointwise_evaluation(propinn, rng):
    params = randomized(propinn, rng)
    w = params.layout.split(params.values)
    points = rng.uniform(0, 1, size=(5, 2))

    def projector(x):
        hidden = wave_np(x @ w["projector0.weight"] + w["projector0.bias"])
        return hidden @ w["projector1.weight"] + w["projector1.bias"]

    columns = [projector(points)]
    for block in propinn.perturbations.offsets:
        columns.append(sum(projector(points + delta) for delta in block) / len(block))
    stacked = np.stack(columns, axis=-1)
    mixed = wave_np(stacked @ w["mixer0.weight"] + w["mixer0.bias"]) @ w["mixer1.weight"] + w["mixer1.bias"]
    hidden = wave_np(mixed[..., 0] @ w["head0.weight"] + w["head0.bias"])
    expected = hidden @ w["head1.weight"] + w["head1.bias"]
    np.testing.assert_allclose(forward(propinn, params, points), expected, rtol=1e-12, atol=1e-14)


def test_offsets_fill_the_region_symmetrically():
    batch = sample_offsets((0.1,), (100_000,), 2, seed=0)
    block = batch.offsets[0]
    assert np.max(np.abs(block)) <= 0.1
    np.testing.assert_allclose(block.mean(axis=0), 0.0, atol=1e-3)
    np.testing.assert_allclose(block.std(axis=0), 0.1 / np.sqrt(3.0), rtol=1e-2)
