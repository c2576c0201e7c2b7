import numpy as np
import pytest
from conftest import small_mlp, small_propinn

from exceptions.TrainingException import NonFiniteLossError
from problems.collocation import sample_collocation
from problems.convection import convection_problem
from schemas.problem_schema import GridSpec
from schemas.training_schema import AdamPhase, LbfgsPhase, TrainingSchedule
from services.training_services import TRACE_COLUMNS, TrainingServices


@pytest.fixture
def setup():
    problem = convection_problem()
    return problem, sample_collocation(problem, GridSpec(n_x=9, n_t=7))


def test_lbfgs_training_lowers_the_loss_and_records_every_iteration(setup):
    problem, collocation = setup
    schedule = TrainingSchedule(phases=(LbfgsPhase(iterations=5),), metrics_every=2)
    state = TrainingServices.train(small_mlp(), problem, collocation, schedule, init_seed=0)
    losses = [row["total_loss"] for row in state.trace]
    assert [row["iteration"] for row in state.trace] == list(range(6))
    assert set(state.trace[0]) == set(TRACE_COLUMNS)
    assert losses[-1] < losses[0]


def test_propinn_training_is_deterministic(setup):
    problem, collocation = setup
    schedule = TrainingSchedule(phases=(LbfgsPhase(iterations=3),))
    first = TrainingServices.train(small_propinn(), problem, collocation, schedule, init_seed=1, perturbation_seed=2)
    again = TrainingServices.train(small_propinn(), problem, collocation, schedule, init_seed=1, perturbation_seed=2)
    other = TrainingServices.train(small_propinn(), problem, collocation, schedule, init_seed=1, perturbation_seed=3)
    np.testing.assert_array_equal(first.params.values, again.params.values)
    assert [r["total_loss"] for r in first.trace] == [r["total_loss"] for r in again.trace]
    assert not np.array_equal(first.params.values, other.params.values)


def test_iteration_models_draw_fresh_perturbations(propinn):
    one = TrainingServices.iteration_model(propinn, 0, 1)
    two = TrainingServices.iteration_model(propinn, 0, 2)
    assert not np.array_equal(one.perturbations.offsets[0], two.perturbations.offsets[0])
    mlp = small_mlp()
    assert TrainingServices.iteration_model(mlp, 0, 1) is mlp


def test_adam_then_lbfgs_schedule_with_checkpoints(setup):
    problem, collocation = setup
    seen = []
    schedule = TrainingSchedule(
        phases=(AdamPhase(iterations=3, lr=1e-2), LbfgsPhase(iterations=2)), metrics_every=2
    )
    state = TrainingServices.train(
        small_mlp(),
        problem,
        collocation,
        schedule,
        checkpoint=lambda iteration, model, params: seen.append(iteration),
    )
    assert state.iteration == 5
    assert seen == [0, 2, 4, 5]


def test_zero_iterations_keeps_the_initialization(setup, mlp):
    problem, collocation = setup
    schedule = TrainingSchedule(phases=(LbfgsPhase(iterations=0),))
    state = TrainingServices.train(mlp, problem, collocation, schedule, init_seed=4)
    np.testing.assert_array_equal(state.params.values, mlp.init_params(4).values)
    assert len(state.trace) == 1


def test_non_finite_loss_aborts_with_a_snapshot(setup, mlp):
    problem, collocation = setup
    values = mlp.init_params(0).values.copy()
    values[0] = np.nan
    poisoned = mlp.init_params(0).with_values(values)
    schedule = TrainingSchedule(phases=(LbfgsPhase(iterations=2),))
    with pytest.raises(NonFiniteLossError) as caught:
        TrainingServices.train(mlp, problem, collocation, schedule, params=poisoned)
    assert caught.value.iteration == 0
    assert caught.value.params.shape == (mlp.layout.size,)
