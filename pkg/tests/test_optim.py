import numpy as np
import pytest
from scipy.optimize import rosen, rosen_der

from optim.adam_optimizer import adam_init, adam_step
from optim.lbfgs_optimizer import lbfgs_init, lbfgs_step, minimize, two_loop_direction


def quadratic(scale):
    def oracle(x):
        return 0.5 * scale * float(x @ x), scale * x

    return oracle


def test_adam_zero_gradient_keeps_params_and_decays_moments():
    state = adam_init(np.array([1.0, -2.0]))
    state = adam_step(state, np.array([0.5, 0.5]))
    moved = state.params.copy()
    after = adam_step(state, np.zeros(2))
    np.testing.assert_allclose(after.m, 0.9 * state.m)
    np.testing.assert_allclose(after.v, 0.999 * state.v)
    # zero gradient on zero moments
    fresh = adam_step(adam_init(moved), np.zeros(2))
    np.testing.assert_array_equal(fresh.params, moved)


def test_adam_constant_gradient_steps_by_learning_rate():
    gradient = np.array([3.0, -0.2])
    state = adam_init(np.zeros(2))
    for _ in range(50):
        previous = state.params
        state = adam_step(state, gradient, lr=1e-2)
    np.testing.assert_allclose(previous - state.params, 1e-2 * gradient / (np.abs(gradient) + 1e-8), rtol=1e-10)
    assert state.step == 50


@pytest.mark.parametrize(
    "hessian, shift",
    [
        (np.diag([1.0, 10.0]), np.zeros(2)),
        (np.array([[3.0, 1.0], [1.0, 2.0]]), np.array([0.5, -1.0])),
    ],
)
def test_lbfgs_solves_a_two_parameter_quadratic_in_three_iterations(hessian, shift):
    def oracle(x):
        return 0.5 * float(x @ hessian @ x) - float(shift @ x), hessian @ x - shift

    state = minimize(oracle, np.array([1.0, 1.0]), max_iter=3)
    assert state.iteration <= 3
    assert np.linalg.norm(state.gradient) < 1e-10
    np.testing.assert_allclose(state.params, np.linalg.solve(hessian, shift), atol=1e-10)


def test_lbfgs_minimizes_rosenbrock_within_a_hundred_iterations():
    state = minimize(lambda x: (rosen(x), rosen_der(x)), np.array([-1.2, 1.0]), max_iter=100)
    assert state.iteration <= 100
    assert state.loss < 1e-8
    np.testing.assert_allclose(state.params, [1.0, 1.0], atol=1e-3)


def test_lbfgs_zero_gradient_does_not_move():
    state = lbfgs_step(lbfgs_init(np.zeros(3)), quadratic(1.0))
    np.testing.assert_array_equal(state.params, 0.0)
    assert state.iteration == 1 and state.loss == 0.0


def test_lbfgs_history_is_bounded_and_steepest_descent_without_memory():
    state = lbfgs_init(np.array([2.0, -1.0, 0.5, 3.0]), history_size=2)
    scales = np.array([1.0, 10.0, 100.0, 3.0])

    def oracle(x):
        return 0.5 * float(np.sum(scales * x * x)), scales * x

    for _ in range(6):
        state = lbfgs_step(state, oracle)
    assert len(state.s_history) <= 2
    memoryless = lbfgs_init(np.array([1.0, 1.0]), history_size=0)
    for _ in range(3):
        memoryless = lbfgs_step(memoryless, quadratic(2.0))
    assert memoryless.s_history == ()
    assert memoryless.loss < 1.0


def test_two_loop_without_history_is_negative_gradient():
    gradient = np.array([1.0, -2.0])
    np.testing.assert_array_equal(two_loop_direction(gradient, (), ()), -gradient)


@pytest.mark.parametrize("scale", [0.5, 2.0])
def test_stale_state_reevaluates_the_objective(scale):
    scales = np.array([1.0, 10.0])
    # an exact line step on this objective stops short of the origin
    state = lbfgs_step(
        lbfgs_init(np.array([1.0, 1.0])), lambda x: (0.5 * float(np.sum(scales * x * x)), scales * x)
    )
    assert np.all(state.params != 0.0)
    stale = state.stale()
    assert stale.loss is None and stale.gradient is None
    moved = lbfgs_step(stale, quadratic(scale))
    assert moved.loss < 0.5 * scale * float(state.params @ state.params)
