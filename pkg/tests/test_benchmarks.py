"""Full-size training runs on the shipped configs. Deselected by default: ``pytest -m slow``."""

from pathlib import Path

import numpy as np
import pytest

from models.factory import build_model
from problems.collocation import grid_points, sample_collocation
from problems.registry import get_problem
from schemas.training_schema import LbfgsPhase, TrainingSchedule
from services.experiment_services import ExperimentServices
from services.training_services import TrainingServices
from utils.config_utils import load_config, shortcut_overrides

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
SEEDS = (0, 1, 2)
# wall-clock budget of one L-BFGS iteration of ProPINN on the 101 x 101 convection grid
LBFGS_ITERATION_SECONDS = 3.0

pytestmark = pytest.mark.slow


def _run(name: str, seed: int, out: Path):
    overrides = shortcut_overrides(out, seed) + ["diagnostics={}"]
    return ExperimentServices.run(load_config(CONFIGS / f"{name}.json", overrides)).metrics


@pytest.mark.parametrize("seed", SEEDS)
def test_propinn_escapes_convection_failure_mode(seed, tmp_path):
    pinn = _run("convection_pinn", seed, tmp_path)
    propinn = _run("convection_propinn", seed, tmp_path)
    assert pinn.relative_l1 > 0.3
    assert propinn.relative_l1 < 0.10
    assert pinn.relative_l1 >= 5 * propinn.relative_l1


@pytest.mark.parametrize("seed", SEEDS)
def test_propinn_solves_reaction(seed, tmp_path):
    assert _run("reaction_propinn", seed, tmp_path).rrmse < 0.10


@pytest.mark.parametrize("seed", SEEDS)
def test_detached_perturbations_train_worse(seed, tmp_path):
    detached = _run("convection_detach", seed, tmp_path)
    full = _run("convection_propinn", seed, tmp_path)
    assert detached.relative_l1 > full.relative_l1


def test_exact_allen_cahn_reference_on_the_evaluation_grid():
    # bilinear lookup of the stored frames at t = 0
    problem = get_problem("allen_cahn")
    x, _, points = grid_points(problem.domain, 64, 5)
    values = problem.reference(points).reshape(64, 5)
    np.testing.assert_allclose(values[:, 0], x**2 * np.cos(np.pi * x), atol=1e-4)
    assert np.all(np.abs(values) <= 1.0 + 1e-6)


def test_propinn_lbfgs_iteration_fits_the_time_budget():
    config = load_config(CONFIGS / "convection_propinn.json", shortcut_overrides(seed=0))
    problem = get_problem(config.problem)
    collocation = sample_collocation(problem, config.collocation)
    model = build_model(config.model, profile=config.profile)
    iterations = 3
    schedule = TrainingSchedule(phases=(LbfgsPhase(iterations=iterations),))
    state = TrainingServices.train(model, problem, collocation, schedule)
    elapsed = (state.trace[-1]["wall_ms"] - state.trace[0]["wall_ms"]) / 1000.0
    assert elapsed / iterations < LBFGS_ITERATION_SECONDS
