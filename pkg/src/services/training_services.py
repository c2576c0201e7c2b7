"""
Composite PINN loss and the full-batch training loop.

For ProPINN a fresh perturbation batch is drawn at every iteration from the
seed sequence (perturbation seed, iteration) and kept fixed for all loss
evaluations of that iteration, so every line search sees one deterministic
objective.
"""

import time
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from autodiff.engine import LossEvaluation, loss_and_gradient
from autodiff.params import FlatParams

# exceptions
from exceptions.TrainingException import NonFiniteLossError

# logger module
from logger.logger_module import ModuleLoger
from models.base_model import FieldModel
from models.perturbation import sample_perturbations
from models.propinn_model import ProPINNModel
from optim.adam_optimizer import AdamState, adam_init, adam_step
from optim.lbfgs_optimizer import LbfgsState, lbfgs_init, lbfgs_step
from problems.base_problem import CollocationSet, PDEProblem
from schemas.problem_schema import LossWeights
from schemas.report_schema import MetricsReport
from schemas.training_schema import AdamPhase, LbfgsPhase, TrainingSchedule

logger = ModuleLoger(Path(__file__).stem)

TRACE_COLUMNS = ["iteration", "total_loss", "res_loss", "ic_loss", "bc_loss", "rmae", "rrmse", "wall_ms"]

Evaluator = Callable[[FieldModel, FlatParams], MetricsReport]
Checkpoint = Callable[[int, FieldModel, FlatParams], None]


@dataclass
class TrainState:
    params: FlatParams
    iteration: int = 0
    optimizer: AdamState | LbfgsState | None = None
    trace: list[dict] = field(default_factory=list)
    perturbation_seed: int = 0
    last_evaluation: LossEvaluation | None = None
    last_metrics: MetricsReport | None = None
    wall_time_s: float = 0.0


class LossOracle:
    """(loss, gradient) over flat parameter vectors for one fixed model."""

    def __init__(
        self,
        model: FieldModel,
        params: FlatParams,
        problem: PDEProblem,
        collocation: CollocationSet,
        weights: LossWeights,
    ):
        self.model = model
        self.layout = params.layout
        self.terms = problem.loss_terms(collocation, weights)
        self.cache: dict[bytes, LossEvaluation] = {}

    def evaluate(self, values: np.ndarray) -> LossEvaluation:
        key = np.ascontiguousarray(values, dtype=np.float64).tobytes()
        if key not in self.cache:
            self.cache[key] = loss_and_gradient(
                self.model, FlatParams(values, self.layout), self.terms
            )
        return self.cache[key]

    def retain(self, values: np.ndarray) -> None:
        """Drop every cached evaluation except the one at ``values``."""
        key = np.ascontiguousarray(values, dtype=np.float64).tobytes()
        self.cache = {k: v for k, v in self.cache.items() if k == key}

    def __call__(self, values: np.ndarray) -> tuple[float, np.ndarray]:
        evaluation = self.evaluate(values)
        return evaluation.total, evaluation.gradient


class TrainingServices:

    @staticmethod
    def composite_loss(
        model: FieldModel,
        params: FlatParams,
        problem: PDEProblem,
        collocation: CollocationSet,
        weights: LossWeights | None = None,
        with_gradient: bool = False,
    ) -> LossEvaluation:
        terms = problem.loss_terms(collocation, weights or problem.weights)
        return loss_and_gradient(model, params, terms, with_gradient=with_gradient)

    @staticmethod
    def iteration_model(model: FieldModel, perturbation_seed: int, iteration: int) -> FieldModel:
        """The model as seen by one training iteration (fresh perturbations for ProPINN)."""
        if not isinstance(model, ProPINNModel):
            return model
        batch = sample_perturbations(model.config, seed=(perturbation_seed, iteration))
        return model.with_perturbations(batch)

    @staticmethod
    def evaluation_model(model: FieldModel, perturbation_seed: int) -> FieldModel:
        """The model with the perturbation batch fixed by the experiment seed."""
        if not isinstance(model, ProPINNModel):
            return model
        return model.with_perturbations(sample_perturbations(model.config, seed=perturbation_seed))

    @staticmethod
    def _check_finite(iteration: int, params: np.ndarray, evaluation: LossEvaluation) -> None:
        gradient = evaluation.gradient
        finite = np.isfinite(evaluation.total) and (gradient is None or np.all(np.isfinite(gradient)))
        if not finite or not np.all(np.isfinite(params)):
            logger.error(f"non-finite loss at iteration {iteration}: {evaluation.total}")
            raise NonFiniteLossError(
                f"loss became non-finite at iteration {iteration}",
                iteration=iteration,
                params=np.array(params),
                gradient=None if gradient is None else np.array(gradient),
            )

    @staticmethod
    def _record(
        state: TrainState,
        evaluation: LossEvaluation,
        started: float,
        metrics: MetricsReport | None,
    ) -> None:
        row = {
            "iteration": state.iteration,
            "total_loss": evaluation.total,
            "res_loss": evaluation.terms.get("res", 0.0),
            "ic_loss": evaluation.terms.get("ic", 0.0),
            "bc_loss": evaluation.terms.get("bc", 0.0),
            "rmae": metrics.rmae if metrics else float("nan"),
            "rrmse": metrics.rrmse if metrics else float("nan"),
            "wall_ms": 1e3 * (time.perf_counter() - started),
        }
        state.trace.append(row)
        state.last_evaluation = evaluation
        logger.debug(
            f"it {state.iteration}: loss {evaluation.total:.6e} "
            f"(res {row['res_loss']:.3e}, ic {row['ic_loss']:.3e}, bc {row['bc_loss']:.3e})"
        )

    @staticmethod
    def train(
        model: FieldModel,
        problem: PDEProblem,
        collocation: CollocationSet,
        schedule: TrainingSchedule,
        params: FlatParams | None = None,
        weights: LossWeights | None = None,
        init_seed: int = 0,
        perturbation_seed: int = 0,
        evaluate: Evaluator | None = None,
        checkpoint: Checkpoint | None = None,
    ) -> TrainState:
        weights = weights or problem.weights
        params = params if params is not None else model.init_params(init_seed)
        state = TrainState(params=params, perturbation_seed=perturbation_seed)
        eval_model = TrainingServices.evaluation_model(model, perturbation_seed)
        started = time.perf_counter()

        def checkpoint_metrics(force: bool = False) -> MetricsReport | None:
            if not (force or state.iteration % schedule.metrics_every == 0):
                return None
            metrics = evaluate(eval_model, state.params) if evaluate else None
            if checkpoint:
                checkpoint(state.iteration, eval_model, state.params)
            if metrics:
                state.last_metrics = metrics
                logger.info(
                    f"it {state.iteration}: rMAE {metrics.rmae:.4e}, rRMSE {metrics.rrmse:.4e}"
                )
            return metrics

        initial = TrainingServices.composite_loss(
            TrainingServices.iteration_model(model, perturbation_seed, 0),
            params,
            problem,
            collocation,
            weights,
        )
        TrainingServices._check_finite(0, params.values, initial)
        TrainingServices._record(
            state, initial, started, checkpoint_metrics(force=schedule.total_iterations == 0)
        )

        for phase in schedule.phases:
            logger.info(f"{phase.kind} phase: {phase.iterations} iterations")
            if isinstance(phase, AdamPhase):
                optimizer = adam_init(state.params.values)
            else:
                optimizer = lbfgs_init(state.params.values, phase.history_size)
            oracle = None
            for _ in range(phase.iterations):
                step_model = TrainingServices.iteration_model(
                    model, perturbation_seed, state.iteration
                )
                if oracle is None or oracle.model is not step_model:
                    oracle = LossOracle(step_model, state.params, problem, collocation, weights)
                optimizer = TrainingServices._step(phase, optimizer, oracle)
                values = optimizer.params
                evaluation = oracle.evaluate(values)
                oracle.retain(values)
                state.iteration += 1
                state.params = state.params.with_values(values)
                state.optimizer = optimizer
                TrainingServices._check_finite(state.iteration, values, evaluation)
                last = state.iteration == schedule.total_iterations
                TrainingServices._record(state, evaluation, started, checkpoint_metrics(force=last))

        state.wall_time_s = time.perf_counter() - started
        return state

    @staticmethod
    def _step(
        phase: AdamPhase | LbfgsPhase,
        optimizer: AdamState | LbfgsState,
        oracle: LossOracle,
    ) -> AdamState | LbfgsState:
        if isinstance(phase, AdamPhase):
            _, gradient = oracle(optimizer.params)
            return adam_step(optimizer, gradient, phase.lr, phase.beta1, phase.beta2, phase.eps)
        if isinstance(oracle.model, ProPINNModel):
            # the objective changed with the new perturbations
            optimizer = optimizer.stale()
        return lbfgs_step(
            optimizer,
            oracle,
            c1=phase.c1,
            c2=phase.c2,
            max_line_search_evals=phase.max_line_search_evals,
        )
