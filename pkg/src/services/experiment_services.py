"""
Experiment runner: one config in, one directory of artifacts out.

Every file a run writes follows from the config echo and its seeds; only the
wall-clock columns differ between two runs of the same config.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from autodiff.engine import forward
from autodiff.params import FlatParams

# exceptions
from exceptions.TrainingException import NonFiniteLossError

# logger module
from logger.logger_module import ModuleLoger
from models.base_model import FieldModel
from models.factory import build_model
from models.propinn_model import ProPINNModel
from problems.base_problem import CollocationSet, PDEProblem, out_of_domain_fraction
from problems.collocation import grid_points, sample_collocation
from problems.registry import get_problem
from repository.artifact_repo import ArtifactRepository
from schemas.experiment_schema import ExperimentConfig
from schemas.problem_schema import RandomSpec
from schemas.report_schema import AggregateReport, ComparisonReport, MetricsReport
from services.diagnostic_services import DiagnosticServices
from services.metrics_services import MetricsServices
from services.training_services import TRACE_COLUMNS, TrainingServices
from utils.config_utils import set_path, validate_config

logger = ModuleLoger(Path(__file__).stem)


@dataclass
class RunResult:
    run_dir: Path
    metrics: MetricsReport
    params: FlatParams
    model: FieldModel


class EvaluationGrid:
    """Held-out grid with the reference evaluated once."""

    def __init__(self, problem: PDEProblem, config: ExperimentConfig):
        self.x, self.t, self.points = grid_points(
            problem.domain, config.evaluation.n_x, config.evaluation.n_t
        )
        self.reference = problem.reference(self.points)

    def predict(self, model: FieldModel, params: FlatParams) -> np.ndarray:
        return forward(model, params, self.points)[:, 0]

    def __call__(self, model: FieldModel, params: FlatParams, **extra) -> MetricsReport:
        return MetricsServices.compute_metrics(self.predict(model, params), self.reference, **extra)


class ExperimentServices:

    @staticmethod
    def prepare(config: ExperimentConfig) -> tuple[PDEProblem, FieldModel, CollocationSet]:
        problem = get_problem(config.problem)
        model = build_model(config.model, profile=config.profile)
        spec = config.collocation
        if isinstance(spec, RandomSpec) and spec.seed is None:
            spec = spec.model_copy(update={"seed": config.seeds.sampling})
        collocation = sample_collocation(problem, spec)
        return problem, model, collocation

    @staticmethod
    def run_dir(config: ExperimentConfig) -> Path:
        return Path(config.output_dir) / config.name

    @staticmethod
    def run(config: ExperimentConfig, run_dir: Path | None = None) -> RunResult:
        run_dir = Path(run_dir or ExperimentServices.run_dir(config))
        logger.info(f"run {config.name}: {config.problem} / {config.model.kind} -> {run_dir}")
        ArtifactRepository.save_config_echo(run_dir, config)

        problem, model, collocation = ExperimentServices.prepare(config)
        grid = EvaluationGrid(problem, config)
        eval_model = TrainingServices.evaluation_model(model, config.seeds.perturbation)
        if isinstance(eval_model, ProPINNModel):
            fraction = out_of_domain_fraction(
                problem, collocation.interior, eval_model.perturbations.all_offsets()
            )
            logger.warning(f"{100 * fraction:.2f}% of perturbed collocation points lie outside the domain")

        dynamics = []
        diagnostics = config.diagnostics

        def checkpoint(iteration: int, current: FieldModel, params: FlatParams) -> None:
            if diagnostics.dynamics:
                dynamics.append(
                    DiagnosticServices.dynamics_row(
                        iteration,
                        current,
                        params,
                        problem.domain,
                        diagnostics.dynamics_grid,
                        diagnostics.neighbor_distance,
                        diagnostics.failure_eps,
                    )
                )

        try:
            state = TrainingServices.train(
                model,
                problem,
                collocation,
                config.schedule,
                weights=config.weights,
                init_seed=config.seeds.init,
                perturbation_seed=config.seeds.perturbation,
                evaluate=grid,
                checkpoint=checkpoint,
            )
        except NonFiniteLossError as error:
            ArtifactRepository.save_snapshot(run_dir, error.iteration, error.params, error.gradient)
            raise

        metrics = state.last_metrics.model_copy(
            update={
                "final_losses": dict(state.last_evaluation.terms) | {"total": state.last_evaluation.total},
                "wall_time_s": state.wall_time_s,
                "iterations": state.iteration,
            }
        )
        prediction = grid.predict(eval_model, state.params)
        ArtifactRepository.save_trace(run_dir, TRACE_COLUMNS, state.trace)
        ArtifactRepository.save_metrics(run_dir, metrics)
        ArtifactRepository.save_solution(run_dir, grid.points, prediction, grid.reference)
        ArtifactRepository.save_error_map(run_dir, grid.points, prediction - grid.reference)
        ArtifactRepository.save_params(run_dir, state.params, eval_model.describe())
        if diagnostics.dynamics:
            ArtifactRepository.save_dynamics(run_dir, dynamics)
        ExperimentServices.run_diagnostics(config, problem, eval_model, state.params, run_dir)
        logger.info(
            f"run {config.name} finished: rMAE {metrics.rmae:.4e}, rRMSE {metrics.rrmse:.4e}, "
            f"relative L1 {metrics.relative_l1:.4e} in {metrics.wall_time_s:.1f}s"
        )
        return RunResult(run_dir, metrics, state.params, eval_model)

    @staticmethod
    def run_diagnostics(
        config: ExperimentConfig,
        problem: PDEProblem,
        model: FieldModel,
        params: FlatParams,
        run_dir: Path,
        force: bool = False,
    ) -> dict:
        """Exports of the enabled diagnostics; ``force`` enables the three static ones."""
        options = config.diagnostics
        summary: dict = {"model": model.name, "params_hash": params.content_hash()}
        if options.correlation_map or force:
            points = grid_points(problem.domain, options.correlation_grid.n_x, options.correlation_grid.n_t)[2]
            offset = DiagnosticServices.neighbour_offset(problem.domain.dim, options.neighbor_distance)
            field = DiagnosticServices.correlation_map(model, params, points, offset)
            mask, eps = DiagnosticServices.failure_mask(field, options.failure_eps)
            ArtifactRepository.save_correlation_field(run_dir, field)
            ArtifactRepository.save_failure_mask(run_dir, points, mask)
            summary["correlation"] = field.summary() | {
                "failure_eps": eps,
                "failed_fraction": float(np.mean(mask)),
            }
        if options.positive_ratio or force:
            summary["positive_ratio"] = DiagnosticServices.positive_ratio(
                model, params, problem.domain, options.positive_ratio_points, options.neighbor_distance
            )
        if options.boost_check or force:
            summary["boost"] = DiagnosticServices.boost_survey(
                model,
                params,
                problem.domain,
                options.boost_region_size,
                options.boost_cases,
                seed=config.seeds.sampling,
            ).model_dump()
        if len(summary) > 2:
            ArtifactRepository.save_json(Path(run_dir) / "diagnostics.json", summary)
        return summary

    @staticmethod
    def diagnose(config: ExperimentConfig, params_path: Path | None = None, run_dir: Path | None = None) -> dict:
        """Diagnostics on a saved model, or on a fresh initialization without ``params_path``."""
        run_dir = Path(run_dir or ExperimentServices.run_dir(config))
        problem = get_problem(config.problem)
        model = TrainingServices.evaluation_model(
            build_model(config.model, profile=config.profile), config.seeds.perturbation
        )
        if params_path is not None:
            params = ArtifactRepository.load_params(params_path, model.layout)
        else:
            params = model.init_params(config.seeds.init)
        static = (
            config.diagnostics.correlation_map,
            config.diagnostics.positive_ratio,
            config.diagnostics.boost_check,
        )
        summary = ExperimentServices.run_diagnostics(
            config, problem, model, params, run_dir, force=not any(static)
        )
        logger.info(f"diagnostics of {model.name} written to {run_dir}")
        return summary

    @staticmethod
    def repeat(config: ExperimentConfig, n: int, base_dir: Path | None = None) -> AggregateReport:
        """n runs with every seed shifted by the run index, one seed_i directory each."""
        base_dir = Path(base_dir or ExperimentServices.run_dir(config))
        reports, seeds = [], []
        for index in range(n):
            seeded = config.model_copy(update={"seeds": config.seeds.shifted(index)})
            result = ExperimentServices.run(seeded, base_dir / f"seed_{index}")
            reports.append(result.metrics)
            seeds.append(seeded.seeds.init)
        report = MetricsServices.aggregate(reports, seeds)
        ArtifactRepository.save_json(base_dir / "aggregate.json", report)
        logger.info(f"{config.name}: mean relative L1 {report.mean['relative_l1']:.4e} over {n} runs")
        return report

    @staticmethod
    def compare(
        config_a: ExperimentConfig,
        config_b: ExperimentConfig,
        n: int,
        base_dir: Path | None = None,
        metric: str = "relative_l1",
    ) -> ComparisonReport:
        base_dir = Path(base_dir or config_a.output_dir)
        report_a = ExperimentServices.repeat(config_a, n, base_dir / f"a_{config_a.name}")
        report_b = ExperimentServices.repeat(config_b, n, base_dir / f"b_{config_b.name}")
        report = MetricsServices.compare(report_a, report_b, metric)
        ArtifactRepository.save_json(base_dir / "comparison.json", report)
        return report

    @staticmethod
    def sweep(config: ExperimentConfig) -> dict[str, MetricsReport]:
        """One run per value of ``config.sweep.parameter``, each in its own subdirectory."""
        sweep = config.sweep
        base_dir = ExperimentServices.run_dir(config)
        payload = config.model_dump(mode="json") | {"sweep": None}
        key = sweep.parameter.split(".")[-1]
        results, index_entries = {}, []
        for index, value in enumerate(sweep.values):
            child = validate_config(set_path(payload, sweep.parameter, value))
            name = f"{index:02d}_{key}"
            result = ExperimentServices.run(child, base_dir / name)
            results[name] = result.metrics
            index_entries.append({"directory": name, "value": value, "metrics": result.metrics.model_dump()})
        ArtifactRepository.save_json(
            base_dir / "sweep.json", {"parameter": sweep.parameter, "runs": index_entries}
        )
        return results
