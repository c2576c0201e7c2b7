import json
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from autodiff.params import FlatParams, ParamLayout

# exceptions
from exceptions.ModelException import ParamsFileError

# logger module
from logger.logger_module import ModuleLoger
from schemas.diagnostic_schema import CorrelationField, DynamicsRow

# hashing and csv helpers
from utils.csv_utils import write_csv
from utils.hash_utils import content_hash

logger = ModuleLoger(Path(__file__).stem)

CONFIG_FILE = "config.json"
TRACE_FILE = "trace.csv"
METRICS_FILE = "metrics.json"
SOLUTION_FILE = "solution.csv"
ERROR_MAP_FILE = "error_map.csv"
PARAMS_FILE = "params.npz"
SNAPSHOT_FILE = "nan_snapshot.npz"
CORRELATION_FILE = "correlation_field.csv"
FAILURE_MASK_FILE = "failure_mask.csv"
DYNAMICS_FILE = "dynamics.csv"
FEM_TRACE_FILE = "fem_trace.csv"

DYNAMICS_COLUMNS = ["iteration", "mean_g", "median_g", "failed_fraction"]


class ArtifactRepository:
    """Everything a run leaves on disk, one file per artifact inside the run directory."""

    @staticmethod
    def save_json(path: Path, payload: dict | BaseModel) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(payload, BaseModel):
            payload = payload.model_dump(mode="json")
        path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
        return path

    @staticmethod
    def save_config_echo(run_dir: Path, config: BaseModel) -> Path:
        payload = config.model_dump(mode="json")
        echo = {"config": payload, "content_hash": content_hash(payload)}
        return ArtifactRepository.save_json(Path(run_dir) / CONFIG_FILE, echo)

    @staticmethod
    def save_trace(run_dir: Path, columns: list[str], rows: list[dict]) -> Path:
        table = [np.array([row[name] for row in rows], dtype=np.float64) for name in columns]
        return write_csv(Path(run_dir) / TRACE_FILE, columns, table, integer_columns=("iteration",))

    @staticmethod
    def save_metrics(run_dir: Path, report: BaseModel) -> Path:
        return ArtifactRepository.save_json(Path(run_dir) / METRICS_FILE, report)

    @staticmethod
    def save_solution(run_dir: Path, points: np.ndarray, prediction: np.ndarray, reference: np.ndarray) -> Path:
        return write_csv(
            Path(run_dir) / SOLUTION_FILE,
            ["x", "t", "u_pred", "u_ref"],
            [points[:, 0], points[:, -1], prediction, reference],
        )

    @staticmethod
    def save_error_map(run_dir: Path, points: np.ndarray, error: np.ndarray) -> Path:
        # signed error u_pred - u_ref
        return write_csv(
            Path(run_dir) / ERROR_MAP_FILE,
            ["x", "t", "error"],
            [points[:, 0], points[:, -1], error],
        )

    @staticmethod
    def save_params(run_dir: Path, params: FlatParams, description: dict | None = None) -> Path:
        path = Path(run_dir) / PARAMS_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez(
            path,
            values=params.values,
            layout=np.array(json.dumps(params.layout.to_records())),
            model=np.array(json.dumps(description or {}, sort_keys=True)),
        )
        return path

    @staticmethod
    def load_params(path: Path, layout: ParamLayout | None = None) -> FlatParams:
        """Read a params.npz; with ``layout`` given the stored layout must match it."""
        path = Path(path)
        if not path.exists():
            raise ParamsFileError(f"parameter file {path} does not exist")
        try:
            with np.load(path, allow_pickle=False) as data:
                values = np.array(data["values"], dtype=np.float64)
                stored = ParamLayout.from_records(json.loads(str(data["layout"])))
        except (KeyError, ValueError, OSError) as error:
            raise ParamsFileError(f"cannot read parameters from {path}: {error}") from error
        if layout is not None and stored.to_records() != layout.to_records():
            raise ParamsFileError(f"parameters in {path} were saved for a different model layout")
        if values.size != stored.size:
            raise ParamsFileError(f"{path} holds {values.size} values for a layout of size {stored.size}")
        return FlatParams(values, layout or stored)

    @staticmethod
    def save_snapshot(run_dir: Path, iteration: int, params: np.ndarray, gradient: np.ndarray | None) -> Path:
        path = Path(run_dir) / SNAPSHOT_FILE
        path.parent.mkdir(parents=True, exist_ok=True)
        arrays = {"iteration": np.array(iteration), "params": np.asarray(params)}
        if gradient is not None:
            arrays["gradient"] = np.asarray(gradient)
        np.savez(path, **arrays)
        logger.warning(f"non-finite snapshot of iteration {iteration} kept at {path}")
        return path

    @staticmethod
    def save_correlation_field(run_dir: Path, field: CorrelationField) -> Path:
        return write_csv(
            Path(run_dir) / CORRELATION_FILE,
            ["x", "t", "G"],
            [field.points[:, 0], field.points[:, -1], field.values],
        )

    @staticmethod
    def save_failure_mask(run_dir: Path, points: np.ndarray, mask: np.ndarray) -> Path:
        return write_csv(
            Path(run_dir) / FAILURE_MASK_FILE,
            ["x", "t", "failed"],
            [points[:, 0], points[:, -1], np.asarray(mask, dtype=np.float64)],
            integer_columns=("failed",),
        )

    @staticmethod
    def save_dynamics(run_dir: Path, rows: list[DynamicsRow]) -> Path:
        table = [np.array([getattr(row, name) for row in rows], dtype=np.float64) for name in DYNAMICS_COLUMNS]
        return write_csv(Path(run_dir) / DYNAMICS_FILE, DYNAMICS_COLUMNS, table, integer_columns=("iteration",))

    @staticmethod
    def save_fem_trace(run_dir: Path, history: np.ndarray) -> Path:
        """Long format: one row per (iteration, node) with the nodal value."""
        history = np.asarray(history, dtype=np.float64)
        n_iter, n_nodes = history.shape
        iterations, nodes = np.meshgrid(np.arange(n_iter), np.arange(1, n_nodes + 1), indexing="ij")
        return write_csv(
            Path(run_dir) / FEM_TRACE_FILE,
            ["iter", "node", "value"],
            [iterations, nodes, history],
            integer_columns=("iter", "node"),
        )
