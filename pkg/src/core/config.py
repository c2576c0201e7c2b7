from pydantic import BaseModel
from os import getenv

# path worker
from pathlib import Path


class NumericSettings(BaseModel):
    # thread pool size for chunked evaluation; chunking is fixed by chunk_size,
    # so results never depend on this number
    num_threads: int = int(getenv("PROPINN_NUM_THREADS", "1"))
    chunk_size: int = int(getenv("PROPINN_CHUNK_SIZE", "512"))
    dtype: str = "float64"


class LbfgsSettings(BaseModel):
    history_size: int = 50
    c1: float = 1e-4
    c2: float = 0.9
    max_line_search_evals: int = 25
    curvature_eps: float = 1e-10
    fallback_step: float = 1e-3
    # relative mismatch below which a line is treated as quadratic
    quadratic_rtol: float = 1e-10


class AdamSettings(BaseModel):
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


class ProfileSettings(BaseModel):
    desk_hidden_width: int = 128
    paper_hidden_width: int = 512
    pinn_depth: int = 4

    def hidden_width(self, profile: str) -> int:
        return self.paper_hidden_width if profile == "paper" else self.desk_hidden_width


class EvaluationSettings(BaseModel):
    # held-out grid, distinct from the 101x101 training grid
    eval_n_x: int = 256
    eval_n_t: int = 100
    metrics_every: int = 100
    correlation_n_x: int = 101
    correlation_n_t: int = 101
    neighbor_distance: float = 1e-2
    failure_eps_factor: float = 1e-3
    dynamics_n_x: int = 21
    dynamics_n_t: int = 21


class ReferenceSettings(BaseModel):
    reference_dir: Path = Path(getenv("PROPINN_REFERENCE_DIR", "data"))
    allen_cahn_file: str = "allen_cahn_reference.csv"
    resolution: int = 512
    n_frames: int = 201
    timestep: float = 1e-4

    @property
    def allen_cahn_path(self) -> Path:
        return self.reference_dir / self.allen_cahn_file


class LoggerSettings(BaseModel):
    log_dir: Path = Path(getenv("PROPINN_LOG_DIR", "logs"))
    to_file: bool = getenv("PROPINN_LOG_TO_FILE", "1") != "0"
    level: str = getenv("PROPINN_LOG_LEVEL", "DEBUG")
    rotation: str = "0:00"
    retention: str = "2 month"
    compression: str = "zip"
    format: str = "{time} {level} {extra[object_type]} {message}"


class CsvSettings(BaseModel):
    significant_digits: int = 17
    line_terminator: str = "\n"


NUMERIC_SETTINGS = NumericSettings()
LBFGS_SETTINGS = LbfgsSettings()
ADAM_SETTINGS = AdamSettings()
PROFILE_SETTINGS = ProfileSettings()
EVALUATION_SETTINGS = EvaluationSettings()
REFERENCE_SETTINGS = ReferenceSettings()
LOGGER_SETTINGS = LoggerSettings()
CSV_SETTINGS = CsvSettings()
