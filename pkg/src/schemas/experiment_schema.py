from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

# configuration objects
from core.config import EVALUATION_SETTINGS, PROFILE_SETTINGS
from schemas.model_schema import MLPConfig, ModelConfig
from schemas.problem_schema import CollocationSpec, GridSpec, LossWeights
from schemas.training_schema import TrainingSchedule

# Schema of one experiment file. Everything a run needs is here, so the
# resolved echo written next to the results is enough to re-run it.


class SeedConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    init: int
    perturbation: int
    sampling: int

    def shifted(self, offset: int) -> "SeedConfig":
        return SeedConfig(
            init=self.init + offset,
            perturbation=self.perturbation + offset,
            sampling=self.sampling + offset,
        )


class DiagnosticsConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    correlation_map: bool = False
    positive_ratio: bool = False
    boost_check: bool = False
    dynamics: bool = False
    neighbor_distance: float = Field(EVALUATION_SETTINGS.neighbor_distance, gt=0)
    correlation_grid: GridSpec = GridSpec(
        n_x=EVALUATION_SETTINGS.correlation_n_x, n_t=EVALUATION_SETTINGS.correlation_n_t
    )
    dynamics_grid: GridSpec = GridSpec(
        n_x=EVALUATION_SETTINGS.dynamics_n_x, n_t=EVALUATION_SETTINGS.dynamics_n_t
    )
    # absolute failure threshold; None means failure_eps_factor * median field value
    failure_eps: float | None = Field(None, gt=0)
    positive_ratio_points: int = Field(10_000, ge=1)
    boost_cases: int = Field(200, ge=1)
    boost_region_size: float = Field(0.05, gt=0)


class SweepConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    parameter: str
    values: list[Any] = Field(min_length=1)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    name: str = "experiment"
    problem: str
    model: ModelConfig
    profile: Literal["desk", "paper"] = "desk"
    collocation: CollocationSpec = GridSpec()
    schedule: TrainingSchedule = TrainingSchedule()
    # None: the problem's own weights
    weights: LossWeights | None = None
    seeds: SeedConfig
    evaluation: GridSpec = GridSpec(n_x=EVALUATION_SETTINGS.eval_n_x, n_t=EVALUATION_SETTINGS.eval_n_t)
    output_dir: Path = Path("runs")
    diagnostics: DiagnosticsConfig = DiagnosticsConfig()
    sweep: SweepConfig | None = None

    @model_validator(mode="before")
    @classmethod
    def resolve_profile(cls, data):
        # an MLP without an explicit width takes the width of the profile
        if not isinstance(data, dict):
            return data
        profile = data.get("profile", "desk")
        model = data.get("model")
        if isinstance(model, MLPConfig):
            return {**data, "model": model.for_profile(profile)}
        if isinstance(model, dict) and model.get("kind") == "pinn" and model.get("hidden_width") is None:
            width = PROFILE_SETTINGS.hidden_width(profile)
            return {**data, "model": {**model, "hidden_width": width}}
        return data
