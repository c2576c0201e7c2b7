from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field

# configuration objects
from core.config import ADAM_SETTINGS, EVALUATION_SETTINGS, LBFGS_SETTINGS

# Schemas of the optimizer schedule. A schedule is a sequence of phases run
# one after the other on the same parameters, e.g. Adam then L-BFGS.


class AdamPhase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["adam"] = "adam"
    iterations: int = Field(1000, ge=0)
    lr: float = Field(ADAM_SETTINGS.lr, gt=0)
    beta1: float = Field(ADAM_SETTINGS.beta1, ge=0, lt=1)
    beta2: float = Field(ADAM_SETTINGS.beta2, ge=0, lt=1)
    eps: float = Field(ADAM_SETTINGS.eps, gt=0)


class LbfgsPhase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["lbfgs"] = "lbfgs"
    iterations: int = Field(1000, ge=0)
    history_size: int = Field(LBFGS_SETTINGS.history_size, ge=0)
    c1: float = Field(LBFGS_SETTINGS.c1, gt=0, lt=1)
    c2: float = Field(LBFGS_SETTINGS.c2, gt=0, lt=1)
    max_line_search_evals: int = Field(LBFGS_SETTINGS.max_line_search_evals, ge=1)


OptimizerPhase = Annotated[AdamPhase | LbfgsPhase, Field(discriminator="kind")]


class TrainingSchedule(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    phases: tuple[OptimizerPhase, ...] = (LbfgsPhase(),)
    # test metrics (and the dynamics trace, when enabled) every K iterations
    metrics_every: int = Field(EVALUATION_SETTINGS.metrics_every, ge=1)

    @property
    def total_iterations(self) -> int:
        return sum(phase.iterations for phase in self.phases)
