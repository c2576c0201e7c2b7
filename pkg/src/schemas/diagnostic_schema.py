import numpy as np
from pydantic import BaseModel, ConfigDict, Field

# Schemas of diagnostic results. Field-valued results keep numpy arrays.


class CorrelationField(BaseModel):
    """G between each grid point and the point shifted by ``offset``."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)
    points: np.ndarray
    offset: np.ndarray
    values: np.ndarray
    model_name: str
    params_hash: str

    def summary(self) -> dict[str, float]:
        return {
            "mean": float(np.mean(self.values)),
            "median": float(np.median(self.values)),
            "min": float(np.min(self.values)),
            "max": float(np.max(self.values)),
        }


class StiffnessEstimate(BaseModel):
    x: list[float]
    x_prime: list[float]
    lambdas: list[float]
    values: list[float]
    limit: float = Field(ge=0)


class BoostResult(BaseModel):
    g_point: float = Field(ge=0)
    g_region: float = Field(ge=0)
    holds: bool
    assumption_ok: bool
    scale: float


class BoostSummary(BaseModel):
    cases: int
    assumption_ok: int
    holds_when_ok: int
    mean_gain: float | None = None


class DynamicsRow(BaseModel):
    iteration: int
    mean_g: float
    median_g: float
    failed_fraction: float
