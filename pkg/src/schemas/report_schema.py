from pydantic import BaseModel, ConfigDict, Field

# Schemas of everything the runner writes as JSON.


class MetricsReport(BaseModel):
    """Errors of a prediction against the reference on one grid.

    ``rmae`` and ``rrmse`` are both taken under a square
    root; ``relative_l1`` is the usual un-rooted relative L1 error.
    """

    model_config = ConfigDict(frozen=True)
    rmae: float = Field(ge=0)
    rrmse: float = Field(ge=0)
    relative_l1: float = Field(ge=0)
    l1_numerator: float = Field(ge=0)
    n_points: int = Field(ge=1)
    final_losses: dict[str, float] = {}
    wall_time_s: float = 0.0
    iterations: int = 0


class AggregateReport(BaseModel):
    runs: list[MetricsReport]
    seeds: list[int]
    mean: dict[str, float]
    std: dict[str, float]


class ComparisonReport(BaseModel):
    """Paired one-sided test that A has lower error than B."""

    metric: str
    a: AggregateReport
    b: AggregateReport
    t_statistic: float | None
    p_value: float | None
