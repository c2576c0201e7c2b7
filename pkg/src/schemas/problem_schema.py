from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field

# Schemas of loss weights and collocation descriptors.


class LossWeights(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    res: float = Field(1.0, ge=0, allow_inf_nan=False)
    ic: float = Field(1.0, ge=0, allow_inf_nan=False)
    bc: float = Field(1.0, ge=0, allow_inf_nan=False)


class GridSpec(BaseModel):
    """Equispaced n_x by n_t grid including the domain edges."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["grid"] = "grid"
    n_x: int = 101
    n_t: int = 101


class RandomSpec(BaseModel):
    """Uniform samples: n interior points, n_ic initial points, n_bc boundary pairs."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["random"] = "random"
    n: int = 10201
    n_ic: int = 101
    n_bc: int = 101
    # None: the sampling seed of the experiment
    seed: int | None = None


CollocationSpec = Annotated[GridSpec | RandomSpec, Field(discriminator="kind")]
