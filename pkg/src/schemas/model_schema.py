from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

# configuration objects
from core.config import PROFILE_SETTINGS

# Schemas of field models. Each one is selected in the experiment file by its
# "kind" and validated here before any model is built.


class MLPConfig(BaseModel):
    """Vanilla PINN: ``depth`` affine layers, ``hidden_width`` channels between them."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["pinn"] = "pinn"
    input_dim: int = Field(2, ge=1)
    hidden_width: int | None = Field(None, ge=1)
    depth: int = Field(PROFILE_SETTINGS.pinn_depth, ge=1)
    output_dim: int = Field(1, ge=1)
    activation: str = "tanh"

    @property
    def widths(self) -> tuple[int, ...]:
        hidden = self.hidden_width or PROFILE_SETTINGS.desk_hidden_width
        return (self.input_dim,) + (hidden,) * (self.depth - 1) + (self.output_dim,)

    def for_profile(self, profile: str) -> "MLPConfig":
        if self.hidden_width is not None:
            return self
        return self.model_copy(update={"hidden_width": PROFILE_SETTINGS.hidden_width(profile)})


class ProPINNConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["propinn"] = "propinn"
    input_dim: int = Field(2, ge=1)
    d_model: int = Field(32, ge=1)
    num_scales: int = Field(3, ge=1)
    region_sizes: tuple[float, ...] = (0.01, 0.05, 0.09)
    perturb_counts: tuple[int, ...] | None = None
    projector_hidden: int = Field(8, ge=1)
    mixer_hidden: int = Field(8, ge=1)
    head_hidden: int = Field(64, ge=1)
    head_depth: int = Field(3, ge=1)
    output_dim: int = Field(1, ge=1)
    # sin + cos keeps the narrow head out of saturation at initialization
    activation: str = "wave"
    # drop the parameter-gradient path through perturbed points (ablation)
    detach_perturbations: bool = False

    @model_validator(mode="after")
    def check_regions(self) -> "ProPINNConfig":
        if len(self.region_sizes) != self.num_scales:
            raise ValueError(
                f"{self.num_scales} scales need {self.num_scales} region sizes, "
                f"got {len(self.region_sizes)}"
            )
        if any(r <= 0 for r in self.region_sizes):
            raise ValueError("region sizes must be positive")
        if any(b <= a for a, b in zip(self.region_sizes, self.region_sizes[1:])):
            raise ValueError("region sizes must be strictly increasing")
        if self.perturb_counts is not None:
            if len(self.perturb_counts) != self.num_scales:
                raise ValueError("one perturbation count per scale is required")
            if any(k < 1 for k in self.perturb_counts):
                raise ValueError("perturbation counts must be positive")
        return self

    @property
    def counts(self) -> tuple[int, ...]:
        """k_r, defaulting to (2r+1)^(d+1) for r = 1..num_scales."""
        if self.perturb_counts is not None:
            return self.perturb_counts
        return tuple((2 * r + 1) ** self.input_dim for r in range(1, self.num_scales + 1))

    def for_profile(self, profile: str) -> "ProPINNConfig":
        return self


ModelConfig = Annotated[MLPConfig | ProPINNConfig, Field(discriminator="kind")]
