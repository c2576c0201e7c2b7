from abc import ABC, abstractmethod

import numpy as np

from autodiff.jet import JetTensor
from autodiff.params import FlatParams, ParamLayout
from autodiff.tensor import Tensor
from models.layers import glorot_uniform


class FieldModel(ABC):
    """A smooth map from (d+1) input coordinates to m outputs.

    Models are immutable value objects: evaluation never changes them, so one
    instance can be evaluated from several threads on read-only parameters.
    """

    input_dim: int
    output_dim: int
    name: str = "field"

    @property
    @abstractmethod
    def layout(self) -> ParamLayout: ...

    @abstractmethod
    def jet_apply(self, weights: dict[str, Tensor], inputs: JetTensor) -> JetTensor:
        """Map an input jet with value shape (..., input_dim) to (..., output_dim)."""

    def init_params(self, seed: int) -> FlatParams:
        rng = np.random.default_rng(seed)
        return FlatParams(glorot_uniform(self.layout, rng), self.layout)

    def describe(self) -> dict:
        return {"name": self.name, "parameters": self.layout.size}
