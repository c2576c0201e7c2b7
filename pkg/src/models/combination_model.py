from collections.abc import Sequence

import numpy as np

from autodiff.jet import JetTensor
from autodiff.params import ParamLayout
from autodiff.tensor import Tensor

# exceptions
from exceptions.ConfigurationException import DimensionMismatchError
from models.base_model import FieldModel


class ShiftedModel(FieldModel):
    """x -> base(x + offset), on the parameters of ``base``."""

    def __init__(self, base: FieldModel, offset):
        offset = np.asarray(offset, dtype=np.float64)
        if offset.shape != (base.input_dim,):
            raise DimensionMismatchError(
                f"offset of shape {offset.shape} for a model with {base.input_dim} inputs"
            )
        self.base = base
        self.offset = offset
        self.input_dim = base.input_dim
        self.output_dim = base.output_dim
        self.name = f"{base.name}_shifted"

    @property
    def layout(self) -> ParamLayout:
        return self.base.layout

    def jet_apply(self, weights: dict[str, Tensor], inputs: JetTensor) -> JetTensor:
        return self.base.jet_apply(weights, inputs + self.offset)


class LinearCombinationModel(FieldModel):
    """sum_i c_i * model_i(x), all models sharing one parameter vector."""

    def __init__(self, terms: Sequence[tuple[float, FieldModel]], name: str = "combination"):
        if not terms:
            raise DimensionMismatchError("a linear combination needs at least one model")
        first = terms[0][1]
        for _, model in terms:
            if model.layout != first.layout:
                raise DimensionMismatchError("combined models must share one parameter layout")
            if (model.input_dim, model.output_dim) != (first.input_dim, first.output_dim):
                raise DimensionMismatchError("combined models must share input/output sizes")
        self.terms = tuple((float(c), model) for c, model in terms)
        self.input_dim = first.input_dim
        self.output_dim = first.output_dim
        self.name = name

    @property
    def layout(self) -> ParamLayout:
        return self.terms[0][1].layout

    def jet_apply(self, weights: dict[str, Tensor], inputs: JetTensor) -> JetTensor:
        total = None
        for coefficient, model in self.terms:
            part = model.jet_apply(weights, inputs) * coefficient
            total = part if total is None else total + part
        return total


def region_lifted_model(base: FieldModel, offsets) -> LinearCombinationModel:
    """u_region(x) = u(x) + (1/k) * sum_i u(x + delta_i)."""
    offsets = np.atleast_2d(np.asarray(offsets, dtype=np.float64))
    k = offsets.shape[0]
    terms = [(1.0, base)] + [(1.0 / k, ShiftedModel(base, delta)) for delta in offsets]
    return LinearCombinationModel(terms, name=f"{base.name}_region")
