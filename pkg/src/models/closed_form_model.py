from collections.abc import Callable

import numpy as np

from autodiff.jet import JetTensor
from autodiff.params import FlatParams, ParamLayout
from autodiff.tensor import Tensor
from models.base_model import FieldModel

FieldExpression = Callable[[JetTensor], JetTensor]


class ClosedFormModel(FieldModel):
    """u(x) = a * f(x) for a jet-algebra expression ``f`` and one parameter ``a``.

    With ``frozen=True`` the amplitude is read but never differentiated, so
    the output is constant in theta.
    """

    def __init__(
        self,
        fn: FieldExpression,
        input_dim: int = 2,
        output_dim: int = 1,
        amplitude: float = 1.0,
        frozen: bool = False,
        name: str = "closed_form",
    ):
        self.fn = fn
        self.input_dim = input_dim
        self.output_dim = output_dim
        self.amplitude = amplitude
        self.frozen = frozen
        self.name = name
        self._layout = ParamLayout.from_shapes([("amplitude", (1,))])

    @property
    def layout(self) -> ParamLayout:
        return self._layout

    def init_params(self, seed: int = 0) -> FlatParams:
        return FlatParams(np.array([self.amplitude]), self._layout)

    def jet_apply(self, weights: dict[str, Tensor], inputs: JetTensor) -> JetTensor:
        field = self.fn(inputs)
        if len(field.value_shape) == len(inputs.value_shape) - 1:
            field = field.reshape(*field.value_shape, 1)
        amplitude = weights["amplitude"]
        if self.frozen:
            amplitude = amplitude.detach()
        return field * amplitude
