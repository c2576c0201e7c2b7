from autodiff.jet import JetTensor, activation
from autodiff.params import ParamLayout
from autodiff.tensor import Tensor
from models.base_model import FieldModel
from models.layers import affine_chain, affine_shapes
from schemas.model_schema import MLPConfig


class MLPModel(FieldModel):
    """Vanilla PINN: a plain multilayer perceptron."""

    def __init__(self, config: MLPConfig):
        self.config = config
        self.input_dim = config.input_dim
        self.output_dim = config.output_dim
        self.name = "pinn"
        self._act = activation(config.activation)
        self._layout = ParamLayout.from_shapes(affine_shapes("layer", config.widths))

    @property
    def layout(self) -> ParamLayout:
        return self._layout

    def jet_apply(self, weights: dict[str, Tensor], inputs: JetTensor) -> JetTensor:
        return affine_chain(weights, "layer", self.config.depth, inputs, self._act)

    def describe(self) -> dict:
        return super().describe() | {"widths": list(self.config.widths)}
