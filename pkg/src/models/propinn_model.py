"""
ProPINN: shared projector, differential perturbation, multi-region mixing, head.

    z_point    = P(x)
    z_region^r = mean_i P(x + delta_r^i)              r = 1 .. num_scales
               = P_1(mean_i P_0(x + delta_r^i))      P_1 is affine
    z          = M([z_point, z_region^1, ...])        along the region axis, per channel
    u          = H(z)

The perturbed points stay on the differentiation path, so the projector
receives gradients from every point of every region.
"""

from autodiff.jet import JetTensor, activation
from autodiff.params import ParamLayout
from autodiff.tensor import Tensor

# exceptions
from exceptions.ConfigurationException import PerturbationMismatchError
from models.base_model import FieldModel
from models.layers import affine_chain, affine_shapes
from models.perturbation import PerturbationBatch, sample_perturbations
from schemas.model_schema import ProPINNConfig


class ProPINNModel(FieldModel):
    def __init__(self, config: ProPINNConfig, perturbations: PerturbationBatch | None = None):
        self.config = config
        self.input_dim = config.input_dim
        self.output_dim = config.output_dim
        self.name = "propinn"
        self._act = activation(config.activation)
        head_widths = (
            (config.d_model,)
            + (config.head_hidden,) * (config.head_depth - 1)
            + (config.output_dim,)
        )
        self._layout = ParamLayout.from_shapes(
            affine_shapes("projector", (config.input_dim, config.projector_hidden, config.d_model))
            + affine_shapes("mixer", (1 + config.num_scales, config.mixer_hidden, 1))
            + affine_shapes("head", head_widths)
        )
        if perturbations is None:
            perturbations = sample_perturbations(config, seed=0)
        self._check(perturbations)
        # sorted offsets make the mean pooling independent of their order
        self.perturbations = perturbations.canonical()

    def _check(self, batch: PerturbationBatch) -> None:
        if batch.num_scales != self.config.num_scales:
            raise PerturbationMismatchError(
                f"model has {self.config.num_scales} scales, perturbations have {batch.num_scales}"
            )
        if batch.dim != self.input_dim:
            raise PerturbationMismatchError(
                f"perturbations live in {batch.dim} dimensions, model input has {self.input_dim}"
            )
        for scale, (bound, expected) in enumerate(
            zip(batch.region_sizes, self.config.region_sizes)
        ):
            if bound > expected:
                raise PerturbationMismatchError(
                    f"scale {scale}: region size {bound} exceeds configured {expected}"
                )

    def with_perturbations(self, batch: PerturbationBatch) -> "ProPINNModel":
        return ProPINNModel(self.config, batch)

    @property
    def layout(self) -> ParamLayout:
        return self._layout

    def _hidden(self, weights: dict[str, Tensor], jet: JetTensor) -> JetTensor:
        return self._act(jet.affine(weights["projector0.weight"], weights["projector0.bias"]))

    def _lift(self, weights: dict[str, Tensor], hidden: JetTensor) -> JetTensor:
        return hidden.affine(weights["projector1.weight"], weights["projector1.bias"])

    def pooled_hidden(self, weights: dict[str, Tensor], inputs: JetTensor) -> list[JetTensor]:
        """Mean first-layer projector activations over each region, (..., projector_hidden)."""
        batch_shape = inputs.value_shape[:-1]
        # (..., k, dim): every point with all of its offsets
        expanded = inputs.reshape(*batch_shape, 1, self.input_dim)
        return [
            self._hidden(weights, expanded + offsets).mean(axis=-2)
            for offsets in self.perturbations.offsets
        ]

    def jet_apply(self, weights: dict[str, Tensor], inputs: JetTensor) -> JetTensor:
        representations = [self._lift(weights, self._hidden(weights, inputs))]
        # the second projector layer is affine and commutes with the mean
        for pooled in self.pooled_hidden(weights, inputs):
            z_region = self._lift(weights, pooled)
            if self.config.detach_perturbations:
                z_region = z_region.detach()
            representations.append(z_region)
        stacked = JetTensor.stack(representations, axis=-1)
        mixed = affine_chain(weights, "mixer", 2, stacked, self._act).coordinate(0)
        return affine_chain(weights, "head", self.config.head_depth, mixed, self._act)

    def describe(self) -> dict:
        return super().describe() | {
            "region_sizes": list(self.config.region_sizes),
            "perturb_counts": list(self.perturbations.counts),
            "detach_perturbations": self.config.detach_perturbations,
        }
