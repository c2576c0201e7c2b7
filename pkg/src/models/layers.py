from collections.abc import Callable, Sequence

import numpy as np

from autodiff.jet import JetTensor
from autodiff.params import ParamLayout
from autodiff.tensor import Tensor


def affine_shapes(prefix: str, widths: Sequence[int]) -> list[tuple[str, tuple[int, ...]]]:
    """Layout records for a chain of affine layers ``widths[0] -> ... -> widths[-1]``."""
    shapes = []
    for i, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:])):
        shapes.append((f"{prefix}{i}.weight", (fan_in, fan_out)))
        shapes.append((f"{prefix}{i}.bias", (fan_out,)))
    return shapes


def affine_chain(
    weights: dict[str, Tensor],
    prefix: str,
    n_layers: int,
    jet: JetTensor,
    act: Callable,
) -> JetTensor:
    """Affine layers with ``act`` between them (none after the last)."""
    for i in range(n_layers):
        jet = jet.affine(weights[f"{prefix}{i}.weight"], weights[f"{prefix}{i}.bias"])
        if i < n_layers - 1:
            jet = act(jet)
    return jet


def glorot_uniform(layout: ParamLayout, rng: np.random.Generator) -> np.ndarray:
    """Glorot-uniform weights, zero biases, drawn in layout order."""
    values = np.zeros(layout.size)
    for entry in layout.entries:
        if entry.name.endswith(".weight") and len(entry.shape) == 2:
            fan_in, fan_out = entry.shape
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            values[entry.offset : entry.stop] = rng.uniform(-limit, limit, entry.size)
        elif entry.name.endswith(".bias"):
            continue
        else:
            values[entry.offset : entry.stop] = 1.0
    return values
