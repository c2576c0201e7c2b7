from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

# exceptions
from exceptions.ConfigurationException import PerturbationMismatchError
from schemas.model_schema import ProPINNConfig


@dataclass(frozen=True, eq=False)
class PerturbationBatch:
    """Offsets delta_r^i per scale: ``offsets[r]`` has shape (k_r, d+1)."""

    offsets: tuple[np.ndarray, ...]
    region_sizes: tuple[float, ...]
    seed: Any = None

    def __post_init__(self):
        if len(self.offsets) != len(self.region_sizes):
            raise PerturbationMismatchError(
                f"{len(self.offsets)} offset sets for {len(self.region_sizes)} region sizes"
            )
        frozen = []
        for scale, (block, bound) in enumerate(zip(self.offsets, self.region_sizes)):
            block = np.array(block, dtype=np.float64)
            if block.ndim != 2:
                raise PerturbationMismatchError(f"offsets of scale {scale} must be (k, dim)")
            if block.size and np.max(np.abs(block)) > bound:
                raise PerturbationMismatchError(
                    f"offsets of scale {scale} leave the region [-{bound}, {bound}]"
                )
            block.setflags(write=False)
            frozen.append(block)
        object.__setattr__(self, "offsets", tuple(frozen))
        object.__setattr__(self, "region_sizes", tuple(float(r) for r in self.region_sizes))

    @property
    def num_scales(self) -> int:
        return len(self.offsets)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(block.shape[0] for block in self.offsets)

    @property
    def dim(self) -> int:
        return self.offsets[0].shape[1]

    def max_abs(self, scale: int) -> float:
        block = self.offsets[scale]
        return float(np.max(np.abs(block))) if block.size else 0.0

    def canonical(self) -> "PerturbationBatch":
        """Offsets sorted lexicographically within each scale."""
        ordered = []
        for block in self.offsets:
            keys = tuple(block[:, a] for a in reversed(range(block.shape[1])))
            ordered.append(block[np.lexsort(keys)])
        return PerturbationBatch(tuple(ordered), self.region_sizes, self.seed)

    def permuted(self, scale: int, order: Sequence[int]) -> "PerturbationBatch":
        blocks = list(self.offsets)
        blocks[scale] = blocks[scale][np.asarray(order)]
        return PerturbationBatch(tuple(blocks), self.region_sizes, self.seed)

    def all_offsets(self) -> np.ndarray:
        return np.concatenate(self.offsets, axis=0)

    @classmethod
    def zeros(cls, region_sizes, counts, dim: int) -> "PerturbationBatch":
        return cls(tuple(np.zeros((k, dim)) for k in counts), tuple(region_sizes))


def sample_offsets(
    region_sizes: Sequence[float],
    counts: Sequence[int],
    dim: int,
    seed,
) -> PerturbationBatch:
    """i.i.d. uniform offsets on [-R_r, R_r]^dim; ``seed`` is anything ``default_rng`` takes."""
    rng = np.random.default_rng(seed)
    blocks = tuple(
        rng.uniform(-bound, bound, size=(count, dim)) if bound > 0 else np.zeros((count, dim))
        for bound, count in zip(region_sizes, counts)
    )
    return PerturbationBatch(blocks, tuple(region_sizes), seed)


def sample_perturbations(config: ProPINNConfig, seed) -> PerturbationBatch:
    return sample_offsets(config.region_sizes, config.counts, config.input_dim, seed)
