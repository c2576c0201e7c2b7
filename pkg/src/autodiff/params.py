from collections.abc import Iterable
from dataclasses import dataclass
from math import prod

import numpy as np

from autodiff.tensor import Tensor

# exceptions
from exceptions.ConfigurationException import (
    ConfigurationException,
    DimensionMismatchError,
)

# hashing of parameter snapshots
from utils.hash_utils import array_hash


@dataclass(frozen=True)
class LayoutEntry:
    name: str
    offset: int
    shape: tuple[int, ...]

    @property
    def size(self) -> int:
        return prod(self.shape)

    @property
    def stop(self) -> int:
        return self.offset + self.size


@dataclass(frozen=True)
class ParamLayout:
    entries: tuple[LayoutEntry, ...]

    def __post_init__(self):
        offset = 0
        names = set()
        for entry in self.entries:
            if entry.offset != offset:
                raise ConfigurationException(
                    f"layout entry {entry.name} starts at {entry.offset}, expected {offset}"
                )
            if entry.name in names:
                raise ConfigurationException(f"duplicate layout entry {entry.name}")
            names.add(entry.name)
            offset = entry.stop

    @classmethod
    def from_shapes(cls, shapes: Iterable[tuple[str, tuple[int, ...]]]) -> "ParamLayout":
        entries, offset = [], 0
        for name, shape in shapes:
            entry = LayoutEntry(name, offset, tuple(shape))
            entries.append(entry)
            offset = entry.stop
        return cls(tuple(entries))

    @property
    def size(self) -> int:
        return self.entries[-1].stop if self.entries else 0

    def __getitem__(self, name: str) -> LayoutEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def names(self) -> list[str]:
        return [entry.name for entry in self.entries]

    def split(self, theta: Tensor) -> dict[str, Tensor]:
        """Named views of the flat parameter tensor, all on the same tape."""
        return {
            entry.name: theta[entry.offset : entry.stop].reshape(entry.shape)
            for entry in self.entries
        }

    def to_records(self) -> list[dict]:
        return [
            {"name": e.name, "offset": e.offset, "shape": list(e.shape)}
            for e in self.entries
        ]

    @classmethod
    def from_records(cls, records: list[dict]) -> "ParamLayout":
        return cls(
            tuple(
                LayoutEntry(r["name"], int(r["offset"]), tuple(r["shape"]))
                for r in records
            )
        )


@dataclass(frozen=True, eq=False)
class FlatParams:
    """theta: one float64 vector plus the layout naming its pieces."""

    values: np.ndarray
    layout: ParamLayout

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size != self.layout.size:
            raise DimensionMismatchError(
                f"parameter vector of shape {values.shape} does not match "
                f"layout size {self.layout.size}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def view(self, name: str) -> np.ndarray:
        entry = self.layout[name]
        return self.values[entry.offset : entry.stop].reshape(entry.shape)

    def with_values(self, values: np.ndarray) -> "FlatParams":
        return FlatParams(np.array(values, dtype=np.float64), self.layout)

    def replace(self, name: str, value: np.ndarray) -> "FlatParams":
        entry = self.layout[name]
        values = self.values.copy()
        values[entry.offset : entry.stop] = np.asarray(value, dtype=np.float64).ravel()
        return FlatParams(values, self.layout)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def content_hash(self) -> str:
        return array_hash(self.values)
