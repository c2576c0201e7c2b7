"""
Order-2 axis-aligned input jets carried on the reverse-mode tape.

A ``JetTensor`` stacks, along a leading slot axis, the value of a field and
its pure input derivatives:

    slot 0                 value
    slots 1 .. dim         d/dx_a            (order >= 1)
    slots dim+1 .. 2*dim   d^2/dx_a^2        (order == 2)

Linear maps act on every slot alike; smooth nonlinearities use the chain
rule  f(g)'' = f'(g) g'' + f''(g) (g')^2. Since every slot is a ``Tensor``,
parameter gradients of any expression in the slots are exact (forward jets
nested inside reverse accumulation). Mixed derivatives d^2/dx dt are not
carried.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from autodiff.tensor import Tensor

# exceptions
from exceptions.AutodiffException import (
    UnsupportedOrderError,
    UnsupportedPrimitiveError,
)
from exceptions.ConfigurationException import UnknownNameError

MAX_ORDER = 2


def slot_count(dim: int, order: int) -> int:
    return 1 + order * dim


@dataclass(frozen=True)
class Jet2:
    """Value and pure derivatives of one scalar channel at one point."""

    value: float
    d1: np.ndarray
    d2: np.ndarray


@dataclass(frozen=True, eq=False)
class JetTensor:
    __array_ufunc__ = None

    data: Tensor
    dim: int
    order: int

    @classmethod
    def seed(cls, points: np.ndarray, order: int) -> "JetTensor":
        """Identity jet of input coordinates ``points`` with shape (..., dim)."""
        if order > MAX_ORDER or order < 0:
            raise UnsupportedOrderError(
                f"input derivatives of order {order} are not supported (max {MAX_ORDER})"
            )
        points = np.asarray(points, dtype=np.float64)
        dim = points.shape[-1]
        slots = [points]
        if order >= 1:
            eye = np.broadcast_to(np.eye(dim)[:, None], (dim,) + points.shape)
            eye = eye.reshape((dim,) + points.shape)
            slots.extend(eye)
        if order == 2:
            slots.extend(np.zeros((dim,) + points.shape))
        return cls(Tensor(np.stack(slots)), dim, order)

    # ---------------------------------------------------------------- slots

    @property
    def slots(self) -> int:
        return slot_count(self.dim, self.order)

    @property
    def value(self) -> Tensor:
        return self.data[0]

    def d1(self, axis: int) -> Tensor:
        if self.order < 1:
            raise UnsupportedOrderError("jet carries no first derivatives")
        return self.data[1 + axis]

    def d2(self, axis: int) -> Tensor:
        if self.order < 2:
            raise UnsupportedOrderError("jet carries no second derivatives")
        return self.data[1 + self.dim + axis]

    @property
    def value_shape(self) -> tuple[int, ...]:
        return self.data.shape[1:]

    def _value_mask(self) -> np.ndarray:
        mask = np.zeros((self.slots,) + (1,) * (self.data.ndim - 1))
        mask[0] = 1.0
        return mask

    def _wrap(self, data: Tensor) -> "JetTensor":
        return JetTensor(data, self.dim, self.order)

    # ---------------------------------------------------------------- linear ops

    def affine(self, weight: Tensor, bias: Tensor | None = None) -> "JetTensor":
        out = self.data @ weight
        if bias is not None:
            out = out + self._value_mask() * bias
        return self._wrap(out)

    def detach(self) -> "JetTensor":
        return self._wrap(self.data.detach())

    def index(self, index) -> "JetTensor":
        if not isinstance(index, tuple):
            index = (index,)
        return self._wrap(self.data[(slice(None),) + index])

    def mean(self, axis: int) -> "JetTensor":
        return self._wrap(self.data.mean(axis=self._data_axis(axis)))

    def reshape(self, *value_shape) -> "JetTensor":
        return self._wrap(self.data.reshape((self.slots,) + tuple(value_shape)))

    def coordinate(self, i: int) -> "JetTensor":
        """Component ``i`` of the last value axis."""
        return self._wrap(self.data[..., i])

    def _data_axis(self, axis: int) -> int:
        return axis + 1 if axis >= 0 else axis

    @staticmethod
    def stack(jets: Sequence["JetTensor"], axis: int) -> "JetTensor":
        first = jets[0]
        data_axis = first._data_axis(axis)
        return first._wrap(Tensor.stack([j.data for j in jets], axis=data_axis))

    # ---------------------------------------------------------------- nonlinear ops

    def apply(self, derivatives: Callable[[Tensor], tuple[Tensor, Tensor, Tensor]]):
        """Chain rule for an elementwise function given (f, f', f'') at the value."""
        value = self.value
        f0, f1, f2 = derivatives(value)
        slots = [f0.reshape((1,) + f0.shape)]
        if self.order >= 1:
            g1 = self.data[1 : 1 + self.dim]
            slots.append(f1 * g1)
        if self.order == 2:
            g2 = self.data[1 + self.dim :]
            slots.append(f1 * g2 + f2 * g1.square())
        return self._wrap(Tensor.concat(slots, axis=0))

    def __add__(self, other):
        if isinstance(other, JetTensor):
            return self._wrap(self.data + other.data)
        return self._wrap(self.data + self._value_mask() * other)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.data)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, JetTensor):
            # constant in the inputs: scales every slot
            return self._wrap(self.data * other)
        u, v = self, other
        product = u.value * v.value
        slots = [product.reshape((1,) + product.shape)]
        if self.order >= 1:
            du, dv = u.data[1 : 1 + self.dim], v.data[1 : 1 + self.dim]
            slots.append(du * v.value + u.value * dv)
        if self.order == 2:
            ddu, ddv = u.data[1 + self.dim :], v.data[1 + self.dim :]
            slots.append(ddu * v.value + 2.0 * du * dv + u.value * ddv)
        return self._wrap(Tensor.concat(slots, axis=0))

    __rmul__ = __mul__

    def reciprocal(self) -> "JetTensor":
        def derivatives(v):
            r = v.reciprocal()
            r2 = r.square()
            return r, -r2, 2.0 * r2 * r

        return self.apply(derivatives)

    def __truediv__(self, other):
        if isinstance(other, (JetTensor, Tensor)):
            return self * other.reciprocal()
        return self._wrap(self.data * (1.0 / np.asarray(other, dtype=np.float64)))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def square(self) -> "JetTensor":
        return self * self


# -------------------------------------------------------------------- elementwise


def _tanh_derivatives(v: Tensor):
    s = v.tanh()
    ds = 1.0 - s.square()
    return s, ds, -2.0 * s * ds


def _sin_derivatives(v: Tensor):
    s, c = v.sin(), v.cos()
    return s, c, -s


def _cos_derivatives(v: Tensor):
    s, c = v.sin(), v.cos()
    return c, -s, -c


def _wave_derivatives(v: Tensor):
    s, c = v.sin(), v.cos()
    w = s + c
    return w, c - s, -w


def _exp_derivatives(v: Tensor):
    e = v.exp()
    return e, e, e


def _sin_plus_cos(x):
    return np.sin(x) + np.cos(x)


def _elementwise(numpy_fn, derivatives):
    def fn(x):
        if isinstance(x, JetTensor):
            return x.apply(derivatives)
        if isinstance(x, Tensor):
            return derivatives(x)[0]
        return numpy_fn(x)

    fn.__name__ = numpy_fn.__name__
    return fn


tanh = _elementwise(np.tanh, _tanh_derivatives)
sin = _elementwise(np.sin, _sin_derivatives)
cos = _elementwise(np.cos, _cos_derivatives)
exp = _elementwise(np.exp, _exp_derivatives)
# sin + cos: never saturates, wave(0) = 1
wave = _elementwise(_sin_plus_cos, _wave_derivatives)

SMOOTH_ACTIVATIONS: dict[str, Callable] = {"tanh": tanh, "sin": sin, "wave": wave}
NON_SMOOTH_ACTIVATIONS = frozenset({"relu", "abs", "leaky_relu", "hardtanh"})


def activation(name: str) -> Callable:
    """Look up a twice-differentiable activation by name."""
    if name in NON_SMOOTH_ACTIVATIONS:
        raise UnsupportedPrimitiveError(
            f"activation '{name}' is not twice differentiable; "
            f"use one of {sorted(SMOOTH_ACTIVATIONS)}"
        )
    if name not in SMOOTH_ACTIVATIONS:
        raise UnknownNameError(f"unknown activation '{name}'")
    return SMOOTH_ACTIVATIONS[name]
