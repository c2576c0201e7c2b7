"""
Exact evaluation of field models.

All derivatives are exact: input derivatives come from forward jets, parameter
gradients from reverse accumulation over the tape that carries those jets.
Batched entry points split points into fixed chunks (see ``reduction``) and
combine chunk results with a fixed pairwise tree, so the numbers do not depend
on the number of worker threads.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from autodiff.jet import MAX_ORDER, Jet2, JetTensor
from autodiff.params import FlatParams
from autodiff.reduction import map_chunks, pairwise_sum, pairwise_sum_arrays
from autodiff.tensor import Tensor

# exceptions
from exceptions.AutodiffException import UnsupportedOrderError
from exceptions.ConfigurationException import (
    DimensionMismatchError,
    EmptyCollocationError,
)
from models.base_model import FieldModel


@dataclass(frozen=True)
class ParamGradient:
    """d u_j / d theta_k at one point, shape (m, |theta|)."""

    entries: np.ndarray

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class JetBatch:
    """Jets of all output channels at N points: value (N, m), d1/d2 (dim, N, m)."""

    value: np.ndarray
    d1: np.ndarray | None
    d2: np.ndarray | None

    def at(self, i: int) -> list[Jet2]:
        m = self.value.shape[1]
        dim = 0 if self.d1 is None else self.d1.shape[0]
        d1 = self.d1 if self.d1 is not None else np.zeros((dim,) + self.value.shape)
        d2 = self.d2 if self.d2 is not None else np.zeros((dim,) + self.value.shape)
        return [Jet2(float(self.value[i, j]), d1[:, i, j].copy(), d2[:, i, j].copy()) for j in range(m)]


@dataclass(frozen=True)
class ResidualOperator:
    """A loss-term integrand over one or more output jets.

    ``fn`` receives one ``JetTensor`` per point set and returns the residual,
    shape (n,) or (n, k); ``order`` is the highest input derivative it reads.
    """

    fn: Callable[..., Tensor]
    order: int = 1
    name: str = "residual"


@dataclass(frozen=True)
class LossTerm:
    name: str
    weight: float
    points: tuple[np.ndarray, ...]
    operator: ResidualOperator
    # subtracted from the operator output, shape (n,) or (n, k)
    target: np.ndarray | None = None

    @property
    def n(self) -> int:
        return int(self.points[0].shape[0])


@dataclass(frozen=True)
class LossEvaluation:
    total: float
    terms: dict[str, float]
    gradient: np.ndarray | None = field(default=None, repr=False)


# ---------------------------------------------------------------------- helpers


def _as_points(model: FieldModel, x) -> tuple[np.ndarray, bool]:
    points = np.asarray(x, dtype=np.float64)
    single = points.ndim == 1
    if single:
        points = points[None, :]
    if points.ndim != 2 or points.shape[1] != model.input_dim:
        raise DimensionMismatchError(
            f"model {model.name} takes {model.input_dim} input coordinates, got shape {np.shape(x)}"
        )
    return points, single


def _check_order(order: int) -> None:
    if order > MAX_ORDER or order < 0:
        raise UnsupportedOrderError(
            f"residual needs input derivatives of order {order}; at most {MAX_ORDER} is supported"
        )


def trace(
    model: FieldModel,
    params: FlatParams,
    points: np.ndarray,
    order: int,
    track: bool,
) -> tuple[Tensor, JetTensor]:
    """Build the tape for ``model`` at ``points``; returns (theta leaf, output jet)."""
    if params.layout != model.layout:
        raise DimensionMismatchError(
            f"parameters ({params.layout.size}) do not match model {model.name} "
            f"({model.layout.size})"
        )
    theta = Tensor(params.values, requires_grad=track)
    weights = params.layout.split(theta)
    return theta, model.jet_apply(weights, JetTensor.seed(points, order))


def _leaf_gradient(theta: Tensor) -> np.ndarray:
    return theta.grad if theta.grad is not None else np.zeros(theta.shape)


# ---------------------------------------------------------------------- values and jets


def forward(model: FieldModel, params: FlatParams, x) -> np.ndarray:
    """u_theta(x): shape (m,) for one point, (N, m) for a batch."""
    points, single = _as_points(model, x)

    def chunk(start, stop):
        return trace(model, params, points[start:stop], 0, False)[1].value.data

    values = np.concatenate(map_chunks(chunk, len(points)), axis=0)
    return values[0] if single else values


def input_jets(model: FieldModel, params: FlatParams, x, order: int = 2) -> JetBatch:
    points, _ = _as_points(model, x)
    _check_order(order)

    def chunk(start, stop):
        return trace(model, params, points[start:stop], order, False)[1].data.data

    data = np.concatenate(map_chunks(chunk, len(points)), axis=1)
    dim = model.input_dim
    d1 = data[1 : 1 + dim] if order >= 1 else None
    d2 = data[1 + dim :] if order == 2 else None
    return JetBatch(data[0], d1, d2)


def input_jet(model: FieldModel, params: FlatParams, x) -> list[Jet2]:
    """Value, first and pure second input derivatives per output channel at one point."""
    points, _ = _as_points(model, x)
    return input_jets(model, params, points[:1], order=2).at(0)


def residual_values(
    model: FieldModel,
    params: FlatParams,
    x,
    operator: ResidualOperator,
) -> np.ndarray:
    points, _ = _as_points(model, x)
    _check_order(operator.order)

    def chunk(start, stop):
        out = trace(model, params, points[start:stop], operator.order, False)[1]
        return np.asarray(_as_tensor(operator.fn(out)).data)

    return np.concatenate(map_chunks(chunk, len(points)), axis=0)


# ---------------------------------------------------------------------- parameter gradients


def _point_gradient(model: FieldModel, params: FlatParams, point: np.ndarray) -> np.ndarray:
    theta, out = trace(model, params, point[None, :], 0, True)
    value = out.value
    rows = []
    for j in range(model.output_dim):
        theta.grad = None
        value[0, j].backward()
        rows.append(_leaf_gradient(theta))
    return np.stack(rows)


def param_gradient(model: FieldModel, params: FlatParams, x) -> ParamGradient:
    points, _ = _as_points(model, x)
    return ParamGradient(_point_gradient(model, params, points[0]))


def param_gradients(model: FieldModel, params: FlatParams, x) -> np.ndarray:
    """Per-point gradients, shape (N, m, |theta|)."""
    points, _ = _as_points(model, x)

    def chunk(start, stop):
        return np.stack([_point_gradient(model, params, p) for p in points[start:stop]])

    return np.concatenate(map_chunks(chunk, len(points)), axis=0)


# ---------------------------------------------------------------------- losses


def _as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _term_chunk(
    model: FieldModel,
    params: FlatParams,
    term: LossTerm,
    start: int,
    stop: int,
    with_gradient: bool,
) -> tuple[float, np.ndarray | None]:
    theta = Tensor(params.values, requires_grad=with_gradient)
    weights = params.layout.split(theta)
    order = term.operator.order
    fields = [
        model.jet_apply(weights, JetTensor.seed(points[start:stop], order))
        for points in term.points
    ]
    residual = _as_tensor(term.operator.fn(*fields))
    if term.target is not None:
        residual = residual - term.target[start:stop]
    partial = residual.square().sum() * (term.weight / term.n)
    if not with_gradient:
        return float(partial.data), None
    partial.backward()
    return float(partial.data), _leaf_gradient(theta)


def loss_and_gradient(
    model: FieldModel,
    params: FlatParams,
    terms: Sequence[LossTerm],
    with_gradient: bool = True,
) -> LossEvaluation:
    """sum over terms of (weight / n) * sum_i ||residual_i||^2, and its theta-gradient."""
    if params.layout != model.layout:
        raise DimensionMismatchError(f"parameters do not match model {model.name}")
    values: dict[str, float] = {}
    gradients: list[np.ndarray] = []
    for term in terms:
        _check_order(term.operator.order)
        if term.weight == 0.0:
            values[term.name] = 0.0
            continue
        if term.n == 0:
            raise EmptyCollocationError(
                f"loss term '{term.name}' has weight {term.weight} but no points"
            )
        for points in term.points:
            _as_points(model, points)
        chunks = map_chunks(
            lambda start, stop, t=term: _term_chunk(model, params, t, start, stop, with_gradient),
            term.n,
        )
        values[term.name] = float(pairwise_sum([value for value, _ in chunks]))
        if with_gradient:
            gradients.append(pairwise_sum_arrays([grad for _, grad in chunks]))
    total = float(pairwise_sum(list(values.values()))) if values else 0.0
    gradient = None
    if with_gradient:
        gradient = pairwise_sum_arrays(gradients) if gradients else np.zeros(params.layout.size)
    return LossEvaluation(total, values, gradient)


def param_gradient_of_residual_loss(
    model: FieldModel,
    params: FlatParams,
    points,
    operator: ResidualOperator,
) -> np.ndarray:
    """Gradient over theta of mean_i ||operator(u_theta)(x_i)||^2."""
    _check_order(operator.order)
    points, _ = _as_points(model, points)
    term = LossTerm(operator.name, 1.0, (points,), operator)
    return loss_and_gradient(model, params, [term]).gradient
