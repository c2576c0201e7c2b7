"""
Reverse-mode tape over float64 numpy arrays.

Every operation records its parents and a closure mapping the output
gradient to parent gradients. Nodes whose parents are all constants are
not recorded, so constant sub-expressions (input jets, masks) cost nothing
on the backward pass.
"""

from collections.abc import Callable, Sequence

import numpy as np

BackwardFn = Callable[[np.ndarray], tuple[np.ndarray | None, ...]]


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` (reverse of numpy broadcasting)."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _lift(value) -> "Tensor":
    return value if isinstance(value, Tensor) else Tensor(value)


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")
    # make ndarray <op> Tensor dispatch to the Tensor reflected operator
    __array_ufunc__ = None

    def __init__(
        self,
        data,
        requires_grad: bool = False,
        parents: Sequence["Tensor"] = (),
        backward: BackwardFn | None = None,
    ):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad: np.ndarray | None = None
        tracked = requires_grad or any(p.requires_grad for p in parents)
        self.requires_grad = tracked
        self._parents = tuple(parents) if tracked else ()
        self._backward = backward if tracked else None

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    def numpy(self) -> np.ndarray:
        return self.data

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    # ---------------------------------------------------------------- arithmetic

    def __add__(self, other):
        other = _lift(other)
        a_shape, b_shape = self.shape, other.shape
        return Tensor(
            self.data + other.data,
            parents=(self, other),
            backward=lambda g: (_unbroadcast(g, a_shape), _unbroadcast(g, b_shape)),
        )

    __radd__ = __add__

    def __neg__(self):
        return Tensor(-self.data, parents=(self,), backward=lambda g: (-g,))

    def __sub__(self, other):
        other = _lift(other)
        a_shape, b_shape = self.shape, other.shape
        return Tensor(
            self.data - other.data,
            parents=(self, other),
            backward=lambda g: (_unbroadcast(g, a_shape), -_unbroadcast(g, b_shape)),
        )

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        a, b = self.data, other.data

        def backward(g):
            return (
                _unbroadcast(g * b, a.shape) if self.requires_grad else None,
                _unbroadcast(g * a, b.shape) if other.requires_grad else None,
            )

        return Tensor(a * b, parents=(self, other), backward=backward)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        if not other.requires_grad:
            return self * (1.0 / other.data)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return _lift(other) * self.reciprocal()

    def __pow__(self, exponent: int | float):
        a = self.data
        return Tensor(
            a**exponent,
            parents=(self,),
            backward=lambda g: (g * exponent * a ** (exponent - 1),),
        )

    def square(self) -> "Tensor":
        a = self.data
        return Tensor(a * a, parents=(self,), backward=lambda g: (2.0 * a * g,))

    def reciprocal(self) -> "Tensor":
        out = 1.0 / self.data
        return Tensor(out, parents=(self,), backward=lambda g: (-g * out * out,))

    def __matmul__(self, other):
        """``self`` (..., n, k) times a 2-D ``other`` (k, m)."""
        other = _lift(other)
        a, b = self.data, other.data
        if b.ndim != 2:
            raise ValueError("right operand of @ must be a 2-D weight matrix")

        def backward(g):
            grad_a = g @ b.T if self.requires_grad else None
            grad_b = None
            if other.requires_grad:
                grad_b = a.reshape(-1, a.shape[-1]).T @ g.reshape(-1, g.shape[-1])
            return grad_a, grad_b

        return Tensor(a @ b, parents=(self, other), backward=backward)

    # ---------------------------------------------------------------- elementwise

    def tanh(self) -> "Tensor":
        out = np.tanh(self.data)
        return Tensor(out, parents=(self,), backward=lambda g: (g * (1.0 - out * out),))

    def sin(self) -> "Tensor":
        a = self.data
        return Tensor(np.sin(a), parents=(self,), backward=lambda g: (g * np.cos(a),))

    def cos(self) -> "Tensor":
        a = self.data
        return Tensor(np.cos(a), parents=(self,), backward=lambda g: (-g * np.sin(a),))

    def exp(self) -> "Tensor":
        out = np.exp(self.data)
        return Tensor(out, parents=(self,), backward=lambda g: (g * out,))

    # ---------------------------------------------------------------- reductions

    def sum(self, axis: int | tuple[int, ...] | None = None, keepdims: bool = False):
        shape = self.shape

        def backward(g):
            if axis is not None and not keepdims:
                g = np.expand_dims(g, axis)
            return (np.broadcast_to(g, shape).copy(),)

        return Tensor(
            self.data.sum(axis=axis, keepdims=keepdims),
            parents=(self,),
            backward=backward,
        )

    def mean(self, axis: int | None = None, keepdims: bool = False):
        count = self.data.size if axis is None else self.shape[axis]
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    # ---------------------------------------------------------------- shape

    def reshape(self, *shape) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        original = self.shape
        return Tensor(
            self.data.reshape(shape),
            parents=(self,),
            backward=lambda g: (g.reshape(original),),
        )

    def swapaxes(self, a: int, b: int) -> "Tensor":
        return Tensor(
            np.swapaxes(self.data, a, b),
            parents=(self,),
            backward=lambda g: (np.swapaxes(g, a, b),),
        )

    def __getitem__(self, index) -> "Tensor":
        """Basic (slice / integer) indexing only."""
        shape = self.shape

        def backward(g):
            full = np.zeros(shape)
            full[index] = g
            return (full,)

        return Tensor(self.data[index], parents=(self,), backward=backward)

    @staticmethod
    def concat(tensors: Sequence["Tensor"], axis: int = 0) -> "Tensor":
        tensors = [_lift(t) for t in tensors]
        sizes = [t.shape[axis] for t in tensors]
        cuts = np.cumsum(sizes)[:-1]
        return Tensor(
            np.concatenate([t.data for t in tensors], axis=axis),
            parents=tensors,
            backward=lambda g: tuple(np.split(g, cuts, axis=axis)),
        )

    @staticmethod
    def stack(tensors: Sequence["Tensor"], axis: int = 0) -> "Tensor":
        tensors = [_lift(t) for t in tensors]
        return Tensor(
            np.stack([t.data for t in tensors], axis=axis),
            parents=tensors,
            backward=lambda g: tuple(
                np.take(g, i, axis=axis) for i in range(len(tensors))
            ),
        )

    # ---------------------------------------------------------------- backward

    def backward(self, seed: np.ndarray | float | None = None) -> None:
        """Accumulate d(self)/d(leaf) into ``leaf.grad`` for every tracked leaf."""
        if not self.requires_grad:
            return
        seed = np.ones(self.shape) if seed is None else np.broadcast_to(seed, self.shape)
        grads: dict[int, np.ndarray] = {id(self): np.array(seed, dtype=np.float64)}
        for node in reversed(_topological_order(self)):
            grad = grads.pop(id(node), None)
            if grad is None:
                continue
            if not node._parents:
                node.grad = grad if node.grad is None else node.grad + grad
                continue
            for parent, parent_grad in zip(node._parents, node._backward(grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                grads[key] = parent_grad if key not in grads else grads[key] + parent_grad


def _topological_order(root: Tensor) -> list[Tensor]:
    # iterative post-order DFS; parents come before children
    order: list[Tensor] = []
    visited: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if parent.requires_grad and id(parent) not in visited:
                stack.append((parent, False))
    return order
