"""
Benchmark problem description shared by all PDEs of the suite.

Coordinates are ordered (x, t): axis 0 is space, the last axis is time.
A problem knows how to turn a collocation set into the three loss terms

    res   (lambda_res / n_res) * sum |F(u)(x_i)|^2
    ic    (lambda_ic  / n_ic)  * sum |I(u)(x_i)|^2
    bc    (lambda_bc  / n_bc)  * sum |B(u)(x_i)|^2

and how to evaluate its reference solution.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from autodiff.engine import LossTerm, ResidualOperator, forward, residual_values
from autodiff.jet import JetTensor
from autodiff.tensor import Tensor

# exceptions
from exceptions.ProblemException import ReferenceValidationError

# logger module
from logger.logger_module import ModuleLoger
from models.closed_form_model import ClosedFormModel
from schemas.problem_schema import LossWeights

logger = ModuleLoger(Path(__file__).stem)


@dataclass(frozen=True)
class Domain:
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def time_axis(self) -> int:
        return self.dim - 1

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        points = np.asarray(points)
        lower, upper = np.asarray(self.lower), np.asarray(self.upper)
        return np.all((points >= lower - tol) & (points <= upper + tol), axis=-1)


@dataclass(frozen=True)
class BoundaryCondition:
    """Dirichlet values on both spatial ends, or a periodic pairing.

    ``derivative`` adds periodicity of du/dx to a periodic pairing.
    """

    kind: str
    value: Callable[[np.ndarray], np.ndarray] | None = None
    derivative: bool = False


@dataclass(frozen=True)
class CollocationSet:
    interior: np.ndarray
    initial: np.ndarray
    boundary_left: np.ndarray
    boundary_right: np.ndarray
    descriptor: dict = field(default_factory=dict)

    @property
    def counts(self) -> dict[str, int]:
        return {
            "n_res": len(self.interior),
            "n_ic": len(self.initial),
            "n_bc": len(self.boundary_left),
        }


def _stack_columns(parts) -> Tensor:
    if len(parts) == 1:
        return parts[0]
    return Tensor.concat(parts, axis=-1)


@dataclass(frozen=True, eq=False)
class PDEProblem:
    name: str
    domain: Domain
    residual: Callable[[JetTensor], Tensor]
    residual_order: int
    initial_condition: Callable[[np.ndarray], np.ndarray]
    boundary: BoundaryCondition
    weights: LossWeights = field(default_factory=LossWeights)
    # d u / d t at t = 0, for second order in time problems
    initial_velocity: Callable[[np.ndarray], np.ndarray] | None = None
    # closed-form solution as a jet expression of the input coordinates
    exact: Callable[[JetTensor], JetTensor] | None = None
    # gridded solution, (x, t) -> u
    interpolator: Callable[[np.ndarray], np.ndarray] | None = None
    residual_tolerance: float = 1e-8
    output_dim: int = 1

    # ------------------------------------------------------------------ operators

    @property
    def residual_operator(self) -> ResidualOperator:
        return ResidualOperator(self.residual, self.residual_order, f"{self.name}_residual")

    def initial_operator(self) -> ResidualOperator:
        if self.initial_velocity is None:
            return ResidualOperator(lambda u: u.value, 0, "initial")
        return ResidualOperator(
            lambda u: _stack_columns([u.value, u.d1(self.domain.time_axis)]), 1, "initial"
        )

    def initial_target(self, points: np.ndarray) -> np.ndarray:
        x = points[:, 0]
        columns = [np.broadcast_to(self.initial_condition(x), x.shape)]
        if self.initial_velocity is not None:
            columns.append(np.broadcast_to(self.initial_velocity(x), x.shape))
        return np.stack(columns, axis=-1)

    def boundary_operator(self) -> ResidualOperator:
        if self.boundary.kind == "dirichlet":
            return ResidualOperator(
                lambda left, right: _stack_columns([left.value, right.value]), 0, "boundary"
            )

        def periodic(left: JetTensor, right: JetTensor) -> Tensor:
            parts = [left.value - right.value]
            if self.boundary.derivative:
                parts.append(left.d1(0) - right.d1(0))
            return _stack_columns(parts)

        return ResidualOperator(periodic, 1 if self.boundary.derivative else 0, "boundary")

    def boundary_target(self, left: np.ndarray, right: np.ndarray) -> np.ndarray | None:
        if self.boundary.kind != "dirichlet" or self.boundary.value is None:
            return None
        t_left, t_right = left[:, -1], right[:, -1]
        return np.stack(
            [
                np.broadcast_to(self.boundary.value(t_left), t_left.shape),
                np.broadcast_to(self.boundary.value(t_right), t_right.shape),
            ],
            axis=-1,
        )

    def loss_terms(
        self,
        collocation: CollocationSet,
        weights: LossWeights | None = None,
    ) -> list[LossTerm]:
        weights = weights or self.weights
        return [
            LossTerm("res", weights.res, (collocation.interior,), self.residual_operator),
            LossTerm(
                "ic",
                weights.ic,
                (collocation.initial,),
                self.initial_operator(),
                self.initial_target(collocation.initial),
            ),
            LossTerm(
                "bc",
                weights.bc,
                (collocation.boundary_left, collocation.boundary_right),
                self.boundary_operator(),
                self.boundary_target(collocation.boundary_left, collocation.boundary_right),
            ),
        ]

    # ------------------------------------------------------------------ reference

    def reference_model(self) -> ClosedFormModel:
        if self.exact is None:
            raise ReferenceValidationError(f"{self.name} has no closed-form solution")
        return ClosedFormModel(self.exact, self.domain.dim, self.output_dim, name=f"{self.name}_exact")

    def reference(self, points: np.ndarray) -> np.ndarray:
        """Reference solution at ``points``, shape (N,)."""
        points = np.asarray(points, dtype=np.float64)
        if self.exact is not None:
            model = self.reference_model()
            return forward(model, model.init_params(), points)[:, 0]
        if self.interpolator is not None:
            return np.asarray(self.interpolator(points), dtype=np.float64)
        raise ReferenceValidationError(f"{self.name} has no reference solution")

    def reference_residual_rms(self, points: np.ndarray) -> float:
        model = self.reference_model()
        values = residual_values(model, model.init_params(), points, self.residual_operator)
        return float(np.sqrt(np.mean(np.square(values))))

    def sample_interior(self, n: int, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        lower, upper = np.asarray(self.domain.lower), np.asarray(self.domain.upper)
        return lower + (upper - lower) * rng.random((n, self.domain.dim))


def validate_reference(problem: PDEProblem, n_points: int = 100, seed: int = 0) -> PDEProblem:
    """Self-validation gate: the closed-form reference must satisfy its own residual."""
    if problem.exact is None:
        return problem
    rms = problem.reference_residual_rms(problem.sample_interior(n_points, seed))
    if not rms < problem.residual_tolerance:
        raise ReferenceValidationError(
            f"{problem.name}: reference residual RMS {rms:.3e} exceeds {problem.residual_tolerance:.1e}"
        )
    logger.debug(f"{problem.name}: reference residual RMS {rms:.3e}")
    return problem


def out_of_domain_fraction(problem: PDEProblem, points: np.ndarray, offsets: np.ndarray) -> float:
    """Share of perturbed points x + delta lying outside the closed domain."""
    points = np.asarray(points, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.float64)
    if points.size == 0 or offsets.size == 0:
        return 0.0
    shifted = points[:, None, :] + offsets[None, :, :]
    return float(1.0 - np.mean(problem.domain.contains(shifted)))
