"""
Propagation-failure diagnostics.

gradient correlation   G(x, x') = || J(x) J(x')^T ||_F,  J = du/dtheta  (m x |theta|)
stiffness              D(lambda) = || u(x'; theta) - u(x'; theta - lambda g_x) || / lambda

D tends to G as lambda -> 0. Every inner product below is computed pairwise
with ``np.dot`` so that swapping the two points gives bitwise equal results.
"""

from collections.abc import Sequence
from pathlib import Path

import numpy as np

from autodiff.engine import forward, param_gradient, param_gradients
from autodiff.params import FlatParams
from autodiff.reduction import map_chunks

# configuration objects
from core.config import EVALUATION_SETTINGS

# exceptions
from exceptions.DiagnosticException import DiagnosticPreconditionError, StepTooLargeError

# logger module
from logger.logger_module import ModuleLoger
from models.base_model import FieldModel
from models.combination_model import region_lifted_model
from problems.base_problem import Domain
from problems.collocation import grid_points
from schemas.diagnostic_schema import (
    BoostResult,
    BoostSummary,
    CorrelationField,
    DynamicsRow,
    StiffnessEstimate,
)
from schemas.problem_schema import GridSpec

logger = ModuleLoger(Path(__file__).stem)


def _contract(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """m x m matrix of inner products between the rows of a and b."""
    return np.array([[np.dot(row_a, row_b) for row_b in b] for row_a in a])


def _frobenius(matrix: np.ndarray) -> float:
    # sorted squares: same sum for a matrix and its transpose
    return float(np.sqrt(np.sum(np.sort(np.square(matrix).ravel()))))


class DiagnosticServices:

    @staticmethod
    def signed_correlation(model: FieldModel, params: FlatParams, x, x_prime) -> np.ndarray:
        a = param_gradient(model, params, x).entries
        b = param_gradient(model, params, x_prime).entries
        return _contract(a, b)

    @staticmethod
    def gradient_correlation(model: FieldModel, params: FlatParams, x, x_prime) -> float:
        return _frobenius(DiagnosticServices.signed_correlation(model, params, x, x_prime))

    @staticmethod
    def stiffness_estimate(
        model: FieldModel,
        params: FlatParams,
        x,
        x_prime,
        lambdas: Sequence[float],
    ) -> StiffnessEstimate:
        lambdas = [float(step) for step in lambdas]
        if not lambdas or any(step <= 0 for step in lambdas):
            raise DiagnosticPreconditionError("step sizes must be positive")
        if any(b >= a for a, b in zip(lambdas, lambdas[1:])):
            raise DiagnosticPreconditionError("step sizes must be strictly decreasing")
        gradient = param_gradient(model, params, x).entries
        base = forward(model, params, x_prime)
        values = []
        for step in lambdas:
            change = np.empty(model.output_dim)
            # one descent step per output channel
            for j in range(model.output_dim):
                stepped = params.with_values(params.values - step * gradient[j])
                change[j] = base[j] - forward(model, stepped, x_prime)[j]
            if not np.all(np.isfinite(change)):
                raise StepTooLargeError(f"output at x' is not finite after a step of {step}")
            values.append(float(np.linalg.norm(change)) / step)
        return StiffnessEstimate(
            x=list(np.asarray(x, dtype=float)),
            x_prime=list(np.asarray(x_prime, dtype=float)),
            lambdas=lambdas,
            values=values,
            limit=values[-1],
        )

    @staticmethod
    def boost_check(
        model: FieldModel,
        params: FlatParams,
        x,
        x_prime,
        offsets,
        region_size: float,
    ) -> BoostResult:
        """Compare G of the model with G of its region-lifted version.

        ``assumption_ok`` holds when every pair among x, x', x + delta_i and
        x' + delta_i has a nonnegative gradient inner product.
        """
        x = np.asarray(x, dtype=np.float64)
        x_prime = np.asarray(x_prime, dtype=np.float64)
        offsets = np.atleast_2d(np.asarray(offsets, dtype=np.float64))
        bound = region_size / 3.0
        if np.linalg.norm(x - x_prime) > bound:
            raise DiagnosticPreconditionError(f"|x - x'| exceeds R/3 = {bound}")
        if np.any(np.linalg.norm(offsets, axis=1) > bound):
            raise DiagnosticPreconditionError(f"perturbation norm exceeds R/3 = {bound}")

        g_point = DiagnosticServices.gradient_correlation(model, params, x, x_prime)
        lifted = region_lifted_model(model, offsets)
        g_region = DiagnosticServices.gradient_correlation(lifted, params, x, x_prime)

        points = np.vstack([x, x_prime, x + offsets, x_prime + offsets])
        gradients = param_gradients(model, params, points)
        assumption_ok = True
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                if np.any(_contract(gradients[i], gradients[j]) < 0.0):
                    assumption_ok = False
                    break
            if not assumption_ok:
                break
        scale = max(g_point, g_region, np.finfo(float).tiny)
        holds = g_region >= g_point - 1e-12 * scale
        if assumption_ok and not holds:
            logger.warning(f"boost inequality violated: G_region {g_region} < G_point {g_point}")
        return BoostResult(
            g_point=g_point,
            g_region=g_region,
            holds=bool(holds),
            assumption_ok=assumption_ok,
            scale=scale,
        )

    @staticmethod
    def boost_survey(
        model: FieldModel,
        params: FlatParams,
        domain: Domain,
        region_size: float,
        cases: int,
        n_offsets: int = 4,
        seed: int = 0,
    ) -> BoostSummary:
        """Random compliant (x, x', offsets) cases for one parameter snapshot."""
        rng = np.random.default_rng(seed)
        bound = region_size / 3.0
        lower, upper = np.asarray(domain.lower), np.asarray(domain.upper)
        ok = holds = 0
        gains = []
        for _ in range(cases):
            x = lower + (upper - lower) * rng.random(domain.dim)
            x_prime = x + _in_ball(rng, domain.dim, bound)
            offsets = np.stack([_in_ball(rng, domain.dim, bound) for _ in range(n_offsets)])
            result = DiagnosticServices.boost_check(model, params, x, x_prime, offsets, region_size)
            if result.assumption_ok:
                ok += 1
                holds += int(result.holds)
                if result.g_point > 0:
                    gains.append(result.g_region / result.g_point)
        return BoostSummary(
            cases=cases,
            assumption_ok=ok,
            holds_when_ok=holds,
            mean_gain=float(np.mean(gains)) if gains else None,
        )

    @staticmethod
    def correlation_values(model: FieldModel, params: FlatParams, points: np.ndarray, offset) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        neighbours = points + np.asarray(offset, dtype=np.float64)

        def chunk(start, stop):
            a = param_gradients(model, params, points[start:stop])
            b = param_gradients(model, params, neighbours[start:stop])
            return np.array([_frobenius(_contract(ga, gb)) for ga, gb in zip(a, b)])

        return np.concatenate(map_chunks(chunk, len(points)))

    @staticmethod
    def correlation_map(
        model: FieldModel,
        params: FlatParams,
        points: np.ndarray,
        offset,
    ) -> CorrelationField:
        values = DiagnosticServices.correlation_values(model, params, points, offset)
        return CorrelationField(
            points=np.asarray(points, dtype=np.float64),
            offset=np.asarray(offset, dtype=np.float64),
            values=values,
            model_name=model.name,
            params_hash=params.content_hash(),
        )

    @staticmethod
    def neighbour_offset(dim: int, distance: float) -> np.ndarray:
        """Offset of length ``distance`` along the diagonal (1, ..., 1)."""
        return distance * np.ones(dim) / np.sqrt(dim)

    @staticmethod
    def equispaced_points(domain: Domain, n_points: int) -> np.ndarray:
        """``n_points`` evenly picked, in row-major order, from the smallest covering grid.

        A perfect power of the dimension gives the full grid; otherwise both
        domain corners are kept and the rest are spread along the ordering.
        """
        if n_points < 1:
            raise DiagnosticPreconditionError("need at least one point")
        side = max(1, int(np.ceil(n_points ** (1.0 / domain.dim))))
        while side**domain.dim < n_points:
            side += 1
        while side > 1 and (side - 1) ** domain.dim >= n_points:
            side -= 1
        lower, upper = np.asarray(domain.lower), np.asarray(domain.upper)
        axes = [np.linspace(lo, hi, side) for lo, hi in zip(lower, upper)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, domain.dim)
        if len(grid) == n_points:
            return grid
        picks = np.floor(np.linspace(0, len(grid) - 1, n_points) + 0.5).astype(int)
        return grid[picks]

    @staticmethod
    def positive_ratio(
        model: FieldModel,
        params: FlatParams,
        domain: Domain,
        n_points: int,
        distance: float = EVALUATION_SETTINGS.neighbor_distance,
    ) -> float:
        """Share of equispaced points whose gradient inner product with a neighbour is >= 0.

        For m > 1 the signed product is the trace of the contracted matrix.
        """
        points = DiagnosticServices.equispaced_points(domain, n_points)
        neighbours = points + DiagnosticServices.neighbour_offset(domain.dim, distance)

        def chunk(start, stop):
            a = param_gradients(model, params, points[start:stop])
            b = param_gradients(model, params, neighbours[start:stop])
            return np.array([np.trace(_contract(ga, gb)) >= 0.0 for ga, gb in zip(a, b)])

        positive = np.concatenate(map_chunks(chunk, len(points)))
        return float(np.mean(positive))

    @staticmethod
    def failure_mask(field: CorrelationField, eps: float | None = None) -> tuple[np.ndarray, float]:
        """Points with G below eps; eps defaults to a fraction of the median G."""
        if eps is None:
            eps = EVALUATION_SETTINGS.failure_eps_factor * float(np.median(field.values))
        return field.values < eps, eps

    @staticmethod
    def dynamics_row(
        iteration: int,
        model: FieldModel,
        params: FlatParams,
        domain: Domain,
        grid: GridSpec,
        distance: float,
        eps: float | None = None,
    ) -> DynamicsRow:
        points = grid_points(domain, grid.n_x, grid.n_t)[2]
        field = DiagnosticServices.correlation_map(
            model, params, points, DiagnosticServices.neighbour_offset(domain.dim, distance)
        )
        mask, _ = DiagnosticServices.failure_mask(field, eps)
        summary = field.summary()
        return DynamicsRow(
            iteration=iteration,
            mean_g=summary["mean"],
            median_g=summary["median"],
            failed_fraction=float(np.mean(mask)),
        )


def _in_ball(rng: np.random.Generator, dim: int, radius: float) -> np.ndarray:
    direction = rng.normal(size=dim)
    direction /= np.linalg.norm(direction)
    # stay strictly inside the ball despite rounding of the normalization
    return direction * radius * (1.0 - 1e-12) * rng.random() ** (1.0 / dim)
