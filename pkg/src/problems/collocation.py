import numpy as np

# exceptions
from exceptions.ConfigurationException import ConfigurationException, DimensionMismatchError
from problems.base_problem import CollocationSet, Domain, PDEProblem
from schemas.problem_schema import GridSpec, RandomSpec


def grid_points(domain: Domain, n_x: int, n_t: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(x, t, points) of an equispaced grid including the edges; points are x-major."""
    lower, upper = domain.lower, domain.upper
    x = np.linspace(lower[0], upper[0], n_x)
    t = np.linspace(lower[-1], upper[-1], n_t)
    x_mesh, t_mesh = np.meshgrid(x, t, indexing="ij")
    return x, t, np.column_stack([x_mesh.ravel(), t_mesh.ravel()])


def _grid_collocation(problem: PDEProblem, spec: GridSpec) -> CollocationSet:
    if spec.n_x < 2 or spec.n_t < 2:
        raise ConfigurationException(f"a collocation grid needs n >= 2 per axis, got {spec.n_x}x{spec.n_t}")
    x, t, points = grid_points(problem.domain, spec.n_x, spec.n_t)
    lower, upper = problem.domain.lower, problem.domain.upper
    initial = np.column_stack([x, np.full_like(x, lower[-1])])
    left = np.column_stack([np.full_like(t, lower[0]), t])
    right = np.column_stack([np.full_like(t, upper[0]), t])
    return CollocationSet(points, initial, left, right, spec.model_dump())


def _random_collocation(problem: PDEProblem, spec: RandomSpec) -> CollocationSet:
    if min(spec.n, spec.n_ic, spec.n_bc) < 2:
        raise ConfigurationException("random collocation needs at least 2 points per subset")
    if spec.seed is None:
        raise ConfigurationException("random collocation needs an explicit seed")
    rng = np.random.default_rng(spec.seed)
    lower, upper = np.asarray(problem.domain.lower), np.asarray(problem.domain.upper)
    interior = lower + (upper - lower) * rng.random((spec.n, 2))
    x0 = lower[0] + (upper[0] - lower[0]) * rng.random(spec.n_ic)
    initial = np.column_stack([x0, np.full_like(x0, lower[-1])])
    tb = lower[-1] + (upper[-1] - lower[-1]) * rng.random(spec.n_bc)
    left = np.column_stack([np.full_like(tb, lower[0]), tb])
    right = np.column_stack([np.full_like(tb, upper[0]), tb])
    return CollocationSet(interior, initial, left, right, spec.model_dump())


def sample_collocation(problem: PDEProblem, spec: GridSpec | RandomSpec) -> CollocationSet:
    if problem.domain.dim != 2:
        raise DimensionMismatchError("collocation sampling covers one space and one time axis")
    if isinstance(spec, GridSpec):
        return _grid_collocation(problem, spec)
    return _random_collocation(problem, spec)
