"""
Piecewise-linear (hat) finite elements for -u'' = f on (0, 1), u(0) = u(1) = 0.

Only neighbouring hat functions overlap, so the stiffness matrix is
tridiagonal and one Jacobi sweep moves information by exactly one node.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import solve_banded

# exceptions
from exceptions.ConfigurationException import ConfigurationException
from exceptions.FemException import FemDivergenceError

# logger module
from logger.logger_module import ModuleLoger

logger = ModuleLoger(Path(__file__).stem)

DIVERGENCE_WINDOW = 10


@dataclass(frozen=True, eq=False)
class HatBasisMesh:
    n: int
    h: float
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    load: np.ndarray

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.n + 1)

    def entry(self, i: int, j: int) -> float:
        """D(psi_i, psi_j)."""
        if i == j:
            return float(self.diagonal[i])
        if abs(i - j) == 1:
            return float(self.off_diagonal[min(i, j)])
        return 0.0

    def stiffness_matrix(self) -> np.ndarray:
        return (
            np.diag(self.diagonal)
            + np.diag(self.off_diagonal, 1)
            + np.diag(self.off_diagonal, -1)
        )

    def load_support(self) -> np.ndarray:
        return np.flatnonzero(self.load)


@dataclass(frozen=True, eq=False)
class FemSolution:
    u: np.ndarray
    iterations: int
    converged: bool
    # iterates u^(0), u^(1), ... and the propagation front of each
    history: np.ndarray = field(repr=False)
    fronts: list[int] = field(default_factory=list)
    updates: list[float] = field(default_factory=list)


def _mesh(n: int, load: np.ndarray) -> HatBasisMesh:
    h = 1.0 / (n + 1)
    return HatBasisMesh(
        n=n,
        h=h,
        diagonal=np.full(n, 2.0 / h),
        off_diagonal=np.full(n - 1, -1.0 / h),
        load=load,
    )


def assemble(n: int, f: Callable[[np.ndarray], np.ndarray] | float) -> HatBasisMesh:
    """Stiffness 2/h, -1/h and load b_j = int f psi_j dx.

    The load integral uses Simpson's rule on both elements of psi_j, exact
    whenever f is piecewise linear on the mesh.
    """
    if n < 1:
        raise ConfigurationException("the mesh needs at least one interior node")
    h = 1.0 / (n + 1)
    source = f if callable(f) else (lambda x, c=float(f): np.full_like(x, c))
    nodes = h * np.arange(1, n + 1)
    f_node = np.asarray(source(nodes), dtype=np.float64)
    f_left = np.asarray(source(nodes - h / 2.0), dtype=np.float64)
    f_right = np.asarray(source(nodes + h / 2.0), dtype=np.float64)
    load = h / 3.0 * (f_left + f_node + f_right)
    return _mesh(n, load)


def assemble_point_load(n: int, node: int, magnitude: float = 1.0) -> HatBasisMesh:
    if not 0 <= node < n:
        raise ConfigurationException(f"node {node} outside 0..{n - 1}")
    load = np.zeros(n)
    load[node] = magnitude
    return _mesh(n, load)


def jacobi_iterate(mesh: HatBasisMesh, u: np.ndarray) -> np.ndarray:
    """u_j <- (b_j - sum_{i != j} D(psi_i, psi_j) u_i) / D(psi_j, psi_j)."""
    coupling = np.zeros(mesh.n)
    coupling[1:] += mesh.off_diagonal * u[:-1]
    coupling[:-1] += mesh.off_diagonal * u[1:]
    return (mesh.load - coupling) / mesh.diagonal


def direct_solve(mesh: HatBasisMesh) -> np.ndarray:
    bands = np.zeros((3, mesh.n))
    bands[0, 1:] = mesh.off_diagonal
    bands[1] = mesh.diagonal
    bands[2, :-1] = mesh.off_diagonal
    return solve_banded((1, 1), bands, mesh.load)


def propagation_front(mesh: HatBasisMesh, u: np.ndarray) -> int:
    """Largest node distance from the load support carrying a nonzero value (-1 if none)."""
    support = mesh.load_support()
    active = np.flatnonzero(u)
    if active.size == 0 or support.size == 0:
        return -1
    return int(np.max(np.min(np.abs(active[:, None] - support[None, :]), axis=1)))


def solve(
    mesh: HatBasisMesh,
    tol: float = 1e-12,
    max_iter: int = 200_000,
    u0: np.ndarray | None = None,
) -> FemSolution:
    """Jacobi iteration until the error estimate delta / (1 - q) drops below ``tol``.

    delta is the size of the next update and q the observed contraction of
    successive updates; delta < tol is always required.
    """
    u = np.zeros(mesh.n) if u0 is None else np.array(u0, dtype=np.float64)
    history = [u]
    fronts = [propagation_front(mesh, u)]
    updates: list[float] = []
    growth = 0
    converged = False
    for _ in range(max_iter):
        u_next = jacobi_iterate(mesh, u)
        update = float(np.max(np.abs(u_next - u)))
        if updates and update > updates[-1]:
            growth += 1
            if growth >= DIVERGENCE_WINDOW:
                raise FemDivergenceError(
                    f"Jacobi updates grew for {DIVERGENCE_WINDOW} consecutive iterations"
                )
        else:
            growth = 0
        updates.append(update)
        u = u_next
        history.append(u)
        fronts.append(propagation_front(mesh, u))

        upcoming = float(np.max(np.abs(jacobi_iterate(mesh, u) - u)))
        ratio = upcoming / update if update > 0 else 0.0
        if upcoming < tol and (upcoming == 0.0 or (ratio < 1.0 and upcoming / (1.0 - ratio) < tol)):
            converged = True
            break
    if not converged:
        logger.warning(f"Jacobi iteration stopped after {max_iter} iterations without convergence")
    logger.debug(f"Jacobi solve: n={mesh.n}, {len(updates)} iterations")
    return FemSolution(u, len(updates), converged, np.stack(history), fronts, updates)
