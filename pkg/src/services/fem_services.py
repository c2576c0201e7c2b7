from pathlib import Path

import numpy as np

from fem.hat_basis import (
    assemble,
    assemble_point_load,
    direct_solve,
    jacobi_iterate,
    propagation_front,
    solve,
)

# logger module
from logger.logger_module import ModuleLoger
from repository.artifact_repo import ArtifactRepository
from schemas.fem_schema import FemReport

logger = ModuleLoger(Path(__file__).stem)


class FemServices:

    @staticmethod
    def poisson_exact(nodes: np.ndarray) -> np.ndarray:
        """Solution of -u'' = 1 with homogeneous Dirichlet ends."""
        return nodes * (1.0 - nodes) / 2.0

    @staticmethod
    def locality(n: int, node: int | None = None, iterations: int | None = None) -> tuple[bool, int, list[int]]:
        """Jacobi from zero with a point load: after k sweeps only nodes within k hops are nonzero."""
        node = n // 2 if node is None else node
        iterations = n if iterations is None else iterations
        mesh = assemble_point_load(n, node)
        u = np.zeros(n)
        hops = np.abs(np.arange(n) - node)
        holds = True
        fronts = [propagation_front(mesh, u)]
        for k in range(1, iterations + 1):
            u = jacobi_iterate(mesh, u)
            fronts.append(propagation_front(mesh, u))
            if np.any(u[hops > k - 1] != 0.0):
                holds = False
        return holds, iterations, fronts

    @staticmethod
    def demo(n: int, tol: float, run_dir: Path | None = None) -> FemReport:
        mesh = assemble(n, 1.0)
        solution = solve(mesh, tol=tol)
        max_error = float(np.max(np.abs(solution.u - FemServices.poisson_exact(mesh.nodes))))
        direct_gap = float(np.max(np.abs(solution.u - direct_solve(mesh))))
        holds, checked, fronts = FemServices.locality(n)
        steps = np.diff(np.maximum(fronts, 0)) if len(fronts) > 1 else np.zeros(1, dtype=int)
        report = FemReport(
            n=n,
            tol=tol,
            iterations=solution.iterations,
            converged=solution.converged,
            max_nodal_error=max_error,
            direct_gap=direct_gap,
            max_front_step=int(np.max(steps)),
            locality_holds=holds,
            locality_iterations=checked,
        )
        if run_dir is not None:
            ArtifactRepository.save_fem_trace(run_dir, solution.history)
            ArtifactRepository.save_json(Path(run_dir) / "fem_report.json", report)
        logger.info(
            f"FEM n={n}: {solution.iterations} Jacobi iterations, max nodal error {max_error:.3e}, "
            f"locality {'holds' if holds else 'violated'}"
        )
        return report
