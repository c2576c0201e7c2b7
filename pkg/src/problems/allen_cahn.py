from pathlib import Path

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from autodiff.jet import JetTensor

# configuration objects
from core.config import REFERENCE_SETTINGS

# exceptions
from exceptions.ProblemException import ReferenceValidationError

# logger module
from logger.logger_module import ModuleLoger
from problems.base_problem import BoundaryCondition, Domain, PDEProblem
from problems.spectral import SpectralGrid, allen_cahn_initial, grid_residual_rms, spectral_reference
from repository.reference_repo import ReferenceRepository
from schemas.problem_schema import LossWeights

logger = ModuleLoger(Path(__file__).stem)

DIFFUSION = 1e-4
REACTION = 5.0
# central differences between frames bound how small the grid residual can get
GRID_TOLERANCE = 1e-2
PERIODIC_TOLERANCE = 1e-8
# u_x is not periodic at t = 0, so the seam step may reach about twice its neighbours
SEAM_FACTOR = 4.0


def allen_cahn_residual(u: JetTensor):
    value = u.value
    return u.d1(1) - DIFFUSION * u.d2(0) + REACTION * value * value * value - REACTION * value


def load_or_generate_reference(path: Path | None = None) -> SpectralGrid:
    path = Path(path or REFERENCE_SETTINGS.allen_cahn_path)
    if ReferenceRepository.exists(path):
        return ReferenceRepository.load_grid(path)
    logger.info(f"no allen-cahn reference at {path}, generating one")
    grid = spectral_reference(
        resolution=REFERENCE_SETTINGS.resolution,
        timestep=REFERENCE_SETTINGS.timestep,
        n_frames=REFERENCE_SETTINGS.n_frames,
        diffusion=DIFFUSION,
        reaction=REACTION,
    )
    ReferenceRepository.save_grid(path, grid)
    return grid


def validate_grid(grid: SpectralGrid) -> SpectralGrid:
    u = grid.u
    gap = float(np.max(np.abs(u[:, 0] - u[:, -1])))
    if gap >= PERIODIC_TOLERANCE:
        raise ReferenceValidationError(f"allen-cahn reference copy column differs (gap {gap:.2e})")
    # wrap x = 1 - h onto x = -1: the step across the seam must look like its neighbours
    seam = np.abs(u[:, 0] - u[:, -2])
    local = np.maximum(np.abs(u[:, 1] - u[:, 0]), np.abs(u[:, -2] - u[:, -3]))
    excess = float(np.max(seam - SEAM_FACTOR * local))
    if excess > PERIODIC_TOLERANCE:
        raise ReferenceValidationError(f"allen-cahn reference is not periodic (seam jump {excess:.2e})")
    rms = grid_residual_rms(grid, DIFFUSION, REACTION)
    if not rms < GRID_TOLERANCE:
        raise ReferenceValidationError(f"allen-cahn reference residual RMS {rms:.3e} too large")
    logger.debug(f"allen-cahn reference residual RMS {rms:.3e}")
    return grid


def grid_interpolator(grid: SpectralGrid):
    """Bilinear interpolation of the frames at (x, t) points."""
    interpolator = RegularGridInterpolator(
        (grid.x, grid.t), grid.u.T, method="linear", bounds_error=False, fill_value=None
    )
    return lambda points: interpolator(np.asarray(points, dtype=np.float64))


def allen_cahn_problem(reference_path: Path | None = None, grid: SpectralGrid | None = None) -> PDEProblem:
    """u_t - 1e-4 u_xx + 5 u^3 - 5 u = 0 on (-1, 1) x (0, 1), periodic in u and u_x."""
    grid = validate_grid(grid if grid is not None else load_or_generate_reference(reference_path))
    return PDEProblem(
        name="allen_cahn",
        domain=Domain((-1.0, 0.0), (1.0, 1.0)),
        residual=allen_cahn_residual,
        residual_order=2,
        initial_condition=allen_cahn_initial,
        boundary=BoundaryCondition("periodic", derivative=True),
        weights=LossWeights(res=1.0, ic=10.0, bc=1.0),
        interpolator=grid_interpolator(grid),
        residual_tolerance=GRID_TOLERANCE,
    )
