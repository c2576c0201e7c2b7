from pathlib import Path

import numpy as np

# configuration objects
from core.config import REFERENCE_SETTINGS

# logger module
from logger.logger_module import ModuleLoger
from problems.allen_cahn import DIFFUSION, REACTION, validate_grid
from problems.spectral import SpectralGrid, spectral_reference
from repository.reference_repo import ReferenceRepository

logger = ModuleLoger(Path(__file__).stem)


class ReferenceServices:

    @staticmethod
    def generate(
        out: Path | None = None,
        resolution: int = REFERENCE_SETTINGS.resolution,
        timestep: float = REFERENCE_SETTINGS.timestep,
        n_frames: int = REFERENCE_SETTINGS.n_frames,
        scheme: str = "etdrk4",
    ) -> SpectralGrid:
        """Solve Allen-Cahn, check it against its own PDE and store it."""
        grid = spectral_reference(
            resolution=resolution,
            timestep=timestep,
            n_frames=n_frames,
            diffusion=DIFFUSION,
            reaction=REACTION,
            scheme=scheme,
        )
        validate_grid(grid)
        ReferenceRepository.save_grid(Path(out or REFERENCE_SETTINGS.allen_cahn_path), grid)
        return grid

    @staticmethod
    def self_convergence(
        resolution: int = 128,
        timestep: float = 1e-3,
        n_frames: int = 11,
        scheme: str = "etdrk4",
    ) -> float:
        """RMS gap between the frames of a solve and of the same solve with half the timestep."""
        coarse = spectral_reference(resolution, timestep, n_frames, diffusion=DIFFUSION, reaction=REACTION, scheme=scheme)
        fine = spectral_reference(resolution, timestep / 2.0, n_frames, diffusion=DIFFUSION, reaction=REACTION, scheme=scheme)
        gap = float(np.sqrt(np.mean(np.square(coarse.u - fine.u))))
        logger.info(f"{scheme}: timestep {timestep:g} vs {timestep / 2:g}, RMS gap {gap:.3e}")
        return gap
