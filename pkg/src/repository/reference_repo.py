import json
from pathlib import Path

import numpy as np

# exceptions
from exceptions.ProblemException import ReferenceFileError

# logger module
from logger.logger_module import ModuleLoger
from problems.spectral import SpectralGrid

# hashing and csv helpers
from utils.csv_utils import read_csv, write_csv
from utils.hash_utils import file_hash

logger = ModuleLoger(Path(__file__).stem)

GRID_HEADER = ["x", "t", "u"]


def sidecar_path(path: Path) -> Path:
    return Path(path).with_suffix(".json")


class ReferenceRepository:
    """Gridded reference solutions: CSV "x,t,u" plus a JSON sidecar."""

    @staticmethod
    def save_grid(path: Path, grid: SpectralGrid) -> Path:
        path = Path(path)
        t_mesh, x_mesh = np.meshgrid(grid.t, grid.x, indexing="ij")
        write_csv(path, GRID_HEADER, [x_mesh, t_mesh, grid.u])
        meta = {
            "header": GRID_HEADER,
            "shape": {"n_t": len(grid.t), "n_x": len(grid.x)},
            "order": "t-major",
            "solver": grid.parameters,
            "content_hash": file_hash(path),
        }
        sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True), encoding="utf-8")
        logger.info(f"reference grid written to {path}")
        return path

    @staticmethod
    def load_grid(path: Path) -> SpectralGrid:
        path = Path(path)
        meta_path = sidecar_path(path)
        if not path.exists() or not meta_path.exists():
            raise ReferenceFileError(f"reference grid {path} or its sidecar is missing")
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        if meta.get("content_hash") != file_hash(path):
            raise ReferenceFileError(f"reference grid {path} does not match its recorded hash")
        header, table = read_csv(path)
        if header != GRID_HEADER:
            raise ReferenceFileError(f"unexpected header {header} in {path}")
        n_t, n_x = meta["shape"]["n_t"], meta["shape"]["n_x"]
        if table.shape[0] != n_t * n_x:
            raise ReferenceFileError(f"{path} has {table.shape[0]} rows, expected {n_t * n_x}")
        x = table[:n_x, 0].copy()
        t = table[::n_x, 1].copy()
        u = table[:, 2].reshape(n_t, n_x)
        return SpectralGrid(x, t, u, meta.get("solver", {}))

    @staticmethod
    def exists(path: Path) -> bool:
        path = Path(path)
        return path.exists() and sidecar_path(path).exists()
