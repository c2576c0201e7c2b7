from pathlib import Path

import numpy as np

# configuration objects
from core.config import CSV_SETTINGS


def write_csv(path: Path, header: list[str], columns: list[np.ndarray], integer_columns=()) -> Path:
    """Comma-separated, LF line endings, 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    digits = CSV_SETTINGS.significant_digits
    formats = ["%d" if name in integer_columns else f"%.{digits}g" for name in header]
    table = np.column_stack([np.asarray(column, dtype=np.float64).ravel() for column in columns])
    np.savetxt(
        path,
        table,
        fmt=formats,
        delimiter=",",
        header=",".join(header),
        comments="",
        newline=CSV_SETTINGS.line_terminator,
    )
    return path


def read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    path = Path(path)
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip().split(",")
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, table
