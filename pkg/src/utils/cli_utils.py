from collections.abc import Callable

# for saving metadata of functions
from functools import wraps
from pathlib import Path

import click

# exceptions
from exceptions.AutodiffException import AutodiffException
from exceptions.ConfigurationException import ConfigurationException
from exceptions.DiagnosticException import DiagnosticException
from exceptions.FemException import FemException
from exceptions.MetricsException import MetricsException
from exceptions.ModelException import ModelException
from exceptions.ProblemException import ProblemException
from exceptions.TrainingException import NonFiniteLossError, TrainingException

# logger module
from logger.logger_module import ModuleLoger

logger = ModuleLoger(Path(__file__).stem)

# exit status per exception family, most specific first
EXIT_CODES: tuple[tuple[type[Exception], int], ...] = (
    (ConfigurationException, 2),
    (NonFiniteLossError, 3),
    (TrainingException, 3),
    (ProblemException, 4),
    (ModelException, 4),
    (AutodiffException, 5),
    (DiagnosticException, 6),
    (FemException, 7),
    (MetricsException, 8),
)


def exit_code(error: Exception) -> int:
    for kind, code in EXIT_CODES:
        if isinstance(error, kind):
            return code
    return 1


def exit_on_error(command: Callable) -> Callable:
    """Turn domain exceptions of a command into a logged message and a nonzero exit."""

    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except tuple(kind for kind, _ in EXIT_CODES) as error:
            logger.error(f"{command.__name__}: {type(error).__name__}: {error}")
            click.echo(f"error: {error}", err=True)
            raise SystemExit(exit_code(error)) from error

    return wrapper
