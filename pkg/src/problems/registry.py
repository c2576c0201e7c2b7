from collections.abc import Callable

# exceptions
from exceptions.ConfigurationException import UnknownNameError
from problems.allen_cahn import allen_cahn_problem
from problems.base_problem import PDEProblem
from problems.convection import convection_problem
from problems.reaction import reaction_problem
from problems.wave import wave_problem

PROBLEMS: dict[str, Callable[[], PDEProblem]] = {
    "convection": convection_problem,
    "reaction": reaction_problem,
    "allen_cahn": allen_cahn_problem,
    "wave": wave_problem,
}


def get_problem(name: str) -> PDEProblem:
    if name not in PROBLEMS:
        raise UnknownNameError(f"unknown problem '{name}', expected one of {sorted(PROBLEMS)}")
    return PROBLEMS[name]()
