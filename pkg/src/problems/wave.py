from math import pi

import numpy as np

from autodiff.jet import JetTensor, cos, sin
from problems.base_problem import BoundaryCondition, Domain, PDEProblem, validate_reference

# u_tt = C2 u_xx, standing wave with modes 1 and 3
C2 = 4.0


def wave_initial(x):
    return np.sin(pi * x) + 0.5 * np.sin(3.0 * pi * x)


def wave_residual(u: JetTensor):
    return u.d2(1) - C2 * u.d2(0)


def wave_exact(x: JetTensor) -> JetTensor:
    space, time = x.coordinate(0), x.coordinate(1)
    return sin(space * pi) * cos(time * (2.0 * pi)) + 0.5 * sin(space * (3.0 * pi)) * cos(
        time * (6.0 * pi)
    )


def wave_problem() -> PDEProblem:
    """u_tt - 4 u_xx = 0 on (0, 1) x (0, 1), u = 0 on both ends, u_t(x, 0) = 0."""
    problem = PDEProblem(
        name="wave",
        domain=Domain((0.0, 0.0), (1.0, 1.0)),
        residual=wave_residual,
        residual_order=2,
        initial_condition=wave_initial,
        initial_velocity=np.zeros_like,
        boundary=BoundaryCondition("dirichlet", value=np.zeros_like),
        exact=wave_exact,
        residual_tolerance=1e-8,
    )
    return validate_reference(problem)
