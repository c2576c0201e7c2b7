from math import pi

import numpy as np

from autodiff.jet import JetTensor, sin
from problems.base_problem import BoundaryCondition, Domain, PDEProblem, validate_reference

BETA = 50.0


def convection_residual(u: JetTensor):
    return u.d1(1) + BETA * u.d1(0)


def convection_exact(x: JetTensor) -> JetTensor:
    return sin(x.coordinate(0) - BETA * x.coordinate(1))


def convection_problem() -> PDEProblem:
    """u_t + 50 u_x = 0 on (0, 2pi) x (0, 1), u(x, 0) = sin x, periodic in x."""
    problem = PDEProblem(
        name="convection",
        domain=Domain((0.0, 0.0), (2.0 * pi, 1.0)),
        residual=convection_residual,
        residual_order=1,
        initial_condition=np.sin,
        boundary=BoundaryCondition("periodic"),
        exact=convection_exact,
        residual_tolerance=1e-9,
    )
    return validate_reference(problem)
