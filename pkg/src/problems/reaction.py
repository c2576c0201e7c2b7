from math import pi

import numpy as np

from autodiff.jet import JetTensor, exp
from problems.base_problem import BoundaryCondition, Domain, PDEProblem, validate_reference

RHO = 5.0
# width of the Gaussian initial bump
SIGMA = pi / 4.0


def gaussian_bump(x):
    return np.exp(-np.square(x - pi) / (2.0 * SIGMA**2))


def reaction_residual(u: JetTensor):
    value = u.value
    return u.d1(1) - RHO * value * (1.0 - value)


def reaction_exact(x: JetTensor) -> JetTensor:
    # logistic growth from h(x): u = h e^{rho t} / (h e^{rho t} + 1 - h)
    shifted = x.coordinate(0) - pi
    h = exp(shifted.square() * (-1.0 / (2.0 * SIGMA**2)))
    growth = h * exp(x.coordinate(1) * RHO)
    return growth / (growth + (1.0 - h))


def reaction_problem() -> PDEProblem:
    """u_t - 5 u (1 - u) = 0 on (0, 2pi) x (0, 1), Gaussian initial bump, periodic in x."""
    problem = PDEProblem(
        name="reaction",
        domain=Domain((0.0, 0.0), (2.0 * pi, 1.0)),
        residual=reaction_residual,
        residual_order=1,
        initial_condition=gaussian_bump,
        boundary=BoundaryCondition("periodic"),
        exact=reaction_exact,
        residual_tolerance=1e-9,
    )
    return validate_reference(problem)
