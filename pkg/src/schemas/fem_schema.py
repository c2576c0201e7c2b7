from pydantic import BaseModel, Field

# Summary of the finite element propagation demo.


class FemReport(BaseModel):
    n: int = Field(ge=1)
    tol: float = Field(gt=0)
    iterations: int
    converged: bool
    # against x (1 - x) / 2 at the nodes
    max_nodal_error: float
    # against the banded direct solve
    direct_gap: float
    # largest growth of the point-load front between two iterations
    max_front_step: int
    # point-load iterate k is zero beyond k hops, for every k checked
    locality_holds: bool
    locality_iterations: int
