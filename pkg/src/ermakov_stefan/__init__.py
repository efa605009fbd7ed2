"""Exact Airy-type similarity solutions of u_t + u_xxx + lambda (t+a)**-2 u**-4 u_x = 0,
their Stefan-type moving boundary problems, and the reciprocal and involutory maps."""
from .ermakov import ErmakovParams, integrate_oracle, make_params, omega_basis, psi
from .reports import GridSpec, ResidualReport
from .similarity import SimilaritySolution, eval_u, exponent_forcing_check, make_solution, pde_residual
from .specialfn import AiryValues, airy, airy_scaled
from .stefan import StefanProblem, boundary_residuals, forward_solve, front, inverse_solve

__all__ = [
    "AiryValues", "airy", "airy_scaled",
    "ErmakovParams", "make_params", "omega_basis", "psi", "integrate_oracle",
    "SimilaritySolution", "make_solution", "eval_u", "pde_residual", "exponent_forcing_check",
    "StefanProblem", "forward_solve", "inverse_solve", "front", "boundary_residuals",
    "GridSpec", "ResidualReport",
]
