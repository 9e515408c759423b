from .problem import GridSpec, DiffusionProblem, PROBLEM_KINDS
from .solver import FieldGrid, solve_diffusion, boundary_flux, link_fluxes, save_field
