#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        solver.py
# Purpose:     Finite-difference solver and flux extraction of the diffusion problems
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Finite differences on the node grid with the 5-point (2D) or 7-point (3D) stencil. Each unknown node c satisfies

    D (2d W_c - sum_nb W_nb) / h^2 - i (div psi)_c W_c = 0

Fixed nodes (Dirichlet sides and excluded regions) are eliminated into the right-hand side. A neighbor outside the box
only exists for nodes on a reflecting side, where it is replaced by its mirror image (zero normal flux).

The system is solved with a sparse LU factorization up to DIRECT_SOLVER_LIMIT unknowns, else with GMRES
preconditioned by an incomplete LU factorization.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Sequence, Union
import logging

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as spla
from scipy.sparse.csgraph import connected_components

from .problem import DiffusionProblem, GridSpec, _side_axis
from ..scene.scene import SIDE_NAMES
from ..utils.numerics import InvalidInputError, NumericalFailureError

_logger = logging.getLogger("specklelib.DiffusionSolver")

__all__ = ['FieldGrid', 'solve_diffusion', 'boundary_flux', 'link_fluxes', 'save_field', 'DIRECT_SOLVER_LIMIT']

DIRECT_SOLVER_LIMIT = 1_000_000
RESIDUAL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class FieldGrid:
    """
    Solution of a diffusion problem.

    :param values: complex nodal values, shape grid.shape (fixed nodes included)
    :param problem: the solved problem
    :param residual_norm: relative residual of the linear solve
    :param disconnected: True when the excluded regions separate the source from the measured sides
    """
    values: np.ndarray
    problem: DiffusionProblem
    residual_norm: float
    disconnected: bool = False

    @property
    def grid(self) -> GridSpec:
        return self.problem.grid

    def value_at(self, point) -> complex:
        """Value at the grid node nearest to a point"""
        index = np.round((np.asarray(point, dtype=float) - self.grid.lower) / self.grid.spacing).astype(int)
        index = np.clip(index, 0, np.array(self.grid.shape) - 1)
        return complex(self.values[tuple(index)])


class _Layout(object):
    """Unknown/fixed node bookkeeping shared by the assembly and the flux computations"""

    def __init__(self, problem: DiffusionProblem):
        grid = problem.grid
        self.shape = grid.shape
        self.excluded = problem.excluded_mask()
        self.fixed = problem.dirichlet_mask() | self.excluded
        self.fixed_values = problem.fixed_values()
        self.unknown_nodes = np.flatnonzero(~self.fixed)
        self.position = np.full(grid.size, -1, dtype=np.int64)
        self.position[self.unknown_nodes] = np.arange(len(self.unknown_nodes))
        self.multi = np.unravel_index(self.unknown_nodes, self.shape)
        # dual cell weights: 1/2 per reflecting side the node lies on
        self.weights = np.ones(len(self.unknown_nodes))
        for side in problem.reflecting:
            axis, upper = _side_axis(side, grid.dimension)
            on_side = self.multi[axis] == (self.shape[axis] - 1 if upper else 0)
            self.weights[on_side] *= 0.5

    def links(self):
        """Yields (axis, unknown rows, neighbor flat indices) for every stencil direction"""
        for axis in range(len(self.shape)):
            for step in (-1, 1):
                nb = self.multi[axis] + step
                outside = (nb < 0) | (nb >= self.shape[axis])
                nb = np.where(outside, self.multi[axis] - step, nb)
                coords = list(self.multi)
                coords[axis] = nb
                yield axis, np.ravel_multi_index(coords, self.shape)


def _assemble(problem: DiffusionProblem, layout: _Layout):
    h2 = problem.grid.spacing ** 2
    coef = problem.diffusion_scalar / h2
    n = len(layout.unknown_nodes)
    dtype = float if problem.is_real else complex
    rows, cols, vals = [], [], []
    diag = np.zeros(n, dtype=dtype)
    rhs = np.zeros(n, dtype=dtype)
    fixed_flat = layout.fixed.ravel()
    values_flat = layout.fixed_values.ravel()
    rows_all = np.arange(n)
    for _, nb in layout.links():
        diag += coef
        inner = ~fixed_flat[nb]
        rows.append(rows_all[inner])
        cols.append(layout.position[nb[inner]])
        vals.append(np.full(np.count_nonzero(inner), -coef))
        rhs[~inner] += coef * values_flat[nb[~inner]]
    if not problem.is_real:
        diag = diag - 1j * problem.complex_absorption.ravel()[layout.unknown_nodes]
    rows.append(rows_all)
    cols.append(rows_all)
    vals.append(diag)
    matrix = sparse.coo_matrix((np.concatenate(vals).astype(dtype), (np.concatenate(rows), np.concatenate(cols))),
                               shape=(n, n)).tocsr()
    return matrix, rhs


def _check_connectivity(problem: DiffusionProblem, layout: _Layout, matrix) -> bool:
    """True when no component of the free nodes touches both a source node and a measured side"""
    if not problem.measured:
        return False
    _, labels = connected_components(matrix.astype(bool), directed=False)
    fixed_flat = layout.fixed.ravel()
    source_flat = (np.abs(layout.fixed_values) > 0).ravel()
    measured_flat = np.zeros(problem.grid.size, dtype=bool)
    for side in problem.measured:
        measured_flat |= problem.grid.side_mask(side).ravel()
    source_components, measured_components = set(), set()
    for _, nb in layout.links():
        touching = fixed_flat[nb]
        source_components.update(labels[touching & source_flat[nb]].tolist())
        measured_components.update(labels[touching & measured_flat[nb]].tolist())
    return not (source_components & measured_components)


def solve_diffusion(problem: DiffusionProblem, tol: float = RESIDUAL_TOLERANCE) -> FieldGrid:
    """
    Solves a diffusion problem.

    :param problem: the problem
    :param tol: relative residual target of the linear solve
    :returns: the solved FieldGrid; its disconnected flag is set (and a warning logged) when the excluded regions
        separate the source from the measured sides
    :raises NumericalFailureError: if the linear solver doesn't reach the tolerance
    """
    layout = _Layout(problem)
    n = len(layout.unknown_nodes)
    values = layout.fixed_values.astype(complex)
    if n == 0:
        return FieldGrid(values, problem, 0.0, disconnected=True)
    matrix, rhs = _assemble(problem, layout)
    _logger.debug("Assembled %s: %d unknowns, %d non-zeros, %s", problem.label, n, matrix.nnz, matrix.dtype)
    disconnected = _check_connectivity(problem, layout, matrix)
    if disconnected:
        _logger.warning("Problem %s: the excluded regions disconnect the source from the measured sides",
                        problem.label)

    rhs_norm = np.linalg.norm(rhs)
    if rhs_norm == 0:
        solution = np.zeros(n, dtype=rhs.dtype)
    elif n <= DIRECT_SOLVER_LIMIT:
        solution = spla.spsolve(matrix.tocsc(), rhs)
    else:
        ilu = spla.spilu(matrix.tocsc(), drop_tol=1e-5, fill_factor=20)
        preconditioner = spla.LinearOperator(matrix.shape, ilu.solve, dtype=matrix.dtype)
        solution, info = spla.gmres(matrix, rhs, rtol=tol, restart=200, maxiter=2000, M=preconditioner)
        if info < 0:
            raise NumericalFailureError(f"GMRES breakdown on {problem.label}", iterations=None)
    residual = float(np.linalg.norm(matrix @ solution - rhs) / rhs_norm) if rhs_norm else 0.0
    if not np.all(np.isfinite(solution)) or residual > tol:
        raise NumericalFailureError(f"Linear solve of {problem.label} failed", residual=residual)
    _logger.debug("Solved %s, relative residual %.3e", problem.label, residual)

    flat = values.ravel()
    flat[layout.unknown_nodes] = solution
    return FieldGrid(flat.reshape(problem.grid.shape), problem, residual, disconnected)


def _segment_sides(segment: Union[str, Sequence[str]]) -> Sequence[str]:
    return (segment,) if isinstance(segment, str) else tuple(segment)


def boundary_flux(field: FieldGrid, segment: Union[str, Sequence[str]]):
    """
    Integral over one or more sides of the outward normal derivative nu.grad W, computed with the second-order
    one-sided difference (3 W_0 - 4 W_1 + W_2) / (2 h) and the trapezoidal rule along the side. The factor D isn't
    applied.

    :param field: solved field
    :param segment: side name or sequence of side names, none of them illuminated
    :returns: a float for real problems, a complex for the cross-correlation problems with absorption
    :raises InvalidInputError: if the segment contains an illuminated side
    """
    problem = field.problem
    grid = problem.grid
    total = 0j
    for side in _segment_sides(segment):
        if side in problem.illuminated:
            raise InvalidInputError(f"Side '{side}' is illuminated, the flux is only defined on the measured sides")
        axis, upper = _side_axis(side, grid.dimension)
        values = np.moveaxis(field.values, axis, 0)
        if upper:
            values = values[::-1]
        derivative = (3 * values[0] - 4 * values[1] + values[2]) / (2 * grid.spacing)
        for other in range(grid.dimension - 1):
            derivative = np.trapezoid(derivative, dx=grid.spacing, axis=0)
        total += complex(derivative)
    return total.real if problem.is_real else total


def link_fluxes(field: FieldGrid) -> Dict[str, complex]:
    """
    Discrete fluxes nu.grad W (without the factor D) through the fixed nodes, grouped by side and 'excluded', plus
    the 'source' term of the complex absorption. The entries sum to zero up to the linear solve residual.
    """
    problem = field.problem
    grid = problem.grid
    layout = _Layout(problem)
    values = field.values.ravel()
    unknown_values = values[layout.unknown_nodes]
    area = grid.spacing ** (grid.dimension - 2)
    groups = np.full(grid.size, -1)
    names = [s for s in SIDE_NAMES[:2 * grid.dimension]
             if s not in problem.reflecting]
    for i, side in reversed(list(enumerate(names))):
        groups[grid.side_mask(side).ravel()] = i
    groups[layout.excluded.ravel()] = len(names)
    totals = np.zeros(len(names) + 1, dtype=complex)
    fixed_flat = layout.fixed.ravel()
    for _, nb in layout.links():
        touching = fixed_flat[nb]
        contribution = layout.weights[touching] * (values[nb[touching]] - unknown_values[touching]) * area
        totals += np.bincount(groups[nb[touching]], weights=contribution.real, minlength=len(totals))
        totals += 1j * np.bincount(groups[nb[touching]], weights=contribution.imag, minlength=len(totals))
    result = {name: complex(totals[i]) for i, name in enumerate(names)}
    result['excluded'] = complex(totals[-1])
    source = 0j
    if not problem.is_real:
        absorption = problem.complex_absorption.ravel()[layout.unknown_nodes]
        source = complex(1j / problem.diffusion_scalar * np.sum(layout.weights * absorption * unknown_values)
                         * grid.spacing ** grid.dimension)
    result['source'] = source
    return result


def save_field(field: FieldGrid, path: Union[str, Path]):
    """
    Writes the nodal values as plain-text matrices, the real plane followed by the imaginary plane. Rows run along
    the first axis; in 3D the trailing axes are flattened in row-major order.
    """
    path = Path(path)
    values = field.values.reshape(field.values.shape[0], -1)
    grid = field.grid
    header = (f"grid shape {grid.shape}, spacing {grid.spacing!r}, lower {tuple(grid.lower.tolist())}, "
              f"problem {field.problem.label}")
    with open(path, 'w', encoding='utf-8') as fout:
        np.savetxt(fout, values.real, header=header + "\nreal part", fmt='%.17g')
        np.savetxt(fout, values.imag, header="imaginary part", fmt='%.17g')
    _logger.info("Field written to %s", path)
