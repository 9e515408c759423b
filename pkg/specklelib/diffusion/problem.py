#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        problem.py
# Purpose:     Grid and problem description of the diffusion-limit equations
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
The diffusion limit of the correlation transport equations reads

    -div(D grad W) - i (div psi) W = 0         in the domain, outside the excluded regions
    W = q                                      on the illuminated sides
    W = 0                                      on the other sides and in the excluded regions

with D = 1 / (1 - g). For the autocorrelations W11 = W22 the absorption term vanishes and the absorbers are excluded.
For the cross-correlation W12 the absorption term is present in the Small regime, while in the Moderate and Large
regimes the support X_s is excluded as well.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from ..medium.kernel import TransportCoefficients
from ..scene.regions import Region
from ..scene.scene import SIDE_NAMES, Scene
from ..scene.shift import ShiftRegime
from ..utils.numerics import InvalidInputError

_logger = logging.getLogger("specklelib.DiffusionProblem")

__all__ = ['GridSpec', 'DiffusionProblem', 'PROBLEM_KINDS']

PROBLEM_KINDS = ('autocorrelation', 'cross_correlation')
DIVISIBILITY_TOLERANCE = 1e-9


class GridSpec(object):
    """
    Uniform node grid x_i = lower + i h covering a box, boundary nodes included.

    :param lower: lower corner of the box
    :param upper: upper corner of the box
    :param spacing: grid spacing h, which must divide every side length
    """

    def __init__(self, lower: Sequence[float], upper: Sequence[float], spacing: float):
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        if not spacing > 0:
            raise InvalidInputError(f"grid spacing must be positive, got {spacing}")
        self.spacing = float(spacing)
        cells = (self.upper - self.lower) / self.spacing
        rounded = np.round(cells)
        if np.any(np.abs(cells - rounded) > DIVISIBILITY_TOLERANCE * np.maximum(rounded, 1.0)) or np.any(rounded < 2):
            raise InvalidInputError(f"grid spacing {spacing} doesn't divide the side lengths {self.upper - self.lower}")
        self.shape = tuple(int(c) + 1 for c in rounded)

    @property
    def dimension(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        return self.lower[axis] + self.spacing * np.arange(self.shape[axis])

    def nodes(self) -> np.ndarray:
        """Node coordinates, shape (*grid.shape, d)"""
        axes = [self.axis_coordinates(a) for a in range(self.dimension)]
        return np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1)

    def side_mask(self, side: str) -> np.ndarray:
        """Boolean mask of the nodes lying on a box side"""
        axis, upper = _side_axis(side, self.dimension)
        mask = np.zeros(self.shape, dtype=bool)
        index = [slice(None)] * self.dimension
        index[axis] = self.shape[axis] - 1 if upper else 0
        mask[tuple(index)] = True
        return mask

    def __repr__(self):
        return f"GridSpec(shape={self.shape}, spacing={self.spacing})"


def _side_axis(side: str, dimension: int) -> Tuple[int, bool]:
    names = SIDE_NAMES[:2 * dimension]
    if side not in names:
        raise InvalidInputError(f"Unknown side '{side}', expected one of {names}")
    index = names.index(side)
    return index // 2, index % 2 == 1


@dataclass
class DiffusionProblem:
    """
    A diffusion problem on a node grid.

    :param grid: the node grid
    :param diffusion_scalar: the constant D = 1 / (1 - g)
    :param boundary_values: Dirichlet data q by illuminated side name, a constant or a callable of the node points
    :param complex_absorption: optional values of div psi at the grid nodes (Small regime)
    :param excluded_regions: regions where the unknown is pinned to 0
    :param reflecting: sides with a zero-flux condition instead of W = 0
    :param measured: sides where the flux is recorded
    :param label: free text used in logs
    """
    grid: GridSpec
    diffusion_scalar: float = 1.0
    boundary_values: Dict[str, Union[float, Callable]] = field(default_factory=dict)
    complex_absorption: Optional[np.ndarray] = None
    excluded_regions: Tuple[Region, ...] = ()
    reflecting: Tuple[str, ...] = ()
    measured: Tuple[str, ...] = ()
    label: str = ''

    def __post_init__(self):
        if not self.diffusion_scalar > 0:
            raise InvalidInputError("diffusion_scalar must be positive")
        self.excluded_regions = tuple(self.excluded_regions)
        self.reflecting = tuple(self.reflecting)
        self.measured = tuple(self.measured)
        d = self.grid.dimension
        for side in list(self.boundary_values) + list(self.reflecting) + list(self.measured):
            _side_axis(side, d)
        if set(self.boundary_values) & set(self.reflecting):
            raise InvalidInputError("A side can't be both illuminated and reflecting")
        if self.complex_absorption is not None:
            self.complex_absorption = np.asarray(self.complex_absorption, dtype=float)
            if self.complex_absorption.shape != self.grid.shape:
                raise InvalidInputError("complex_absorption must have one value per grid node")

    @property
    def illuminated(self) -> Tuple[str, ...]:
        return tuple(self.boundary_values)

    @property
    def is_real(self) -> bool:
        """True when the assembled system is real (no absorption term, or div psi identically 0)"""
        return self.complex_absorption is None or not np.any(self.complex_absorption)

    def excluded_mask(self) -> np.ndarray:
        """Nodes inside an excluded region, by the node-centered cell test"""
        points = self.grid.nodes()
        mask = np.zeros(self.grid.shape, dtype=bool)
        for region in self.excluded_regions:
            mask |= region.contains(points)
        return mask

    def dirichlet_mask(self) -> np.ndarray:
        """Nodes on a side that is not reflecting"""
        mask = np.zeros(self.grid.shape, dtype=bool)
        for side in SIDE_NAMES[:2 * self.grid.dimension]:
            if side not in self.reflecting:
                mask |= self.grid.side_mask(side)
        return mask

    def fixed_values(self) -> np.ndarray:
        """Values of the fixed nodes: q on the illuminated sides, 0 elsewhere (illuminated sides win at corners)"""
        values = np.zeros(self.grid.shape)
        points = None
        for side, q in self.boundary_values.items():
            mask = self.grid.side_mask(side)
            if callable(q):
                points = self.grid.nodes() if points is None else points
                data = np.asarray(q(points[mask]), dtype=float)
            else:
                data = float(q)
            if np.any(np.asarray(data) < 0):
                raise InvalidInputError(f"Negative boundary values on side '{side}'")
            values[mask] = data
        values[self.excluded_mask()] = 0.0
        return values

    @classmethod
    def from_scene(cls, scene: Scene, coeffs: Optional[TransportCoefficients], grid_spacing: float,
                   kind: str = 'autocorrelation', q: Optional[float] = None) -> 'DiffusionProblem':
        """
        Builds the autocorrelation (W11 = W22) or the cross-correlation (W12) problem of a scene.

        :param scene: the scene
        :param coeffs: transport coefficients, the diffusion scalar is 1 / (1 - g); None uses 1
        :param grid_spacing: grid spacing h
        :param kind: 'autocorrelation' or 'cross_correlation'
        :param q: Dirichlet datum on the illuminated sides, defaults to the scene's source intensity
        """
        if kind not in PROBLEM_KINDS:
            raise InvalidInputError(f"Unknown problem kind '{kind}', expected one of {PROBLEM_KINDS}")
        grid = GridSpec(scene.box.lower, scene.box.upper, grid_spacing)
        d_scalar = 1.0 if coeffs is None else coeffs.diffusion_coefficient
        q = scene.source_intensity if q is None else q
        excluded = list(scene.absorbers)
        absorption = None
        regime = scene.shift.regime
        if kind == 'cross_correlation':
            if regime is ShiftRegime.SMALL:
                absorption = scene.shift.divergence(grid.nodes())
            elif regime in (ShiftRegime.MODERATE, ShiftRegime.LARGE):
                excluded.append(scene.shift.support)
        label = f"{kind}[{regime.value}]" if kind == 'cross_correlation' else kind
        return cls(grid=grid, diffusion_scalar=d_scalar, boundary_values={s: q for s in scene.illuminated},
                   complex_absorption=absorption, excluded_regions=tuple(excluded), reflecting=scene.reflecting,
                   measured=scene.measured, label=label)
