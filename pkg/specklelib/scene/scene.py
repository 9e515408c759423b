#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        scene.py
# Purpose:     Domain box, boundary roles, absorbers and shift field of an experiment
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from .regions import Disk, Region
from .shift import ShiftField
from ..utils.numerics import InvalidInputError

_logger = logging.getLogger("specklelib.Scene")

__all__ = ['Box', 'Scene', 'SIDE_NAMES', 'LAUNCH_LAWS', 'contains_shift', 'psi', 'psi_divergence', 'displacement',
           'with_shift', 'in_absorber']

# side name -> (axis, upper)
_SIDES: Dict[str, Tuple[int, bool]] = {
    'left': (0, False), 'right': (0, True),
    'bottom': (1, False), 'top': (1, True),
    'front': (2, False), 'back': (2, True),
}
SIDE_NAMES = tuple(_SIDES)
LAUNCH_LAWS = ('lambertian', 'collimated')


class Box(object):
    """
    Axis-aligned box [x_min, x_max] x [y_min, y_max] (x [z_min, z_max]).

    The sides are named left/right (x), bottom/top (y) and front/back (z, only in 3D).

    :param lower: lower corner
    :param upper: upper corner, strictly greater than lower on every axis
    """

    def __init__(self, lower: Sequence[float], upper: Sequence[float]):
        lo = np.asarray(lower, dtype=float)
        hi = np.asarray(upper, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1 or len(lo) not in (2, 3):
            raise InvalidInputError("A box needs two corners with 2 or 3 coordinates")
        if np.any(hi <= lo):
            raise InvalidInputError(f"Empty box {tuple(lo)} - {tuple(hi)}")
        lo.setflags(write=False)
        hi.setflags(write=False)
        self.lower = lo
        self.upper = hi

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @property
    def lengths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def sides(self) -> Tuple[str, ...]:
        return SIDE_NAMES[:2 * self.dimension]

    def check_side(self, side: str) -> Tuple[int, bool]:
        if side not in self.sides:
            raise InvalidInputError(f"Unknown side '{side}' for a {self.dimension}D box, expected one of {self.sides}")
        return _SIDES[side]

    def side_normal(self, side: str) -> np.ndarray:
        """Outward unit normal of a side"""
        axis, upper = self.check_side(side)
        normal = np.zeros(self.dimension)
        normal[axis] = 1.0 if upper else -1.0
        return normal

    def side_area(self, side: str) -> float:
        """Length (2D) or area (3D) of a side"""
        axis, _ = self.check_side(side)
        return float(np.prod(np.delete(self.lengths, axis)))

    def side_coordinate(self, side: str) -> float:
        axis, upper = self.check_side(side)
        return float(self.upper[axis] if upper else self.lower[axis])

    def contains(self, x) -> np.ndarray:
        """Membership in the open box"""
        x = np.asarray(x, dtype=float)
        return np.all((x > self.lower) & (x < self.upper), axis=-1)

    def strictly_contains(self, region: Region) -> bool:
        lo, hi = region.bounds()
        return bool(np.all(lo > self.lower) and np.all(hi < self.upper))

    def __repr__(self):
        return f"Box({tuple(self.lower)}, {tuple(self.upper)})"


@dataclass(frozen=True)
class Scene:
    """
    The physical setup shared read-only by all solvers.

    :param box: the domain
    :param illuminated: sides where light enters (the illuminated boundary)
    :param measured: sides where the speckle is recorded (the measured boundary)
    :param absorbers: perfectly absorbing disks inside the domain
    :param shift: the shift field
    :param aperture_half_angle: half angle of the detection cone around the outward normal, in (0, pi/2]
    :param launch: launch law of the Monte Carlo source, 'lambertian' or 'collimated'
    :param source_intensity: intensity of the boundary source, used as Dirichlet datum by the diffusion solver
    :param reflecting: sides treated as zero-flux walls by the diffusion solver
    """
    box: Box
    illuminated: Tuple[str, ...] = ('left',)
    measured: Tuple[str, ...] = ('right',)
    absorbers: Tuple[Disk, ...] = ()
    shift: ShiftField = field(default_factory=ShiftField)
    aperture_half_angle: float = math.pi / 2
    launch: str = 'lambertian'
    source_intensity: float = 1.0
    reflecting: Tuple[str, ...] = ()

    def __post_init__(self):
        for name in ('illuminated', 'measured', 'absorbers', 'reflecting'):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        for side in self.illuminated + self.measured + self.reflecting:
            self.box.check_side(side)
        if set(self.illuminated) & set(self.measured):
            raise InvalidInputError("illuminated and measured boundaries intersect")
        if set(self.reflecting) & (set(self.illuminated) | set(self.measured)):
            raise InvalidInputError("reflecting sides can be neither illuminated nor measured")
        if not 0 < self.aperture_half_angle <= math.pi / 2 + 1e-15:
            raise InvalidInputError(f"aperture_half_angle must lie in (0, pi/2], got {self.aperture_half_angle}")
        if self.launch not in LAUNCH_LAWS:
            raise InvalidInputError(f"Unknown launch law '{self.launch}', expected one of {LAUNCH_LAWS}")
        if self.source_intensity < 0:
            raise InvalidInputError("source_intensity must be non-negative")
        for absorber in self.absorbers:
            if absorber.dimension != self.dimension:
                raise InvalidInputError(f"{absorber!r} doesn't match the domain dimension")
            if not self.box.strictly_contains(absorber):
                raise InvalidInputError(f"{absorber!r} is not strictly inside the domain")
        if self.shift.support is not None:
            if self.shift.support.dimension != self.dimension:
                raise InvalidInputError("The shift support doesn't match the domain dimension")
            if not self.box.strictly_contains(self.shift.support):
                raise InvalidInputError("The shift support is not strictly inside the domain")

    @property
    def dimension(self) -> int:
        return self.box.dimension

    @property
    def exit_sides(self) -> Tuple[str, ...]:
        return self.box.sides

    def describe(self) -> dict:
        return {'box': [list(self.box.lower), list(self.box.upper)], 'illuminated': list(self.illuminated),
                'measured': list(self.measured), 'absorbers': [repr(a) for a in self.absorbers],
                'shift': self.shift.regime.value, 'aperture_half_angle': self.aperture_half_angle,
                'launch': self.launch}


def contains_shift(scene: Scene, x) -> np.ndarray:
    """True where x lies in the support X_s of the shift field"""
    return scene.shift.contains(x)


def in_absorber(scene: Scene, x) -> np.ndarray:
    """True where x lies inside any absorber"""
    x = np.asarray(x, dtype=float)
    inside = np.zeros(x.shape[:-1], dtype=bool)
    for absorber in scene.absorbers:
        inside |= absorber.contains(x)
    return inside


def psi(scene: Scene, x) -> np.ndarray:
    """The vector field psi of the scene's shift"""
    return scene.shift.psi(x)


def psi_divergence(scene: Scene, x) -> np.ndarray:
    """Analytic divergence of psi, zero outside X_s"""
    return scene.shift.divergence(x)


def displacement(scene: Scene, x, k_mag: float, mean_free_path: float) -> np.ndarray:
    """The displacement phi of the scene's shift, see ShiftField.displacement()"""
    return scene.shift.displacement(x, k_mag, mean_free_path)


def with_shift(scene: Scene, shift: Optional[ShiftField]) -> Scene:
    """A copy of the scene with another shift field (the trivial one when None)"""
    return replace(scene, shift=shift if shift is not None else ShiftField())
