#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        regions.py
# Purpose:     Analytic region primitives (disks, annuli and their unions)
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Regions used for absorbers and for the support of the shift field.

Membership is vectorized: points are arrays whose last axis holds the coordinates. All radial regions are closed on
their inner edge and open on their outer edge, so that a point at distance r_outer + 1e-9 from the center is outside
and a point exactly at r_inner is inside. The same predicate is used by the Monte Carlo engine and by the grid
rasterizer.
"""
from abc import ABC, abstractmethod
from typing import Sequence, Tuple

import numpy as np

from ..utils.numerics import InvalidInputError

__all__ = ['Region', 'Disk', 'Annulus', 'RegionUnion', 'region_from_dict', 'radial_union']


class Region(ABC):
    """Base class of the regions. Instances are immutable."""

    @property
    @abstractmethod
    def dimension(self) -> int:
        ...

    @abstractmethod
    def contains(self, x) -> np.ndarray:
        """Boolean membership of the points x (last axis = coordinates)"""
        ...

    @abstractmethod
    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        """Lower and upper corners of an axis-aligned box enclosing the region"""
        ...

    def is_empty(self) -> bool:
        return False

    def radial_extent(self) -> Tuple[np.ndarray, float, float]:
        """(center, r_inner, r_outer) of the smallest centered annulus containing the region"""
        raise InvalidInputError(f"{self!r} has no radial extent")


class _Radial(Region):

    def __init__(self, center: Sequence[float]):
        c = np.asarray(center, dtype=float)
        if c.ndim != 1 or len(c) not in (2, 3):
            raise InvalidInputError(f"A center needs 2 or 3 coordinates, got {center}")
        self.center = c
        self.center.setflags(write=False)

    @property
    def dimension(self) -> int:
        return len(self.center)

    def distance(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dimension:
            raise InvalidInputError(f"Points must have {self.dimension} coordinates")
        return np.linalg.norm(x - self.center, axis=-1)


class Disk(_Radial):
    """
    Disk (ball in 3D) {x : |x - center| < radius}

    :param center: the center coordinates
    :param radius: strictly positive radius
    """

    def __init__(self, center: Sequence[float], radius: float):
        super().__init__(center)
        if not radius > 0:
            raise InvalidInputError(f"Disk radius must be positive, got {radius}")
        self.radius = float(radius)

    def contains(self, x) -> np.ndarray:
        return self.distance(x) < self.radius

    def bounds(self):
        return self.center - self.radius, self.center + self.radius

    def radial_extent(self):
        return self.center, 0.0, self.radius

    def ray_hit(self, positions, directions) -> np.ndarray:
        """
        Distance along each ray to the first crossing of the disk boundary from outside.
        Returns inf where the ray misses the disk or starts inside it.
        """
        offset = np.asarray(positions, dtype=float) - self.center
        b = np.einsum('...i,...i->...', offset, directions)
        c = np.einsum('...i,...i->...', offset, offset) - self.radius ** 2
        disc = b * b - c
        with np.errstate(invalid='ignore'):
            t = -b - np.sqrt(disc)
        hit = (disc >= 0) & (c >= 0) & (t >= 0)
        return np.where(hit, t, np.inf)

    def __repr__(self):
        return f"Disk(center={tuple(self.center)}, radius={self.radius})"

    def __eq__(self, other):
        return (isinstance(other, Disk) and self.radius == other.radius and
                np.array_equal(self.center, other.center))

    def __hash__(self):
        return hash(('disk', tuple(self.center), self.radius))


class Annulus(_Radial):
    """
    Annulus (spherical shell in 3D) {x : r_inner <= |x - center| < r_outer}. With r_inner = 0 it is the full disk.

    :param center: the center coordinates
    :param r_inner: inner radius, >= 0
    :param r_outer: outer radius, > r_inner
    """

    def __init__(self, center: Sequence[float], r_inner: float, r_outer: float):
        super().__init__(center)
        if r_inner < 0 or not r_outer > r_inner:
            raise InvalidInputError(f"An annulus needs 0 <= r_inner < r_outer, got {r_inner}, {r_outer}")
        self.r_inner = float(r_inner)
        self.r_outer = float(r_outer)

    def contains(self, x) -> np.ndarray:
        r = self.distance(x)
        return (r >= self.r_inner) & (r < self.r_outer)

    def bounds(self):
        return self.center - self.r_outer, self.center + self.r_outer

    def radial_extent(self):
        return self.center, self.r_inner, self.r_outer

    def __repr__(self):
        return f"Annulus(center={tuple(self.center)}, r_inner={self.r_inner}, r_outer={self.r_outer})"

    def __eq__(self, other):
        return (isinstance(other, Annulus) and self.r_inner == other.r_inner and self.r_outer == other.r_outer
                and np.array_equal(self.center, other.center))

    def __hash__(self):
        return hash(('annulus', tuple(self.center), self.r_inner, self.r_outer))


class RegionUnion(Region):
    """Union of regions of the same dimension"""

    def __init__(self, parts: Sequence[Region]):
        parts = tuple(parts)
        if len(parts) == 0:
            raise InvalidInputError("A region union needs at least one part")
        if len({p.dimension for p in parts}) != 1:
            raise InvalidInputError("All parts of a union must have the same dimension")
        self.parts = parts

    @property
    def dimension(self) -> int:
        return self.parts[0].dimension

    def contains(self, x) -> np.ndarray:
        inside = self.parts[0].contains(x)
        for part in self.parts[1:]:
            inside = inside | part.contains(x)
        return inside

    def bounds(self):
        lows, highs = zip(*(p.bounds() for p in self.parts))
        return np.min(lows, axis=0), np.max(highs, axis=0)

    def radial_extent(self):
        extents = [p.radial_extent() for p in self.parts]
        center = extents[0][0]
        if any(not np.array_equal(center, e[0]) for e in extents):
            raise InvalidInputError("The parts of this union don't share a center")
        return center, min(e[1] for e in extents), max(e[2] for e in extents)

    def __repr__(self):
        return f"RegionUnion({list(self.parts)!r})"


def region_from_dict(spec: dict) -> Region:
    """Builds a Disk or an Annulus from a configuration mapping"""
    keys = set(spec)
    if keys == {'center', 'radius'}:
        return Disk(spec['center'], spec['radius'])
    if keys == {'center', 'r_inner', 'r_outer'}:
        if spec['r_inner'] == 0:
            return Disk(spec['center'], spec['r_outer'])
        return Annulus(spec['center'], spec['r_inner'], spec['r_outer'])
    raise InvalidInputError(f"Can't build a region from the keys {sorted(keys)}")


def _merge_intervals(intervals):
    merged = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return merged


def radial_union(center: Sequence[float], intervals: Sequence[Tuple[float, float]]) -> Region:
    """
    Union of concentric annuli given as [r_inner, r_outer) intervals. Overlapping or touching intervals are merged,
    and an interval starting at 0 becomes a Disk.
    """
    pieces = []
    for lo, hi in _merge_intervals(intervals):
        if lo <= 0:
            pieces.append(Disk(center, hi))
        else:
            pieces.append(Annulus(center, lo, hi))
    if len(pieces) == 1:
        return pieces[0]
    return RegionUnion(pieces)
