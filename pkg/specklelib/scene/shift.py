#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        shift.py
# Purpose:     Shift fields: regime, support and the radial displacement profile
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
The shift field describes how the scatterers of the second medium realization are displaced relative to the first
one. It is non-zero only on its support X_s. The size of the phase |k||phi| selects the regime:

* Small: |k||phi| of the order of the mean free path, phi = eta psi / |k|
* Moderate: |k||phi| of order one, phi = psi / |k|
* Large: |k||phi| >> 1, only the support X_s matters

The built-in vector field psi is radial, psi(x) = A e(r) r_hat, with r the distance to the profile center and an
envelope e that is either constant or a C1 polynomial bump vanishing on both edges of the support.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, List
import logging

import numpy as np

from .regions import Region, radial_union
from ..utils.numerics import InvalidInputError
from ..utils.sweep_iterators import ROUND_DIGITS, check_increasing

_logger = logging.getLogger("specklelib.Shift")

__all__ = ['ShiftRegime', 'ShiftField', 'wavefront_sequence', 'PROFILES']

PROFILES = ('bump', 'constant')
EDGE_TOLERANCE = 1e-14


class ShiftRegime(Enum):
    NONE = 'none'
    SMALL = 'small'
    MODERATE = 'moderate'
    LARGE = 'large'

    @classmethod
    def parse(cls, value) -> 'ShiftRegime':
        if isinstance(value, ShiftRegime):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(f"Unknown shift regime '{value}', expected one of "
                                    f"{[r.value for r in cls]}") from None


def _bump(s):
    return (4.0 * s * (1.0 - s)) ** 2


def _bump_derivative(s):
    return 32.0 * s * (1.0 - s) * (1.0 - 2.0 * s)


@dataclass(frozen=True)
class ShiftField:
    """
    A shift field with its regime and support.

    :param regime: the shift regime
    :param support: the region X_s, None when the regime is NONE
    :param amplitude: the amplitude A of psi
    :param profile: envelope of psi, 'bump' (default) or 'constant'
    """
    regime: ShiftRegime = ShiftRegime.NONE
    support: Optional[Region] = None
    amplitude: float = 1.0
    profile: str = 'bump'

    def __post_init__(self):
        object.__setattr__(self, 'regime', ShiftRegime.parse(self.regime))
        if self.regime is ShiftRegime.NONE:
            if self.support is not None:
                raise InvalidInputError("A shift field with regime 'none' can't have a support")
        elif self.support is None:
            raise InvalidInputError(f"A shift field with regime '{self.regime.value}' needs a support")
        if self.profile not in PROFILES:
            raise InvalidInputError(f"Unknown shift profile '{self.profile}', expected one of {PROFILES}")

    @classmethod
    def none(cls) -> 'ShiftField':
        return cls()

    @property
    def is_trivial(self) -> bool:
        return self.regime is ShiftRegime.NONE

    def contains(self, x) -> np.ndarray:
        """Membership in the support X_s (always False for the trivial field)"""
        x = np.asarray(x, dtype=float)
        if self.support is None:
            return np.zeros(x.shape[:-1], dtype=bool)
        return self.support.contains(x)

    def _radial(self, x):
        center, r_in, r_out = self.support.radial_extent()
        offset = np.asarray(x, dtype=float) - center
        r = np.linalg.norm(offset, axis=-1)
        return offset, r, r_in, r_out

    def _active(self, r, r_out, x):
        # the outer edge is excluded from the support, its inward limit is used there
        return self.support.contains(x) | (np.abs(r - r_out) <= EDGE_TOLERANCE * max(1.0, r_out))

    def _envelope(self, r, r_in, r_out):
        """F(r) and F'(r) of the radial profile"""
        if self.profile == 'constant':
            return np.full_like(r, self.amplitude), np.zeros_like(r)
        width = r_out - r_in
        s = np.clip((r - r_in) / width, 0.0, 1.0)
        return self.amplitude * _bump(s), self.amplitude * _bump_derivative(s) / width

    def psi(self, x) -> np.ndarray:
        """The vector field psi at the points x; zero outside the support"""
        x = np.asarray(x, dtype=float)
        if self.is_trivial:
            return np.zeros_like(x)
        offset, r, r_in, r_out = self._radial(x)
        value, _ = self._envelope(r, r_in, r_out)
        active = self.support.contains(x) & (r > 0)
        with np.errstate(invalid='ignore', divide='ignore'):
            radial = np.where(active, value / np.where(r > 0, r, 1.0), 0.0)
        return offset * radial[..., None]

    def divergence(self, x) -> np.ndarray:
        """div psi = F'(r) + (d - 1) F(r) / r at the points x; zero outside the support"""
        x = np.asarray(x, dtype=float)
        if self.is_trivial:
            return np.zeros(x.shape[:-1])
        d = x.shape[-1]
        offset, r, r_in, r_out = self._radial(x)
        value, slope = self._envelope(r, r_in, r_out)
        active = self._active(r, r_out, x) & (r > 0)
        safe_r = np.where(r > 0, r, 1.0)
        return np.where(active, slope + (d - 1) * value / safe_r, 0.0)

    def displacement(self, x, k_mag: float, mean_free_path: float) -> np.ndarray:
        """
        The physical displacement phi at the points x: eta psi / |k| in the Small regime, psi / |k| in the Moderate
        regime, zero for the trivial field.

        :raises InvalidInputError: in the Large regime, where phi has no finite representation
        """
        if self.regime is ShiftRegime.LARGE:
            raise InvalidInputError("The Large regime has no finite displacement, only its support is used")
        psi = self.psi(x)
        if self.regime is ShiftRegime.SMALL:
            return mean_free_path * psi / k_mag
        return psi / k_mag

    def with_regime(self, regime) -> 'ShiftField':
        return ShiftField(ShiftRegime.parse(regime), self.support, self.amplitude, self.profile)


def _wavefront_interval(radius: float, thickness: float):
    return round(max(radius - thickness, 0.0), ROUND_DIGITS), radius


def wavefront_sequence(center: Sequence[float], radii: Sequence[float], thickness: float = 0.1,
                       regime=ShiftRegime.LARGE, amplitude: float = 1.0, profile: str = 'bump') -> List[ShiftField]:
    """
    Shift fields of an expanding circular wavefront.

    The wavefront at radius r_n occupies the annulus [max(r_n - thickness, 0), r_n). Between two consecutive instants
    the medium differs where either wavefront is, so the n-th support is the union of the annuli at r_(n-1) and r_n.
    It is always enclosed in the disk of radius r_n.

    :param center: center of the circles
    :param radii: strictly increasing positive radii
    :param thickness: radial thickness of the wavefront, > 0
    :param regime: shift regime of the generated fields, Large by default
    :returns: one ShiftField per radius
    :raises InvalidInputError: on non-increasing radii or a non-positive thickness
    """
    if not thickness > 0:
        raise InvalidInputError(f"thickness must be positive, got {thickness}")
    radii = check_increasing(radii, 'radii')
    regime = ShiftRegime.parse(regime)
    if regime is ShiftRegime.NONE:
        raise InvalidInputError("A wavefront sequence needs a regime other than 'none'")
    fields = []
    previous = None
    for r in radii:
        intervals = [_wavefront_interval(r, thickness)]
        if previous is not None:
            intervals.append(_wavefront_interval(previous, thickness))
        support = radial_union(center, intervals)
        fields.append(ShiftField(regime, support, amplitude, profile))
        previous = r
    _logger.debug("Generated %d wavefronts around %s", len(fields), tuple(center))
    return fields
