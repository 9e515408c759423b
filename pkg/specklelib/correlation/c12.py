#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        c12.py
# Purpose:     Speckle correlation of two consecutive speckle patterns
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
The correlation of two speckle patterns measured on the boundary is

    C12 = |<W12>|^2 / (<W11> <W22>)

where <.> is the integral over the measured boundary. The Monte Carlo estimate uses the tallied sums, the diffusion
estimate uses the normal fluxes of the three solved fields. In the diffusion case the unknown scaling constant of the
boundary fluxes cancels in the ratio.
"""
from typing import NamedTuple, Sequence, Union
import logging
import math

import numpy as np

from ..diffusion.solver import FieldGrid, boundary_flux
from ..transport.tally import BoundaryTally
from ..utils.numerics import InvalidInputError

_logger = logging.getLogger("specklelib.Correlation")

__all__ = ['UndefinedCorrelationError', 'CorrelationEstimate', 'c12_from_tally', 'c12_from_fields']


class UndefinedCorrelationError(ZeroDivisionError):
    """No flux reaches the measured boundary, the correlation is undefined"""
    ...


class CorrelationEstimate(NamedTuple):
    value: float
    stderr: float = 0.0


def c12_from_tally(tally: BoundaryTally) -> CorrelationEstimate:
    """
    Monte Carlo estimate of C12 from a boundary tally.

    W22 has the law of W11 and reuses its tally. The standard error is obtained by the delta method from the
    per-packet covariance of (Re W12, Im W12, W11).

    :param tally: tally of the measured boundary
    :returns: the estimate and its standard error
    :raises UndefinedCorrelationError: if no packet reached the measured boundary
    """
    if tally.sum_w11 <= 0:
        raise UndefinedCorrelationError("No packet reached the measured boundary")
    value = abs(tally.sum_w12) ** 2 / (tally.sum_w11 * tally.sum_w22)
    n = tally.n_launched
    a, b, x = tally.sum_w12.real / n, tally.sum_w12.imag / n, tally.sum_w11 / n
    gradient = np.array([2 * a / x ** 2, 2 * b / x ** 2, -2 * (a * a + b * b) / x ** 3])
    variance = float(gradient @ tally.covariance() @ gradient) / n
    stderr = math.sqrt(max(variance, 0.0))
    _logger.debug("C12 from %d packets: %.6g +- %.2g", n, value, stderr)
    return CorrelationEstimate(float(value), stderr)


def _check_compatible(*fields: FieldGrid):
    reference = fields[0].grid
    for other in fields[1:]:
        if other.grid.shape != reference.shape or other.grid.spacing != reference.spacing or \
                not np.allclose(other.grid.lower, reference.lower):
            raise InvalidInputError("The fields were solved on different grids")


def c12_from_fields(w11: FieldGrid, w22: FieldGrid, w12: FieldGrid, segment: Union[str, Sequence[str]]) -> float:
    """
    Diffusion estimate of C12 from the normal fluxes of the solved fields through a segment of the measured
    boundary.

    :param w11: autocorrelation field of the first pattern
    :param w22: autocorrelation field of the second pattern (usually w11 itself)
    :param w12: cross-correlation field
    :param segment: side name or sequence of side names of the measured boundary
    :returns: |flux(w12)|^2 / (flux(w11) flux(w22))
    :raises UndefinedCorrelationError: if the autocorrelation flux vanishes
    :raises InvalidInputError: if the fields don't share the grid
    """
    _check_compatible(w11, w22, w12)
    f11 = boundary_flux(w11, segment)
    f22 = f11 if w22 is w11 else boundary_flux(w22, segment)
    f12 = boundary_flux(w12, segment)
    denominator = abs(f11 * f22)
    if denominator == 0:
        raise UndefinedCorrelationError(f"No flux through {segment}")
    return float(abs(f12) ** 2 / denominator)
