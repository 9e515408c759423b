#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        numerics.py
# Purpose:     Shared exceptions and small numerical helpers
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Exceptions shared by the solvers, plus the quadrature wrapper used for every adaptive integral of the package.
"""

import logging
import warnings
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

_logger = logging.getLogger("specklelib.Utils")

__all__ = ['InvalidInputError', 'NumericalFailureError', 'adaptive_quad', 'check_unit_vector', 'pairwise_reduce']

UNIT_TOLERANCE = 1e-12


class InvalidInputError(ValueError):
    """Raised when arguments violate the documented preconditions"""
    ...


class NumericalFailureError(ArithmeticError):
    """Raised when a numerical procedure fails to reach its target accuracy.

    :param message: human-readable description
    :param residual: achieved residual or error estimate, if known
    :param iterations: number of iterations performed, if relevant
    """

    def __init__(self, message: str, residual: Optional[float] = None, iterations: Optional[int] = None):
        if residual is not None:
            message = f"{message} (residual={residual:.3e})"
        if iterations is not None:
            message = f"{message} after {iterations} iterations"
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


def adaptive_quad(func: Callable[[float], float], a: float, b: float, *, rel_tol: float = 1e-12,
                  points: Optional[Sequence[float]] = None, limit: int = 400) -> float:
    """
    Adaptive Gauss-Kronrod quadrature (QUADPACK through scipy) of a real function on [a, b].

    The achieved error estimate is checked against the requested relative tolerance, with a small absolute
    floor so that integrals that are exactly zero do not fail.

    :raises NumericalFailureError: when QUADPACK reports non-convergence and the error estimate is too large.
    """
    kwargs = dict(epsabs=0.0, epsrel=rel_tol, limit=limit, full_output=1)
    if points is not None and len(points) > 0:
        kwargs['points'] = sorted(p for p in points if a < p < b)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        result = integrate.quad(func, a, b, **kwargs)
    value, abserr, info = result[0], result[1], result[2]
    if len(result) > 3:
        # QUADPACK flagged an issue, decide from the error estimate
        bound = max(1e3 * rel_tol * abs(value), 1e-14)
        if abserr > bound:
            raise NumericalFailureError(f"Quadrature on [{a}, {b}] did not converge: {result[3]}",
                                        residual=abserr, iterations=info.get('last'))
        _logger.debug("quad warning ignored, abserr=%g for value=%g", abserr, value)
    return value


def check_unit_vector(vector, name: str = "direction") -> np.ndarray:
    """Returns the vector as a float array, checking that its norm is 1 within UNIT_TOLERANCE"""
    v = np.asarray(vector, dtype=float)
    norm = np.linalg.norm(v, axis=-1)
    if np.any(np.abs(norm - 1.0) > UNIT_TOLERANCE):
        raise InvalidInputError(f"'{name}' must be a unit vector, got norm {norm}")
    return v


def pairwise_reduce(items: list, combine: Callable):
    """Reduces a list with a balanced binary tree, always in the same order for a given list length"""
    if len(items) == 0:
        raise InvalidInputError("Nothing to reduce")
    level = list(items)
    while len(level) > 1:
        nxt = [combine(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]
