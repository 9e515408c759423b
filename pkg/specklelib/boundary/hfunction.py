#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        hfunction.py
# Purpose:     Chandrasekhar H-function and the boundary source map
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Chandrasekhar H-function for isotropic scattering with albedo w, in the inverse form

    1 / H(mu) = sqrt(1 - w) + (w / 2) int_0^1 mu' H(mu') / (mu + mu') dmu'

The integral is discretized with Gauss-Legendre nodes on [0, 1]. The discrete equation is solved by the relaxed
fixed-point iteration H <- (H + F(H)) / 2 starting from H = 1; the plain iteration H <- F(H) doesn't converge in the
conservative case w = 1. The H values between nodes are recovered from the same equation (Nystrom interpolation).

The H-function maps an incoming boundary intensity p(x, mu) of the transport problem to the Dirichlet datum of the
diffusion problem, q(x) = int_0^1 p(x, mu) H(mu) mu / 2 dmu.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Union
import logging
import math

import numpy as np

from ..utils.numerics import InvalidInputError, NumericalFailureError
from ..utils.table_io import write_two_columns

_logger = logging.getLogger("specklelib.HFunction")

__all__ = ['HFunction', 'compute_h_function', 'map_boundary_source', 'MAP_MODES']

MAP_MODES = ('isotropic-identity', 'chandrasekhar')
MAX_ITERATIONS = 100000


def gauss_legendre_unit(n_nodes: int):
    """Gauss-Legendre nodes and weights on [0, 1]"""
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class HFunction:
    """
    Tabulated H-function.

    :param nodes: Gauss-Legendre nodes on [0, 1]
    :param weights: the quadrature weights
    :param values: H at the nodes
    :param albedo: scattering albedo in (0, 1]
    :param iterations: number of fixed-point iterations used
    """
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    albedo: float = 1.0
    iterations: int = 0

    def __call__(self, mu):
        """H at arbitrary mu in [0, 1]"""
        mu = np.asarray(mu, dtype=float)
        if np.any(mu < 0) or np.any(mu > 1):
            raise InvalidInputError("H is evaluated on [0, 1]")
        kernel = self.weights * self.nodes * self.values / (mu[..., None] + self.nodes)
        inverse = math.sqrt(1.0 - self.albedo) + 0.5 * self.albedo * kernel.sum(axis=-1)
        return 1.0 / inverse

    def moment(self, order: int) -> float:
        """int_0^1 H(mu) mu^order dmu"""
        return float(np.sum(self.weights * self.nodes ** order * self.values))

    def is_non_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) >= -1e-14))

    def save(self, path: Union[str, Path]):
        """Writes the (mu, H(mu)) table as two text columns"""
        write_two_columns(path, self.nodes, self.values, header=f"mu H(mu), albedo {self.albedo!r}")
        _logger.info("H table written to %s", path)


def compute_h_function(albedo: float = 1.0, n_nodes: int = 64, tol: float = 1e-12) -> HFunction:
    """
    Solves the H equation on n_nodes Gauss-Legendre nodes.

    :param albedo: scattering albedo in (0, 1]
    :param n_nodes: number of nodes
    :param tol: sup-norm of successive iterates at which the iteration stops
    :raises InvalidInputError: on an albedo outside (0, 1] or a non-positive tolerance
    :raises NumericalFailureError: when the iteration stagnates
    """
    if not 0 < albedo <= 1:
        raise InvalidInputError(f"albedo must lie in (0, 1], got {albedo}")
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    if n_nodes < 2:
        raise InvalidInputError("n_nodes must be at least 2")
    mu, w = gauss_legendre_unit(n_nodes)
    kernel = 0.5 * albedo * w * mu / (mu[:, None] + mu)  # kernel[i, j]
    floor = math.sqrt(1.0 - albedo)
    h = np.ones(n_nodes)
    change = np.inf
    for iteration in range(1, MAX_ITERATIONS + 1):
        updated = 0.5 * (h + 1.0 / (floor + kernel @ h))
        change = float(np.max(np.abs(updated - h)))
        h = updated
        if change <= tol:
            break
    else:
        raise NumericalFailureError("H-function iteration stagnated", residual=change, iterations=MAX_ITERATIONS)
    _logger.info("H-function (albedo %g, %d nodes) converged in %d iterations", albedo, n_nodes, iteration)
    return HFunction(nodes=mu, weights=w, values=h, albedo=float(albedo), iterations=iteration)


def map_boundary_source(p: Union[float, Callable], h: HFunction, mode: str = 'isotropic-identity') -> Callable:
    """
    Maps a transport boundary source p(x, mu) to the diffusion Dirichlet datum q(x).

    In 'chandrasekhar' mode q(x) = int_0^1 p(x, mu) H(mu) mu / 2 dmu, evaluated on the H nodes. In
    'isotropic-identity' mode the result is divided by the same map applied to p = 1, so that a source independent
    of mu is returned unchanged.

    :param p: constant, or callable p(x, mu) broadcasting over an array of points x
    :param h: the H-function
    :param mode: 'isotropic-identity' (default) or 'chandrasekhar'
    :returns: the callable q(x)
    """
    if mode not in MAP_MODES:
        raise InvalidInputError(f"Unknown mode '{mode}', expected one of {MAP_MODES}")
    source = p if callable(p) else (lambda x, mu, value=float(p): value)
    factors = 0.5 * h.weights * h.values * h.nodes
    normalization = factors.sum() if mode == 'isotropic-identity' else 1.0

    def q(x):
        samples = [np.asarray(source(x, mu), dtype=float) for mu in h.nodes]
        if any(np.any(s < 0) for s in samples):
            raise InvalidInputError("The boundary source p must be non-negative")
        total = sum(f * s for f, s in zip(factors, samples))
        return total / normalization

    return q
