#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        sampling.py
# Purpose:     Inverse-CDF sampling of scattering cosines
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Sampling of the scattering angle for the Monte Carlo solver.

A phase function f(mu) on S^(d-1) induces on the scattering angle theta in [0, pi] the density

    G_d f(cos theta) sin^(d-2)(theta)

which is tabulated on a uniform grid, integrated with the trapezoidal rule and inverted by linear interpolation.
"""
from functools import lru_cache
from typing import Callable, Optional
import logging
import math

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .kernel import SpectralPhase, g_constant
from .spectrum import SpectrumModel
from ..utils.numerics import InvalidInputError, NumericalFailureError

_logger = logging.getLogger("specklelib.Sampling")

__all__ = ['CosineSampler', 'HenyeyGreenstein', 'sample_scatter_cosine']

TABLE_NODES = 4096


class HenyeyGreenstein(object):
    """
    Henyey-Greenstein phase function with mean cosine g, normalized on S^(d-1).

    d = 3: f(mu) = (1 - g^2) / (4 pi (1 + g^2 - 2 g mu)^(3/2))

    d = 2: f(mu) = (1 - g^2) / (2 pi (1 + g^2 - 2 g mu))
    """

    def __init__(self, g: float, dimension: int = 2):
        if not -1.0 < g < 1.0:
            raise InvalidInputError(f"Henyey-Greenstein parameter must lie in (-1, 1), got {g}")
        if dimension not in (2, 3):
            raise InvalidInputError(f"dimension must be 2 or 3, got {dimension}")
        self.g = float(g)
        self.dimension = dimension

    def __call__(self, mu):
        mu = np.asarray(mu, dtype=float)
        g = self.g
        base = 1.0 + g * g - 2.0 * g * mu
        if self.dimension == 3:
            return (1.0 - g * g) / (4 * math.pi * base ** 1.5)
        return (1.0 - g * g) / (2 * math.pi * base)

    def __repr__(self):
        return f"HenyeyGreenstein(g={self.g}, dimension={self.dimension})"


class CosineSampler(object):
    """
    Reusable inverse-CDF table of the scattering angle for a phase function.

    :param phase: callable f(mu), vectorized over numpy arrays
    :param dimension: 2 or 3
    :param n_nodes: number of table nodes in theta
    :raises NumericalFailureError: if the tabulated density isn't finite and positive
    """

    def __init__(self, phase: Callable, dimension: int = 2, n_nodes: int = TABLE_NODES):
        if n_nodes < 2:
            raise InvalidInputError("The sampling table needs at least 2 nodes")
        self.phase = phase
        self.dimension = dimension
        self.theta = np.linspace(0.0, math.pi, n_nodes)
        density = g_constant(dimension) * np.asarray(phase(np.cos(self.theta)), dtype=float)
        if dimension == 3:
            density = density * np.sin(self.theta)
        if not np.all(np.isfinite(density)) or np.any(density < 0):
            raise NumericalFailureError("The phase function table contains invalid values")
        cdf = cumulative_trapezoid(density, self.theta, initial=0.0)
        total = cdf[-1]
        if not total > 0:
            raise NumericalFailureError("The phase function table has zero mass", residual=total)
        if abs(total - 1.0) > 1e-3:
            _logger.warning("Phase function table integrates to %.6g instead of 1", total)
        self.table = cdf / total
        self.table[-1] = 1.0

    def sample_angle(self, rng: np.random.Generator, size=None):
        """Scattering angles theta in [0, pi]"""
        return np.interp(rng.random(size), self.table, self.theta)

    def sample_cosine(self, rng: np.random.Generator, size=None):
        """Scattering cosines mu = cos(theta)"""
        return np.cos(self.sample_angle(rng, size))

    def cdf(self, mu):
        """Distribution function P(cos(theta) <= mu) from the table"""
        theta = np.arccos(np.clip(np.asarray(mu, dtype=float), -1.0, 1.0))
        return 1.0 - np.interp(theta, self.theta, self.table)

    def mean_cosine(self) -> float:
        """Mean of cos(theta) under the tabulated law"""
        # integral of cos(theta) dF = [cos F] + integral of sin(theta) F dtheta
        return float(-1.0 + np.trapezoid(np.sin(self.theta) * self.table, self.theta))

    @classmethod
    def for_coefficients(cls, coeffs) -> 'CosineSampler':
        """The sampler of the phase law carried by a TransportCoefficients instance"""
        if coeffs.angular is None:
            raise InvalidInputError("These transport coefficients carry no phase function")
        return _cached_sampler(coeffs.angular, coeffs.dimension)


@lru_cache(maxsize=64)
def _cached_sampler(phase, dimension: int) -> CosineSampler:
    return CosineSampler(phase, dimension)


@lru_cache(maxsize=64)
def _spectral_sampler(model: SpectrumModel, k_mag: float) -> CosineSampler:
    return CosineSampler(SpectralPhase(model, k_mag), model.dimension)


def sample_scatter_cosine(model: SpectrumModel, k_mag: float, rng_state: np.random.Generator,
                          size: Optional[int] = None):
    """
    Draws scattering cosines with density proportional to f(mu)(1 - mu^2)^((d-3)/2).

    :param model: the medium spectrum
    :param k_mag: wavenumber
    :param rng_state: a numpy Generator owned by the caller
    :param size: number of draws, None for a single float
    """
    sampler = _spectral_sampler(model, float(k_mag))
    draws = sampler.sample_cosine(rng_state, size)
    return float(draws) if size is None else draws
