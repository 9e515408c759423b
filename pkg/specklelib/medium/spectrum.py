#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        spectrum.py
# Purpose:     Correlation spectra of the random index-of-refraction fluctuations
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Statistics of the random medium.

The fluctuations V of the squared index of refraction are a stationary, statistically isotropic, mean-zero process
with two-point correlation R(x) = E[V(0)V(x)]. The Fourier convention used everywhere in the package is

.. math::

    \\hat f(\\xi) = (2\\pi)^{-d} \\int e^{i \\xi\\cdot x} f(x) dx

so that E[V^(p) V^(q)] = R^(p) delta(p + q). Only the spectral density R^, as a function of |xi|, is needed by the
transport and diffusion models.
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Sequence, Union
import logging
import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from ..utils.numerics import InvalidInputError
from ..utils.table_io import read_two_columns

_logger = logging.getLogger("specklelib.Spectrum")

__all__ = ['SpectrumModel', 'GaussianCorrelation', 'IsotropicConstant', 'Tabulated', 'load_tabulated_spectrum']


class SpectrumModel(ABC):
    """
    Base class of the correlation spectra. Subclasses implement density(), the spectral density R^ evaluated at
    wavenumber magnitudes |xi|. Instances are immutable and can be shared between workers.

    :param dimension: space dimension, 2 or 3
    """

    kind: str = ''

    def __init__(self, dimension: int = 2):
        if dimension not in (2, 3):
            raise InvalidInputError(f"dimension must be 2 or 3, got {dimension}")
        self._dimension = int(dimension)

    @property
    def dimension(self) -> int:
        return self._dimension

    @abstractmethod
    def density(self, xi_mag) -> np.ndarray:
        """Spectral density R^ at the wavenumber magnitudes |xi| (array or scalar)."""
        ...

    def __call__(self, xi) -> np.ndarray:
        """Spectral density at wave-vectors xi (last axis is the vector component)."""
        xi = np.asarray(xi, dtype=float)
        return self.density(np.linalg.norm(xi, axis=-1))

    def is_isotropic_kernel(self) -> bool:
        """True when the scattering kernel is direction independent (constant spectrum)"""
        return False

    def describe(self) -> dict:
        return {'kind': self.kind, 'dimension': self.dimension}

    def __repr__(self):
        args = ', '.join(f"{k}={v!r}" for k, v in self.describe().items() if k != 'kind')
        return f"{self.__class__.__name__}({args})"


class GaussianCorrelation(SpectrumModel):
    """
    Gaussian correlation R(x) = exp(-|x|^2 / (2 l^2)). Its transform under the package convention is closed form:

    R^(xi) = (l^2 / (2 pi))^(d/2) exp(-l^2 |xi|^2 / 2)

    :param correlation_length: the correlation length l, strictly positive
    """
    kind = 'gaussian'

    def __init__(self, correlation_length: float = 1.0, dimension: int = 2):
        super().__init__(dimension)
        if not correlation_length > 0:
            raise InvalidInputError(f"correlation_length must be positive, got {correlation_length}")
        self.correlation_length = float(correlation_length)
        self._prefactor = (self.correlation_length ** 2 / (2 * math.pi)) ** (self.dimension / 2)

    def correlation(self, x_mag) -> np.ndarray:
        """The spatial correlation R at distances |x|"""
        x_mag = np.asarray(x_mag, dtype=float)
        return np.exp(-x_mag ** 2 / (2 * self.correlation_length ** 2))

    def density(self, xi_mag) -> np.ndarray:
        xi_mag = np.asarray(xi_mag, dtype=float)
        return self._prefactor * np.exp(-0.5 * (self.correlation_length * xi_mag) ** 2)

    def describe(self) -> dict:
        return {'kind': self.kind, 'correlation_length': self.correlation_length, 'dimension': self.dimension}


class IsotropicConstant(SpectrumModel):
    """Constant spectrum R^ = level. Leads to isotropic scattering (f constant on the sphere)."""
    kind = 'isotropic'

    def __init__(self, level: float = 1.0, dimension: int = 2):
        super().__init__(dimension)
        if level < 0:
            raise InvalidInputError(f"level must be non-negative, got {level}")
        self.level = float(level)

    def density(self, xi_mag) -> np.ndarray:
        return np.full(np.shape(xi_mag), self.level, dtype=float) if np.ndim(xi_mag) else np.float64(self.level)

    def is_isotropic_kernel(self) -> bool:
        return True

    def describe(self) -> dict:
        return {'kind': self.kind, 'level': self.level, 'dimension': self.dimension}


class Tabulated(SpectrumModel):
    """
    Spectrum given by samples (|xi|, R^). Between samples the density is interpolated with a monotone cubic
    (PCHIP) interpolant and clamped at zero. Below the first sample the first density is held, above the last
    sample the density is zero.

    :param wavenumbers: strictly increasing, non-negative sample locations
    :param densities: non-negative sample values
    """
    kind = 'tabulated'

    def __init__(self, wavenumbers: Sequence[float], densities: Sequence[float], dimension: int = 2):
        super().__init__(dimension)
        xi = np.asarray(wavenumbers, dtype=float)
        rho = np.asarray(densities, dtype=float)
        if xi.ndim != 1 or xi.shape != rho.shape or len(xi) < 2:
            raise InvalidInputError("A tabulated spectrum needs two equally long lists with at least 2 samples")
        if np.any(np.diff(xi) <= 0):
            raise InvalidInputError("Tabulated wavenumbers must be strictly increasing")
        if xi[0] < 0:
            raise InvalidInputError("Tabulated wavenumbers must be non-negative")
        if np.any(rho < 0):
            raise InvalidInputError("Tabulated densities must be non-negative")
        self.wavenumbers = xi
        self.densities = rho
        self._interp = PchipInterpolator(xi, rho, extrapolate=False)

    def density(self, xi_mag) -> np.ndarray:
        xi_mag = np.asarray(xi_mag, dtype=float)
        values = self._interp(np.clip(xi_mag, self.wavenumbers[0], None))
        values = np.where(xi_mag > self.wavenumbers[-1], 0.0, values)
        values = np.nan_to_num(values, nan=0.0)
        return np.clip(values, 0.0, None)

    def describe(self) -> dict:
        return {'kind': self.kind, 'samples': len(self.wavenumbers), 'dimension': self.dimension}


def load_tabulated_spectrum(path: Union[str, Path], dimension: int = 2) -> Tabulated:
    """Loads a spectrum from a two-column text file (wavenumber, density), '#' comments allowed"""
    xi, rho = read_two_columns(path)
    _logger.info("Loaded tabulated spectrum with %d samples from %s", len(xi), path)
    return Tabulated(xi, rho, dimension=dimension)
