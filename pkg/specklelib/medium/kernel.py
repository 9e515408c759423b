#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        kernel.py
# Purpose:     Scattering kernel and transport coefficients derived from a spectrum
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Transport coefficients of the monokinetic radiative transfer equations.

For a wavenumber |k| the differential scattering cross section is

    sigma(p, k) = 2 pi |k|^(d-3) R^((p - k)|k|),        p, k on the unit sphere S^(d-1)

and depends on the directions only through the cosine mu = p.k. All angular integrals are written in the
scattering angle theta (mu = cos theta), where the surface element of S^(d-1) becomes G_d sin^(d-2)(theta) dtheta.
In that variable the integrands are smooth for d = 2 and d = 3, and are integrated with adaptive Gauss-Kronrod
quadrature.

The quantities derived here are:

* sigma_total(): total cross section Sigma, the inverse of the mean free path eta
* phase_function(): the normalized cross section f = sigma / Sigma
* anisotropy_g(): the mean scattering cosine g
* h_vector(): the solution h = -k / (1 - g) of the cell problem (K - I) h_j = e_j.k
* TransportCoefficients: an immutable bundle (Sigma, eta, g, diffusion constants) shared by the solvers
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence, Any
import logging
import math

import numpy as np
from scipy import integrate
from scipy.special import gamma

from .spectrum import SpectrumModel
from ..utils.numerics import InvalidInputError, adaptive_quad, check_unit_vector

_logger = logging.getLogger("specklelib.Kernel")

__all__ = ['sphere_area', 'g_constant', 'spectral_density', 'sigma_of_cosine', 'sigma_differential', 'sigma_total',
           'phase_function', 'anisotropy_g', 'h_vector', 'scattering_operator_residual', 'phase_modulated_integral',
           'phase_modulated_decay','TransportCoefficients', 'SpectralPhase', 'DegenerateMediumError',
           'NearSingularTransportError']

QUAD_REL_TOL = 1e-12
SINGULAR_G_MARGIN = 1e-12


class DegenerateMediumError(InvalidInputError):
    """The spectrum vanishes identically, so the mean free path is undefined"""
    ...


class NearSingularTransportError(ArithmeticError):
    """The anisotropy factor is too close to 1 for the diffusion constants to be defined"""
    ...


def sphere_area(dimension: int) -> float:
    """Area of the unit sphere S^(d-1): 2 pi^(d/2) / Gamma(d/2)"""
    return 2 * math.pi ** (dimension / 2) / gamma(dimension / 2)


def g_constant(dimension: int) -> float:
    """The constant G_d = 2 pi^((d-1)/2) / Gamma((d-1)/2) of the zonal integration formula"""
    return 2 * math.pi ** ((dimension - 1) / 2) / gamma((dimension - 1) / 2)


def spectral_density(model: SpectrumModel, xi) -> np.ndarray:
    """R^(|xi|) at wave-vectors xi, the last axis holding the components"""
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1:] != (model.dimension,):
        raise InvalidInputError(f"wave-vectors must have {model.dimension} components")
    return model(xi)


def _check_wavenumber(k_mag: float):
    if not k_mag > 0:
        raise InvalidInputError(f"The wavenumber must be positive, got {k_mag}")


def sigma_of_cosine(model: SpectrumModel, mu, k_mag: float) -> np.ndarray:
    """Differential cross section as a function of the scattering cosine mu (vectorized)"""
    mu = np.clip(np.asarray(mu, dtype=float), -1.0, 1.0)
    transfer = k_mag * np.sqrt(2.0 - 2.0 * mu)  # |p - k| |k|
    return 2 * math.pi * k_mag ** (model.dimension - 3) * model.density(transfer)


def sigma_differential(model: SpectrumModel, p_hat, k_hat, k_mag: float) -> float:
    """
    Differential scattering cross section sigma(p, k; |k|) = 2 pi |k|^(d-3) R^((p - k)|k|).

    :param model: the medium spectrum
    :param p_hat: unit vector
    :param k_hat: unit vector
    :param k_mag: wavenumber |k| > 0
    :raises InvalidInputError: if a direction is not a unit vector or the wavenumber isn't positive
    """
    _check_wavenumber(k_mag)
    p = check_unit_vector(p_hat, 'p_hat')
    k = check_unit_vector(k_hat, 'k_hat')
    if p.shape[-1] != model.dimension or k.shape[-1] != model.dimension:
        raise InvalidInputError(f"Directions must have {model.dimension} components")
    transfer = np.linalg.norm(p - k, axis=-1) * k_mag
    return 2 * math.pi * k_mag ** (model.dimension - 3) * model.density(transfer)


def _break_points(model: SpectrumModel, k_mag: float) -> Sequence[float]:
    """Scattering angles at which the integrand changes quickly, handed to the quadrature as hints"""
    points = []
    samples = getattr(model, 'wavenumbers', None)
    if samples is not None:
        for xi in samples:
            if 0 < xi < 2 * k_mag:
                points.append(2 * math.asin(xi / (2 * k_mag)))
    length = getattr(model, 'correlation_length', None)
    if length is not None and length * k_mag > 2:
        width = 2 * math.asin(1.0 / (length * k_mag))
        points.extend(w for w in (0.5 * width, width, 2 * width, 4 * width) if w < math.pi)
    return points


def _angular_moment(model: SpectrumModel, k_mag: float, order: int) -> float:
    """G_d * integral over theta of sigma(cos theta) cos^order(theta) sin^(d-2)(theta)"""
    d = model.dimension

    def integrand(theta):
        return (sigma_of_cosine(model, math.cos(theta), k_mag) * math.cos(theta) ** order *
                math.sin(theta) ** (d - 2))

    value = adaptive_quad(integrand, 0.0, math.pi, rel_tol=QUAD_REL_TOL, points=_break_points(model, k_mag))
    return g_constant(d) * value


@lru_cache(maxsize=256)
def _cached_sigma_total(model: SpectrumModel, k_mag: float) -> float:
    if model.is_isotropic_kernel():
        total = float(sigma_of_cosine(model, 1.0, k_mag)) * sphere_area(model.dimension)
    else:
        total = _angular_moment(model, k_mag, 0)
    if not total > 0:
        raise DegenerateMediumError(f"The spectrum {model!r} gives a zero total cross section at |k|={k_mag}")
    _logger.debug("Sigma(%g) = %.15g for %r", k_mag, total, model)
    return total


def sigma_total(model: SpectrumModel, k_mag: float) -> float:
    """
    Total scattering cross section Sigma(|k|), the integral of sigma over the unit sphere.

    :raises DegenerateMediumError: if the spectrum is identically zero on the sphere of radius 2|k|
    :raises NumericalFailureError: if the quadrature doesn't converge
    """
    _check_wavenumber(k_mag)
    return _cached_sigma_total(model, float(k_mag))


def phase_function(model: SpectrumModel, mu, k_mag: float):
    """
    Normalized differential cross section f(mu) = sigma(mu) / Sigma. Integrates to one over the unit sphere.

    :param mu: scattering cosine(s) in [-1, 1]
    """
    mu_arr = np.asarray(mu, dtype=float)
    if np.any(np.abs(mu_arr) > 1.0 + 1e-12):
        raise InvalidInputError(f"Scattering cosines must lie in [-1, 1], got {mu}")
    return sigma_of_cosine(model, mu_arr, k_mag) / sigma_total(model, k_mag)


@lru_cache(maxsize=256)
def _cached_anisotropy(model: SpectrumModel, k_mag: float) -> float:
    if model.is_isotropic_kernel():
        return 0.0
    return _angular_moment(model, k_mag, 1) / _cached_sigma_total(model, k_mag)


def anisotropy_g(model: SpectrumModel, k_mag: float) -> float:
    """
    Mean scattering cosine g(|k|) = G_d int_{-1}^{1} f(mu) mu (1 - mu^2)^((d-3)/2) dmu.

    Exactly 0 for the isotropic kernel.
    """
    _check_wavenumber(k_mag)
    return _cached_anisotropy(model, float(k_mag))


def h_vector(model: SpectrumModel, k_hat, k_mag: float) -> np.ndarray:
    """
    Solution of the cell problem (K - I) h_j(k) = e_j.k with zero mean on the sphere: h(k) = -k / (1 - g).

    :raises NearSingularTransportError: if g >= 1 - 1e-12
    """
    k = check_unit_vector(k_hat, 'k_hat')
    g = anisotropy_g(model, k_mag)
    if g >= 1.0 - SINGULAR_G_MARGIN:
        raise NearSingularTransportError(f"anisotropy factor g={g!r} is too close to 1")
    return -k / (1.0 - g)


def _sphere_quadrature(dimension: int, n_nodes: int):
    """Returns (directions, weights) of a quadrature rule on S^(d-1)"""
    if dimension == 2:
        alpha = 2 * math.pi * np.arange(n_nodes) / n_nodes
        directions = np.stack([np.cos(alpha), np.sin(alpha)], axis=-1)
        weights = np.full(n_nodes, 2 * math.pi / n_nodes)
    else:
        mu, w_mu = np.polynomial.legendre.leggauss(n_nodes)
        n_az = 2 * n_nodes
        az = 2 * math.pi * np.arange(n_az) / n_az
        sin_t = np.sqrt(1 - mu ** 2)
        directions = np.stack([np.outer(sin_t, np.cos(az)).ravel(),
                               np.outer(sin_t, np.sin(az)).ravel(),
                               np.repeat(mu, n_az)], axis=-1)
        weights = np.outer(w_mu, np.full(n_az, 2 * math.pi / n_az)).ravel()
    return directions, weights


def _test_directions(dimension: int, count: int) -> np.ndarray:
    """Directions spread over the sphere, none aligned with the quadrature nodes"""
    if dimension == 2:
        alpha = 2 * math.pi * (np.arange(count) + 0.37) / count
        return np.stack([np.cos(alpha), np.sin(alpha)], axis=-1)
    i = np.arange(count) + 0.5
    z = 1 - 2 * i / count
    az = math.pi * (1 + 5 ** 0.5) * i
    r = np.sqrt(1 - z ** 2)
    return np.stack([r * np.cos(az), r * np.sin(az), z], axis=-1)


def scattering_operator_residual(model: SpectrumModel, k_mag: float, n_directions: int = 64,
                                 n_nodes: int = 64) -> float:
    """
    Checks the cell-problem identity (K - I) h_j(k) = e_j.k for h = -k / (1 - g), where
    K h(k) = int f(p.k) h(p) dp. The operator K is applied with a fixed quadrature rule on the sphere
    (trapezoidal on the circle, Gauss-Legendre x trapezoidal on S^2) at n_directions test directions.

    :return: the largest absolute residual over all test directions and components
    """
    d = model.dimension
    g = anisotropy_g(model, k_mag)
    if g >= 1.0 - SINGULAR_G_MARGIN:
        raise NearSingularTransportError(f"anisotropy factor g={g!r} is too close to 1")
    nodes, weights = _sphere_quadrature(d, n_nodes)
    tests = _test_directions(d, n_directions)
    f = phase_function(model, np.clip(tests @ nodes.T, -1.0, 1.0), k_mag)  # (tests, nodes)
    h_nodes = -nodes / (1.0 - g)
    h_tests = -tests / (1.0 - g)
    k_h = (f * weights) @ h_nodes
    residual = k_h - h_tests - tests
    return float(np.max(np.abs(residual)))


def phase_modulated_integral(model: SpectrumModel, k_mag: float, phase_amplitude: float) -> float:
    """
    Magnitude of the phase-modulated scattering integral

        | int_{S^(d-1)} f(p.k) exp(i (p - k).a) dp |

    for a phase vector a parallel to k with |a| = |k||phi|. This is the in-scattering factor of the cross-correlation
    equation; it decays like |a|^(-(d-1)/2) for large shifts.
    """
    a = float(phase_amplitude)
    if model.dimension == 3:
        def f(mu):
            return float(phase_function(model, mu, k_mag))
        if a == 0:
            return 2 * math.pi * integrate.quad(f, -1, 1)[0]
        c = integrate.quad(f, -1.0, 1.0, weight='cos', wvar=a, limit=400)[0]
        s = integrate.quad(f, -1.0, 1.0, weight='sin', wvar=a, limit=400)[0]
        return 2 * math.pi * abs(complex(c, s))
    # the integrand is periodic and analytic in the angle: the trapezoidal rule converges spectrally
    n = int(2 * abs(a)) + 1024
    alpha = 2 * math.pi * np.arange(n) / n
    mu = np.cos(alpha)
    values = phase_function(model, mu, k_mag) * np.exp(1j * a * mu)
    return float(abs(values.sum() * 2 * math.pi / n))


def phase_modulated_decay(model: SpectrumModel, k_mag: float, amplitudes: Sequence[float]) -> float:
    """Least-squares log-log slope of phase_modulated_integral() over the given amplitudes"""
    amps = np.asarray(amplitudes, dtype=float)
    values = np.array([phase_modulated_integral(model, k_mag, a) for a in amps])
    slope = np.polyfit(np.log(amps), np.log(values), 1)[0]
    return float(slope)


class SpectralPhase(object):
    """Phase function f(mu) of a spectrum at a fixed wavenumber, usable wherever a callable of mu is expected"""

    def __init__(self, model: SpectrumModel, k_mag: float):
        self.model = model
        self.k_mag = float(k_mag)
        self.dimension = model.dimension

    def __call__(self, mu):
        return phase_function(self.model, mu, self.k_mag)

    def __repr__(self):
        return f"SpectralPhase({self.model!r}, k_mag={self.k_mag})"


@dataclass(frozen=True)
class TransportCoefficients:
    """
    Immutable bundle of the transport coefficients at one wavenumber.

    :param wavenumber: |k| > 0
    :param sigma_total: Sigma(|k|) > 0
    :param anisotropy_g: g(|k|) in (-1, 1)
    :param dimension: 2 or 3
    :param angular: callable phase function f(mu), used by the Monte Carlo sampler
    """
    wavenumber: float
    sigma_total: float
    anisotropy_g: float
    dimension: int = 2
    angular: Any = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.wavenumber > 0:
            raise InvalidInputError(f"wavenumber must be positive, got {self.wavenumber}")
        if not self.sigma_total > 0:
            raise DegenerateMediumError(f"sigma_total must be positive, got {self.sigma_total}")
        if not -1.0 < self.anisotropy_g < 1.0:
            raise NearSingularTransportError(f"anisotropy_g must lie in (-1, 1), got {self.anisotropy_g}")
        if self.dimension not in (2, 3):
            raise InvalidInputError(f"dimension must be 2 or 3, got {self.dimension}")

    @property
    def mean_free_path(self) -> float:
        """eta = 1 / Sigma"""
        return 1.0 / self.sigma_total

    @property
    def diffusion_scalar(self) -> float:
        """varpi_d / (d (1 - g)), the scalar of the diffusion matrix D = varpi_d / (d (1 - g)) I"""
        return sphere_area(self.dimension) / (self.dimension * (1.0 - self.anisotropy_g))

    @property
    def diffusion_coefficient(self) -> float:
        """1 / (1 - g), the coefficient of the limiting diffusion equations"""
        return 1.0 / (1.0 - self.anisotropy_g)

    def diffusion_matrix(self) -> np.ndarray:
        return self.diffusion_scalar * np.eye(self.dimension)

    @classmethod
    def from_spectrum(cls, model: SpectrumModel, k_mag: float) -> 'TransportCoefficients':
        """Derives the coefficients of a medium described by its correlation spectrum"""
        total = sigma_total(model, k_mag)
        g = anisotropy_g(model, k_mag)
        _logger.info("Medium %r at |k|=%g: Sigma=%.6g, eta=%.6g, g=%.6g", model, k_mag, total, 1 / total, g)
        return cls(wavenumber=float(k_mag), sigma_total=total, anisotropy_g=g, dimension=model.dimension,
                   angular=SpectralPhase(model, k_mag))

    @classmethod
    def synthetic(cls, sigma_total: float, anisotropy_g: float = 0.0, dimension: int = 2,
                  wavenumber: float = 1.0) -> 'TransportCoefficients':
        """Coefficients of a synthetic medium given directly by (Sigma, g); scattering follows Henyey-Greenstein"""
        from .sampling import HenyeyGreenstein
        return cls(wavenumber=float(wavenumber), sigma_total=float(sigma_total), anisotropy_g=float(anisotropy_g),
                   dimension=dimension, angular=HenyeyGreenstein(anisotropy_g, dimension))

    def describe(self) -> dict:
        return {'wavenumber': self.wavenumber, 'sigma_total': self.sigma_total,
                'mean_free_path': self.mean_free_path, 'anisotropy_g': self.anisotropy_g,
                'diffusion_scalar': self.diffusion_scalar, 'diffusion_coefficient': self.diffusion_coefficient,
                'dimension': self.dimension}
