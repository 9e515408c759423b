#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        wigner.py
# Purpose:     Discrete Wigner distribution of two sampled fields
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Wigner distribution of two fields u and v,

    W[u, v](x, k) = (2 pi)^-d int exp(i k.y) u(x - eps y / 2) conj(v)(x + eps y / 2) dy

evaluated on a periodic grid. The offset eps y / 2 runs over the integer multiples m h of the grid spacing, so the
kernel u[n - m] conj(v[n + m]) is Fourier transformed over m. The wavenumbers are then k_j = pi eps j / (N h) and the
marginal sum_k W dk equals u conj(v) at every node.

Only meant for small 1D and 2D grids: the kernel holds N^2 values per point in 1D and (N1 N2)^2 values in 2D.
"""
from typing import NamedTuple, Sequence, Union
import logging
import math

import numpy as np

from ..utils.numerics import InvalidInputError

_logger = logging.getLogger("specklelib.Wigner")

__all__ = ['WignerDistribution', 'wigner_transform', 'wigner_marginal']


class WignerDistribution(NamedTuple):
    """
    :param x: node coordinates per axis
    :param k: wavenumbers per axis, in increasing order
    :param values: W with the axes (x_1, ..., x_d, k_1, ..., k_d)
    """
    x: tuple
    k: tuple
    values: np.ndarray

    @property
    def dk(self) -> float:
        return float(np.prod([axis[1] - axis[0] for axis in self.k]))


def wigner_transform(u, v, eps: float = 1.0, spacing: Union[float, Sequence[float]] = 1.0) -> WignerDistribution:
    """
    Discrete Wigner distribution of two fields sampled on the same periodic grid.

    :param u: complex samples, 1D or 2D
    :param v: complex samples with the shape of u
    :param eps: the scale parameter
    :param spacing: grid spacing h, scalar or one value per axis
    :raises InvalidInputError: on mismatched grids or an unsupported dimension
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise InvalidInputError(f"u and v must be sampled on the same grid, got {u.shape} and {v.shape}")
    d = u.ndim
    if d not in (1, 2):
        raise InvalidInputError("Only 1D and 2D grids are supported")
    if not eps > 0:
        raise InvalidInputError("eps must be positive")
    h = np.broadcast_to(np.asarray(spacing, dtype=float), (d,))
    if np.any(h <= 0):
        raise InvalidInputError("spacing must be positive")
    shape = u.shape

    node = np.indices(shape).reshape(d, *shape, *([1] * d))
    lag = np.indices(shape).reshape(d, *([1] * d), *shape)
    minus = tuple((node[a] - lag[a]) % shape[a] for a in range(d))
    plus = tuple((node[a] + lag[a]) % shape[a] for a in range(d))
    kernel = u[minus] * np.conj(v[plus])

    lag_axes = tuple(range(d, 2 * d))
    # sum_m K exp(2 pi i j m / N) = N ifft(K)
    values = np.fft.ifftn(kernel, axes=lag_axes) * np.prod(shape)
    dy = 2.0 * h / eps
    values *= float(np.prod(dy / (2.0 * math.pi)))
    values = np.fft.fftshift(values, axes=lag_axes)

    x = tuple(h[a] * np.arange(shape[a]) for a in range(d))
    k = tuple(np.fft.fftshift(math.pi * eps * np.fft.fftfreq(shape[a], d=h[a])) for a in range(d))
    _logger.debug("Wigner distribution on a %s grid", shape)
    return WignerDistribution(x, k, values)


def wigner_marginal(w: WignerDistribution) -> np.ndarray:
    """sum_k W(x, k) dk, the energy density u conj(v)"""
    d = len(w.x)
    return w.values.sum(axis=tuple(range(d, 2 * d))) * w.dk
