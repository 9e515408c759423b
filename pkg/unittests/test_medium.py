#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        test_medium.py
# Purpose:     Tool used to validate the medium statistics and the transport coefficients
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------

# Python Libs
import sys        # python path handling
import os         # platform independent paths
import math
import tempfile
import unittest   # performs test
from pathlib import Path

import numpy as np
from scipy import integrate, special, stats

#
# Module libs
sys.path.append(os.path.abspath((os.path.dirname(os.path.abspath(__file__)) + "/../")))   # add project root to lib search path
from specklelib.medium.spectrum import GaussianCorrelation, IsotropicConstant, Tabulated, load_tabulated_spectrum
from specklelib.medium.kernel import (TransportCoefficients, DegenerateMediumError, NearSingularTransportError,
                                      anisotropy_g, h_vector, phase_function, phase_modulated_decay,
                                      scattering_operator_residual, sigma_differential, sigma_total)
from specklelib.medium.sampling import CosineSampler, HenyeyGreenstein, sample_scatter_cosine
from specklelib.utils.numerics import InvalidInputError
from specklelib.utils.table_io import write_two_columns
#------------------------------------------------------------------------------


class test_spectrum(unittest.TestCase):

    def test_gaussian(self):
        model = GaussianCorrelation(correlation_length=0.5, dimension=2)
        self.assertAlmostEqual(float(model.correlation(0.0)), 1.0)
        self.assertAlmostEqual(float(model.density(0.0)), 0.25 / (2 * math.pi))
        with self.assertRaises(InvalidInputError):
            GaussianCorrelation(0.0)
        with self.assertRaises(InvalidInputError):
            GaussianCorrelation(1.0, dimension=4)

    def test_gaussian_transform(self):
        # (2 pi)^-d times the integral of R over the plane gives R^(0)
        model = GaussianCorrelation(correlation_length=0.7, dimension=2)
        total = integrate.quad(lambda r: 2 * math.pi * r * float(model.correlation(r)), 0, np.inf)[0]
        self.assertAlmostEqual(total / (2 * math.pi) ** 2, float(model.density(0.0)), places=9)

    def test_tabulated(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_two_columns(Path(tmp) / "spectrum.txt", [0.0, 1.0, 2.0, 4.0], [1.0, 0.5, 0.25, 0.0],
                                     header="xi density")
            model = load_tabulated_spectrum(path, dimension=2)
        self.assertAlmostEqual(float(model.density(1.0)), 0.5)
        self.assertEqual(float(model.density(5.0)), 0.0)
        self.assertTrue(np.all(model.density(np.linspace(0, 6, 50)) >= 0))
        with self.assertRaises(InvalidInputError):
            Tabulated([0.0, 1.0, 1.0], [1.0, 1.0, 1.0])
        with self.assertRaises(InvalidInputError):
            Tabulated([0.0, 1.0], [1.0, -1.0])


class test_kernel(unittest.TestCase):

    def test_isotropic(self):
        model = IsotropicConstant(1.0, dimension=2)
        self.assertEqual(anisotropy_g(model, 3.0), 0.0)
        self.assertAlmostEqual(sigma_total(model, 2.0), 2 * math.pi / 2.0 * 2 * math.pi, places=12)
        model3 = IsotropicConstant(2.0, dimension=3)
        self.assertEqual(anisotropy_g(model3, 1.5), 0.0)
        self.assertAlmostEqual(sigma_total(model3, 1.5), 2 * math.pi * 2.0 * 4 * math.pi, places=11)

    def test_gaussian_3d(self):
        l, k = 0.5, 4.0
        model = GaussianCorrelation(l, dimension=3)
        a = (l * k) ** 2
        prefactor = (l ** 2 / (2 * math.pi)) ** 1.5
        expected_sigma = 4 * math.pi ** 2 * prefactor * (-math.expm1(-2 * a)) / a
        expected_g = 1 / math.tanh(a) - 1 / a
        self.assertLess(abs(sigma_total(model, k) / expected_sigma - 1), 1e-10)
        self.assertLess(abs(anisotropy_g(model, k) - expected_g), 1e-8)

    def test_gaussian_2d(self):
        l, k = 0.8, 3.0
        model = GaussianCorrelation(l, dimension=2)
        a = (l * k) ** 2
        # integrals of exp(a cos theta) on [0, pi] are pi I0(a) and pi I1(a)
        expected_sigma = 2 * (2 * math.pi / k) * (l ** 2 / (2 * math.pi)) * math.pi * special.ive(0, a)
        expected_g = special.ive(1, a) / special.ive(0, a)
        self.assertLess(abs(sigma_total(model, k) / expected_sigma - 1), 1e-10)
        self.assertLess(abs(anisotropy_g(model, k) - expected_g), 1e-8)

    def test_gaussian_parameter_sets(self):
        # Sigma and g straight from the spectrum, weights of the circle or of the sphere in the scattering angle
        for l, k, d in ((0.5, 2.0, 2), (1.2, 2.5, 2), (2.0, 1.0, 2), (0.3, 5.0, 3), (0.8, 3.0, 3)):
            model = GaussianCorrelation(l, dimension=d)

            def weighted(t, moment):
                jacobian = 2.0 if d == 2 else 2 * math.pi * math.sin(t)
                return jacobian * float(model.density(k * math.sqrt(2 - 2 * math.cos(t)))) * math.cos(t) ** moment

            zeroth = integrate.quad(weighted, 0, math.pi, args=(0,), epsabs=0, epsrel=1e-13, limit=200)[0]
            first = integrate.quad(weighted, 0, math.pi, args=(1,), epsabs=0, epsrel=1e-13, limit=200)[0]
            expected_sigma = 2 * math.pi * k ** (d - 3) * zeroth
            self.assertLess(abs(sigma_total(model, k) / expected_sigma - 1), 1e-10)
            self.assertLess(abs(anisotropy_g(model, k) - first / zeroth), 1e-8)

    def test_against_quadrature(self):
        model = GaussianCorrelation(1.2, dimension=2)
        k = 2.5
        num = integrate.quad(lambda t: float(phase_function(model, math.cos(t), k)) * math.cos(t), 0, math.pi,
                             epsabs=0, epsrel=1e-13, limit=200)[0]
        self.assertLess(abs(anisotropy_g(model, k) - 2 * num), 1e-8)

    def test_phase_function_normalized(self):
        model = GaussianCorrelation(0.5, dimension=3)
        total = integrate.quad(lambda mu: float(phase_function(model, mu, 2.0)), -1, 1, epsrel=1e-12)[0]
        self.assertAlmostEqual(2 * math.pi * total, 1.0, places=9)
        with self.assertRaises(InvalidInputError):
            phase_function(model, 1.5, 2.0)

    def test_differential(self):
        model = GaussianCorrelation(0.5, dimension=2)
        forward = sigma_differential(model, [1.0, 0.0], [1.0, 0.0], 2.0)
        backward = sigma_differential(model, [-1.0, 0.0], [1.0, 0.0], 2.0)
        self.assertGreater(forward, backward)
        with self.assertRaises(InvalidInputError):
            sigma_differential(model, [1.0, 1.0], [1.0, 0.0], 2.0)
        with self.assertRaises(InvalidInputError):
            sigma_differential(model, [1.0, 0.0], [1.0, 0.0], 0.0)

    def test_cell_problem(self):
        for d in (2, 3):
            for model, k in ((IsotropicConstant(1.0, dimension=d), 2.0), (GaussianCorrelation(0.5, dimension=d), 2.0),
                             (GaussianCorrelation(1.0, dimension=d), 2.0)):
                self.assertLessEqual(scattering_operator_residual(model, k), 1e-6)
        h = h_vector(GaussianCorrelation(0.5, dimension=2), [0.0, 1.0], 2.0)
        g = anisotropy_g(GaussianCorrelation(0.5, dimension=2), 2.0)
        self.assertTrue(np.allclose(h, [0.0, -1.0 / (1.0 - g)]))

    def test_phase_modulated_decay(self):
        amplitudes = np.geomspace(10.0, 1000.0, 30)
        for d in (2, 3):
            slope = phase_modulated_decay(GaussianCorrelation(0.5, dimension=d), 2.0, amplitudes)
            self.assertAlmostEqual(slope, -(d - 1) / 2, delta=0.15)

    def test_coefficients(self):
        coeffs = TransportCoefficients.from_spectrum(GaussianCorrelation(0.5, dimension=2), 4.0)
        self.assertAlmostEqual(coeffs.mean_free_path * coeffs.sigma_total, 1.0, places=14)
        self.assertAlmostEqual(coeffs.diffusion_scalar, 2 * math.pi / (2 * (1 - coeffs.anisotropy_g)))
        self.assertTrue(np.allclose(coeffs.diffusion_matrix(), coeffs.diffusion_scalar * np.eye(2)))
        described = coeffs.describe()
        self.assertEqual(described['dimension'], 2)
        self.assertEqual(described['anisotropy_g'], coeffs.anisotropy_g)

    def test_invalid_coefficients(self):
        with self.assertRaises(DegenerateMediumError):
            TransportCoefficients.synthetic(0.0)
        with self.assertRaises(NearSingularTransportError):
            TransportCoefficients(wavenumber=1.0, sigma_total=1.0, anisotropy_g=1.0)
        with self.assertRaises(DegenerateMediumError):
            sigma_total(IsotropicConstant(0.0), 1.0)


class test_sampling(unittest.TestCase):

    def test_henyey_greenstein(self):
        for d in (2, 3):
            sampler = CosineSampler(HenyeyGreenstein(0.6, d), d)
            self.assertAlmostEqual(sampler.mean_cosine(), 0.6, delta=1e-3)
            draws = sampler.sample_cosine(np.random.default_rng(7), 100000)
            self.assertAlmostEqual(float(np.mean(draws)), 0.6, delta=0.01)
            self.assertGreater(stats.kstest(draws, sampler.cdf).pvalue, 1e-4)
        with self.assertRaises(InvalidInputError):
            HenyeyGreenstein(1.0)

    def test_spectral_sampler(self):
        model = GaussianCorrelation(0.5, dimension=3)
        rng = np.random.default_rng(11)
        draws = sample_scatter_cosine(model, 4.0, rng, 50000)
        self.assertTrue(np.all(np.abs(draws) <= 1.0))
        self.assertAlmostEqual(float(np.mean(draws)), anisotropy_g(model, 4.0), delta=0.02)
        self.assertIsInstance(sample_scatter_cosine(model, 4.0, rng), float)

    def test_for_coefficients(self):
        coeffs = TransportCoefficients.synthetic(10.0, 0.3)
        sampler = CosineSampler.for_coefficients(coeffs)
        self.assertIs(sampler, CosineSampler.for_coefficients(coeffs))
        self.assertAlmostEqual(sampler.mean_cosine(), 0.3, delta=1e-3)
        with self.assertRaises(InvalidInputError):
            CosineSampler.for_coefficients(TransportCoefficients(1.0, 1.0, 0.0))


#------------------------------------------------------------------------------
if __name__ == '__main__':
    unittest.main()
#------------------------------------------------------------------------------
