#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        test_diffusion.py
# Purpose:     Tool used to validate the diffusion grid solver
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
import warnings
import unittest   # performs test
from pathlib import Path

import numpy as np

#
# Module libs
sys.path.append(os.path.abspath((os.path.dirname(os.path.abspath(__file__)) + "/../")))   # add project root to lib search path
from specklelib.diffusion.problem import DiffusionProblem, GridSpec
from specklelib.diffusion.solver import boundary_flux, link_fluxes, save_field, solve_diffusion
from specklelib.correlation.c12 import UndefinedCorrelationError, c12_from_fields
from specklelib.medium.kernel import TransportCoefficients
from specklelib.scene.regions import Annulus, Disk
from specklelib.scene.scene import Box, Scene, with_shift
from specklelib.scene.shift import ShiftField, ShiftRegime
from specklelib.utils.numerics import InvalidInputError
#------------------------------------------------------------------------------


def small_shift_c12(spacing: float) -> float:
    shift = ShiftField(ShiftRegime.SMALL, Annulus((0, 0), 0.1, 0.4), amplitude=5.0)
    scene = Scene(Box((-1, -0.5), (1, 0.5)), reflecting=('bottom', 'top'), shift=shift)
    w11 = solve_diffusion(DiffusionProblem.from_scene(with_shift(scene, None), None, spacing))
    w12 = solve_diffusion(DiffusionProblem.from_scene(scene, None, spacing, 'cross_correlation'))
    return c12_from_fields(w11, w11, w12, 'right')


class test_grid(unittest.TestCase):

    def test_grid_spec(self):
        grid = GridSpec((-1, -1), (1, 1), 0.1)
        self.assertEqual(grid.shape, (21, 21))
        self.assertEqual(grid.nodes().shape, (21, 21, 2))
        self.assertEqual(int(np.count_nonzero(grid.side_mask('top'))), 21)
        with self.assertRaises(InvalidInputError):
            GridSpec((0, 0), (1, 1), 0.3)
        with self.assertRaises(InvalidInputError):
            GridSpec((0, 0), (1, 1), 0.0)

    def test_problem_kinds(self):
        scene = Scene(Box((-1, -1), (1, 1)), absorbers=(Disk((0.5, 0), 0.2),),
                      shift=ShiftField(ShiftRegime.LARGE, Disk((-0.3, 0), 0.2)))
        auto = DiffusionProblem.from_scene(scene, None, 0.1)
        cross = DiffusionProblem.from_scene(scene, None, 0.1, 'cross_correlation')
        self.assertEqual(len(auto.excluded_regions), 1)
        self.assertEqual(len(cross.excluded_regions), 2)
        self.assertTrue(auto.is_real and cross.is_real)
        small = DiffusionProblem.from_scene(with_shift(scene, scene.shift.with_regime('small')), None, 0.1,
                                            'cross_correlation')
        self.assertFalse(small.is_real)
        with self.assertRaises(InvalidInputError):
            DiffusionProblem.from_scene(scene, None, 0.1, 'mixed')
        coeffs = TransportCoefficients.synthetic(10.0, 0.5)
        self.assertAlmostEqual(DiffusionProblem.from_scene(scene, coeffs, 0.1).diffusion_scalar, 2.0)


class test_solver(unittest.TestCase):

    def test_strip_flux(self):
        # W = 1 - x / L between the illuminated and the measured side
        length, height = 2.0, 1.0
        scene = Scene(Box((0, 0), (length, height)), reflecting=('bottom', 'top'))
        field = solve_diffusion(DiffusionProblem.from_scene(scene, None, 0.05))
        x = field.grid.nodes()[..., 0]
        self.assertTrue(np.allclose(field.values.real, 1 - x / length, atol=1e-10))
        self.assertAlmostEqual(boundary_flux(field, 'right'), -height / length, places=9)
        self.assertFalse(field.disconnected)
        with self.assertRaises(InvalidInputError):
            boundary_flux(field, 'left')

    def test_flux_balance(self):
        scene = Scene(Box((-1, -1), (1, 1)), absorbers=(Disk((0.2, 0.1), 0.3),),
                      shift=ShiftField(ShiftRegime.SMALL, Annulus((-0.4, 0), 0.1, 0.5), amplitude=2.0))
        for kind in ('autocorrelation', 'cross_correlation'):
            field = solve_diffusion(DiffusionProblem.from_scene(scene, None, 0.05, kind))
            fluxes = link_fluxes(field)
            total = sum(fluxes.values())
            self.assertLess(abs(total), 1e-8 * abs(fluxes['left']))
            self.assertGreater(fluxes['left'].real, 0)

    def test_identical_problems(self):
        scene = Scene(Box((-1, -1), (1, 1)), absorbers=(Disk((0, 0), 0.2),))
        w11 = solve_diffusion(DiffusionProblem.from_scene(scene, None, 0.05))
        w12 = solve_diffusion(DiffusionProblem.from_scene(scene, None, 0.05, 'cross_correlation'))
        self.assertAlmostEqual(c12_from_fields(w11, w11, w12, 'right'), 1.0, places=12)
        # a wavefront hidden in the absorber excludes no further node
        hidden = with_shift(scene, ShiftField(ShiftRegime.LARGE, Disk((0, 0), 0.15)))
        w12 = solve_diffusion(DiffusionProblem.from_scene(hidden, None, 0.05, 'cross_correlation'))
        self.assertAlmostEqual(c12_from_fields(w11, w11, w12, 'right'), 1.0, places=12)

    def test_divergence_free_shift(self):
        scene = Scene(Box((-1, -1), (1, 1)), shift=ShiftField(ShiftRegime.SMALL, Annulus((0, 0), 0.1, 0.5),
                                                              amplitude=0.0))
        w11 = solve_diffusion(DiffusionProblem.from_scene(with_shift(scene, None), None, 0.05))
        w12 = solve_diffusion(DiffusionProblem.from_scene(scene, None, 0.05, 'cross_correlation'))
        self.assertAlmostEqual(c12_from_fields(w11, w11, w12, 'right'), 1.0, places=12)

    def test_small_regime(self):
        with warnings.catch_warnings():
            # the complex operator goes through the connectivity check without a lossy cast
            warnings.simplefilter('error', np.exceptions.ComplexWarning)
            value = small_shift_c12(0.05)
        self.assertTrue(0.0 < value < 1.0)

    def test_convergence_order(self):
        # flux through the measured side of the open square for h = 1/64, 1/128, 1/256
        scene = Scene(Box((-1, -1), (1, 1)))
        fluxes = [boundary_flux(solve_diffusion(DiffusionProblem.from_scene(scene, None, 1 / n)), 'right')
                  for n in (64, 128, 256)]
        order = math.log2(abs(fluxes[0] - fluxes[1]) / abs(fluxes[1] - fluxes[2]))
        self.assertGreaterEqual(order, 1.7)
        self.assertAlmostEqual(fluxes[2], -0.2206, delta=1e-3)

    def test_large_regime(self):
        scene = Scene(Box((-1, -1), (1, 1)))
        w11 = solve_diffusion(DiffusionProblem.from_scene(scene, None, 0.05))
        values = []
        for radius in (0.2, 0.4, 0.6):
            shifted = with_shift(scene, ShiftField(ShiftRegime.LARGE, Disk((0, 0), radius)))
            w12 = solve_diffusion(DiffusionProblem.from_scene(shifted, None, 0.05, 'cross_correlation'))
            values.append(c12_from_fields(w11, w11, w12, 'right'))
        self.assertTrue(1.0 > values[0] > values[1] > values[2] > 0.0)

    def test_undefined(self):
        scene = Scene(Box((-1, -1), (1, 1)), source_intensity=0.0)
        field = solve_diffusion(DiffusionProblem.from_scene(scene, None, 0.1))
        self.assertTrue(np.all(field.values == 0))
        with self.assertRaises(UndefinedCorrelationError):
            c12_from_fields(field, field, field, 'right')

    def test_incompatible_grids(self):
        scene = Scene(Box((-1, -1), (1, 1)))
        coarse = solve_diffusion(DiffusionProblem.from_scene(scene, None, 0.1))
        fine = solve_diffusion(DiffusionProblem.from_scene(scene, None, 0.05))
        with self.assertRaises(InvalidInputError):
            c12_from_fields(coarse, coarse, fine, 'right')

    def test_save_field(self):
        scene = Scene(Box((0, 0), (1, 1)))
        field = solve_diffusion(DiffusionProblem.from_scene(scene, None, 0.25))
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "w11.txt"
            save_field(field, path)
            data = np.loadtxt(path)
        self.assertEqual(data.shape, (10, 5))
        self.assertTrue(np.allclose(data[:5], field.values.real))


#------------------------------------------------------------------------------
if __name__ == '__main__':
    unittest.main()
#------------------------------------------------------------------------------
