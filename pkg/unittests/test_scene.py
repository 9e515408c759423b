#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        test_scene.py
# Purpose:     Tool used to validate the scene geometry and the shift fields
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------

# Python Libs
import sys        # python path handling
import os         # platform independent paths
import math
import unittest   # performs test

import numpy as np

#
# Module libs
sys.path.append(os.path.abspath((os.path.dirname(os.path.abspath(__file__)) + "/../")))   # add project root to lib search path
from specklelib.scene.regions import Annulus, Disk, RegionUnion, radial_union, region_from_dict
from specklelib.scene.scene import Box, Scene, in_absorber, psi_divergence, with_shift
from specklelib.scene.shift import ShiftField, ShiftRegime, wavefront_sequence
from specklelib.utils.numerics import InvalidInputError
#------------------------------------------------------------------------------


class test_regions(unittest.TestCase):

    def test_disk(self):
        disk = Disk((0.0, 0.0), 0.5)
        self.assertTrue(disk.contains([0.49, 0.0]))
        self.assertFalse(disk.contains([0.5, 0.0]))  # open set
        hits = disk.ray_hit(np.array([[-2.0, 0.0], [-2.0, 1.0], [0.0, 0.0]]),
                            np.array([[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]]))
        self.assertAlmostEqual(hits[0], 1.5)
        self.assertTrue(np.isinf(hits[1]))
        self.assertTrue(np.isinf(hits[2]))  # starts inside
        with self.assertRaises(InvalidInputError):
            Disk((0, 0), 0.0)

    def test_annulus_and_union(self):
        ring = Annulus((0, 0), 0.2, 0.4)
        self.assertTrue(ring.contains([0.2, 0.0]))
        self.assertFalse(ring.contains([0.1, 0.0]))
        self.assertFalse(ring.contains([0.4, 0.0]))
        union = radial_union((0, 0), [(0.3, 0.4), (0.0, 0.1)])
        self.assertIsInstance(union, RegionUnion)
        self.assertTrue(np.array_equal(union.contains(np.array([[0.05, 0], [0.2, 0], [0.35, 0]])),
                                       [True, False, True]))
        self.assertEqual(radial_union((0, 0), [(0.0, 0.2), (0.1, 0.3)]), Disk((0, 0), 0.3))
        with self.assertRaises(InvalidInputError):
            Annulus((0, 0), 0.4, 0.2)

    def test_region_from_dict(self):
        self.assertEqual(region_from_dict({'center': [0, 0.1], 'radius': 0.2}), Disk((0, 0.1), 0.2))
        self.assertEqual(region_from_dict({'center': [0, 0], 'r_inner': 0, 'r_outer': 0.2}), Disk((0, 0), 0.2))
        self.assertEqual(region_from_dict({'center': [0, 0], 'r_inner': 0.1, 'r_outer': 0.2}),
                         Annulus((0, 0), 0.1, 0.2))
        with self.assertRaises(InvalidInputError):
            region_from_dict({'center': [0, 0], 'radius': 0.2, 'color': 'red'})


class test_scene(unittest.TestCase):

    def setUp(self):
        self.box = Box((-1, -1), (1, 1))

    def test_box(self):
        self.assertEqual(self.box.sides, ('left', 'right', 'bottom', 'top'))
        self.assertTrue(np.array_equal(self.box.side_normal('left'), [-1.0, 0.0]))
        self.assertEqual(self.box.side_area('right'), 2.0)
        self.assertEqual(self.box.side_coordinate('top'), 1.0)
        with self.assertRaises(InvalidInputError):
            self.box.check_side('front')
        with self.assertRaises(InvalidInputError):
            Box((0, 0), (1, 0))

    def test_validation(self):
        with self.assertRaises(InvalidInputError) as cm:
            Scene(self.box, illuminated=('left',), measured=('left', 'right'))
        self.assertIn("intersect", str(cm.exception))
        with self.assertRaises(InvalidInputError):
            Scene(self.box, absorbers=(Disk((0.9, 0), 0.2),))
        with self.assertRaises(InvalidInputError):
            Scene(self.box, launch='pencil')
        with self.assertRaises(InvalidInputError):
            Scene(self.box, aperture_half_angle=2.0)
        with self.assertRaises(InvalidInputError):
            Scene(self.box, reflecting=('left',))
        with self.assertRaises(InvalidInputError):
            Scene(self.box, shift=ShiftField(ShiftRegime.LARGE, Disk((0, 0), 1.0)))

    def test_helpers(self):
        scene = Scene(self.box, absorbers=(Disk((0, 0), 0.2), Disk((0.5, 0.5), 0.1)))
        inside = in_absorber(scene, np.array([[0, 0], [0.5, 0.55], [0.5, 0]]))
        self.assertTrue(np.array_equal(inside, [True, True, False]))
        shifted = with_shift(scene, ShiftField(ShiftRegime.LARGE, Disk((0, 0), 0.5)))
        self.assertEqual(shifted.shift.regime, ShiftRegime.LARGE)
        self.assertEqual(shifted.absorbers, scene.absorbers)
        self.assertTrue(with_shift(shifted, None).shift.is_trivial)


class test_shift(unittest.TestCase):

    def test_regimes(self):
        self.assertIs(ShiftRegime.parse('Small'), ShiftRegime.SMALL)
        with self.assertRaises(InvalidInputError):
            ShiftRegime.parse('huge')
        with self.assertRaises(InvalidInputError):
            ShiftField(ShiftRegime.SMALL)
        with self.assertRaises(InvalidInputError):
            ShiftField(ShiftRegime.NONE, Disk((0, 0), 0.1))
        with self.assertRaises(InvalidInputError):
            ShiftField(ShiftRegime.SMALL, Disk((0, 0), 0.1), profile='square')

    def test_displacement(self):
        field = ShiftField(ShiftRegime.SMALL, Annulus((0, 0), 0.2, 0.6), amplitude=2.0, profile='constant')
        x = np.array([[0.4, 0.0], [0.0, 0.8]])
        psi = field.psi(x)
        self.assertTrue(np.allclose(psi, [[2.0, 0.0], [0.0, 0.0]]))
        self.assertTrue(np.allclose(field.displacement(x, 4.0, 0.1), 0.1 * psi / 4.0))
        self.assertTrue(np.allclose(field.with_regime('moderate').displacement(x, 4.0, 0.1), psi / 4.0))
        with self.assertRaises(InvalidInputError):
            field.with_regime('large').displacement(x, 4.0, 0.1)

    def test_divergence(self):
        field = ShiftField(ShiftRegime.SMALL, Annulus((0.1, -0.1), 0.2, 0.6), amplitude=1.5)
        scene = Scene(Box((-1, -1), (1, 1)), shift=field)
        rng = np.random.default_rng(3)
        angles = rng.uniform(0, 2 * math.pi, 20)
        radii = rng.uniform(0.25, 0.55, 20)
        points = np.array([0.1, -0.1]) + np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=-1)
        h = 1e-6
        numeric = np.zeros(len(points))
        for axis in range(2):
            step = np.zeros(2)
            step[axis] = h
            numeric += (field.psi(points + step)[:, axis] - field.psi(points - step)[:, axis]) / (2 * h)
        self.assertTrue(np.allclose(psi_divergence(scene, points), numeric, atol=1e-6))
        self.assertEqual(float(field.divergence(np.array([0.9, 0.9]))), 0.0)

    def test_wavefronts(self):
        fields = wavefront_sequence((0, 0), [0.1, 0.3, 0.35], thickness=0.1)
        self.assertEqual(len(fields), 3)
        self.assertTrue(all(f.regime is ShiftRegime.LARGE for f in fields))
        self.assertEqual(fields[0].support, Disk((0, 0), 0.1))
        # the second support is the union of the wavefronts at 0.1 and 0.3
        inside = fields[1].contains(np.array([[0.05, 0], [0.15, 0], [0.25, 0]]))
        self.assertTrue(np.array_equal(inside, [True, False, True]))
        self.assertEqual(fields[2].support, Annulus((0, 0), 0.2, 0.35))
        thick = wavefront_sequence((0, 0), [0.2, 0.4], thickness=2.0)
        self.assertEqual(thick[1].support, Disk((0, 0), 0.4))
        with self.assertRaises(InvalidInputError):
            wavefront_sequence((0, 0), [0.3, 0.2])
        with self.assertRaises(InvalidInputError):
            wavefront_sequence((0, 0), [0.1], thickness=0.0)
        with self.assertRaises(InvalidInputError):
            wavefront_sequence((0, 0), [0.1], regime='none')


#------------------------------------------------------------------------------
if __name__ == '__main__':
    unittest.main()
#------------------------------------------------------------------------------
