#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        test_transport.py
# Purpose:     Tool used to validate the Monte Carlo transport solver
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
from unittest import mock
from pathlib import Path

import numpy as np

#
# Module libs
sys.path.append(os.path.abspath((os.path.dirname(os.path.abspath(__file__)) + "/../")))   # add project root to lib search path
from specklelib.medium.kernel import TransportCoefficients
from specklelib.medium.sampling import CosineSampler
from specklelib.scene.regions import Annulus, Disk
from specklelib.scene.scene import Box, Scene, with_shift
from specklelib.scene.shift import ShiftField, ShiftRegime
from specklelib.transport.packet import (Event, PhotonPacket, launch_batch, sample_free_path, scatter_directions,
                                         step_batch, update_correlation_weight)
from specklelib.transport.tally import BoundaryTally, TallyInvariantError, load_tally, merge_tallies, save_tally
from specklelib.transport.transport_runner import TransportRunner, InvalidSceneError, run_transport
from specklelib.transport import transport_task
from specklelib.transport.transport_task import batch_generator, clock_function, format_time_difference, simulate_batch
from specklelib.correlation.c12 import c12_from_tally
from specklelib.utils.numerics import InvalidInputError
#------------------------------------------------------------------------------


class test_packet(unittest.TestCase):

    def setUp(self):
        self.scene = Scene(Box((-1, -1), (1, 1)), launch='collimated')
        self.coeffs = TransportCoefficients.synthetic(1.0, 0.0)

    def test_launch(self):
        batch = launch_batch(Scene(Box((-1, -1), (1, 1))), np.random.default_rng(1), 1000, n_shifts=2)
        self.assertEqual(batch.weights.shape, (1000, 2))
        self.assertTrue(np.all(batch.positions[:, 0] == -1.0))
        self.assertTrue(np.all(batch.directions[:, 0] > 0))
        self.assertTrue(np.allclose(np.linalg.norm(batch.directions, axis=1), 1.0))

    def test_beer_lambert(self):
        # fraction of collimated packets crossing the box without scattering
        rng = np.random.default_rng(5)
        n = 100000
        batch = launch_batch(self.scene, rng, n)
        sampler = CosineSampler.for_coefficients(self.coeffs)
        events, sides = step_batch(batch, self.scene, self.coeffs, sampler, rng, [self.scene.shift])
        crossed = np.count_nonzero(events == Event.EXITED_MEASURED) / n
        self.assertAlmostEqual(crossed, math.exp(-2.0), delta=0.005)
        self.assertTrue(np.all(sides[events == Event.EXITED_MEASURED] == 1))

    def test_lambertian_first_moment(self):
        # the mean cosine with the inward normal is pi/4 on a line and 2/3 on a plane
        for box, expected in ((Box((-1, -1), (1, 1)), math.pi / 4), (Box((0, 0, 0), (1, 1, 1)), 2 / 3)):
            batch = launch_batch(Scene(box), np.random.default_rng(13), 200000)
            self.assertAlmostEqual(float(np.mean(batch.directions[:, 0])), expected, delta=3e-3)

    def test_free_path_mean(self):
        coeffs = TransportCoefficients.synthetic(4.0, 0.0)
        rng = np.random.default_rng(17)
        self.assertAlmostEqual(float(np.mean(sample_free_path(coeffs, rng, 200000))), 0.25, delta=0.25 * 0.01)
        # first flights in a domain too large to leave
        scene = Scene(Box((0, 0), (1000, 1000)), launch='collimated')
        batch = launch_batch(scene, rng, 100000)
        sampler = CosineSampler.for_coefficients(coeffs)
        events, _ = step_batch(batch, scene, coeffs, sampler, rng, [scene.shift])
        self.assertTrue(np.all(events == Event.SCATTERED))
        self.assertAlmostEqual(float(np.mean(batch.path_lengths)), 0.25, delta=0.25 * 0.015)

    def test_scatter_directions(self):
        rng = np.random.default_rng(2)
        for d in (2, 3):
            old = rng.normal(size=(500, d))
            old /= np.linalg.norm(old, axis=1, keepdims=True)
            mu = rng.uniform(-1, 1, 500)
            new = scatter_directions(old, mu, rng)
            self.assertTrue(np.allclose(np.linalg.norm(new, axis=1), 1.0))
            self.assertTrue(np.allclose(np.einsum('ij,ij->i', old, new), mu, atol=1e-9))

    def test_weight_update(self):
        support = Disk((0, 0), 0.5)
        packet = PhotonPacket(np.array([0.1, 0.0]), np.array([1.0, 0.0]))
        large = with_shift(self.scene, ShiftField(ShiftRegime.LARGE, support))
        update_correlation_weight(packet, [1.0, 0.0], [0.0, 1.0], large, 4.0)
        self.assertEqual(packet.corr_weight, 0j)

        packet = PhotonPacket(np.array([0.3, 0.0]), np.array([1.0, 0.0]))
        moderate = with_shift(self.scene, ShiftField(ShiftRegime.MODERATE, Annulus((0, 0), 0.2, 0.4),
                                                     amplitude=2.0, profile='constant'))
        update_correlation_weight(packet, [1.0, 0.0], [-1.0, 0.0], moderate, 4.0)
        # phase |k| (p - k).phi with phi = psi / |k| = (0.5, 0)
        self.assertAlmostEqual(packet.corr_weight, complex(math.cos(-4.0), math.sin(-4.0)))
        self.assertAlmostEqual(abs(packet.corr_weight), 1.0)

        packet = PhotonPacket(np.array([0.3, 0.0]), np.array([1.0, 0.0]))
        small = with_shift(self.scene, moderate.shift.with_regime('small'))
        with self.assertRaises(InvalidInputError):
            update_correlation_weight(packet, [1.0, 0.0], [-1.0, 0.0], small, 4.0)


class test_runner(unittest.TestCase):

    def setUp(self):
        self.box = Box((-1, -1), (1, 1))
        self.coeffs = TransportCoefficients.synthetic(5.0, 0.2)

    def test_conservation(self):
        scene = Scene(self.box)
        tally = run_transport(scene, self.coeffs, 4000, seed=3, n_workers=2, batch_size=1000)
        self.assertEqual(tally.n_launched, 4000)
        self.assertEqual(tally.n_exited + tally.n_discarded, 4000)
        self.assertEqual(sum(tally.exits_per_side.values()), tally.n_exited)
        self.assertEqual(tally.n_absorbed, 0)
        self.assertEqual(tally.seed, 3)
        self.assertLessEqual(tally.sum_w11, tally.exits_per_side['right'])

    def test_no_shift(self):
        tally = run_transport(Scene(self.box), self.coeffs, 3000, seed=1, n_workers=1, batch_size=1000)
        estimate = c12_from_tally(tally)
        self.assertEqual(estimate.value, 1.0)
        self.assertAlmostEqual(estimate.stderr, 0.0)

    def test_determinism(self):
        shift = ShiftField(ShiftRegime.MODERATE, Annulus((0, 0), 0.1, 0.5), amplitude=1.0)
        scene = Scene(self.box, shift=shift)
        first = TransportRunner(n_workers=1, batch_size=500).run(scene, self.coeffs, 2500, seed=11)
        second = TransportRunner(n_workers=3, batch_size=500).run(scene, self.coeffs, 2500, seed=11)
        self.assertEqual(first.sum_w11, second.sum_w11)
        self.assertEqual(first.sum_w12, second.sum_w12)
        self.assertEqual(first.exits_per_side, second.exits_per_side)
        other = TransportRunner(n_workers=1, batch_size=500).run(scene, self.coeffs, 2500, seed=12)
        self.assertNotEqual(first.sum_w12, other.sum_w12)

    def test_shared_histories(self):
        fields = [ShiftField(ShiftRegime.LARGE, Disk((0, 0), r)) for r in (0.2, 0.4, 0.6)]
        fields.append(ShiftField())
        tallies = TransportRunner(n_workers=2, batch_size=1000).run(Scene(self.box), self.coeffs, 4000, seed=2,
                                                                    shifts=fields)
        self.assertEqual(len(tallies), 4)
        values = [c12_from_tally(t).value for t in tallies]
        for tally in tallies:
            self.assertEqual(tally.sum_w11, tallies[0].sum_w11)
            self.assertLessEqual(abs(tally.sum_w12), tally.sum_w11)
        # nested supports give nested zeroed histories
        self.assertTrue(values[0] >= values[1] >= values[2])
        self.assertLess(values[2], 1.0)
        self.assertEqual(values[3], 1.0)

    def test_lane_refill(self):
        scene = Scene(self.box)
        widths = []

        def recording_step(batch, *args):
            widths.append(len(batch))
            return step_batch(batch, *args)

        with mock.patch.object(transport_task, 'step_batch', side_effect=recording_step):
            tally, = simulate_batch(scene, self.coeffs, [scene.shift], 3000, seed=5, batch_index=0, lane_width=64)
        self.assertEqual(max(widths), 64)
        # the width holds until the batch runs out of packets to launch
        self.assertTrue(all(w == 64 for w in widths[:len(widths) // 4]))
        self.assertEqual(tally.n_launched, 3000)
        self.assertEqual(tally.n_exited + tally.n_discarded, 3000)
        wide, = simulate_batch(scene, self.coeffs, [scene.shift], 3000, seed=5, batch_index=0, lane_width=4096)
        self.assertEqual(wide.n_exited + wide.n_discarded, 3000)
        with self.assertRaises(InvalidInputError):
            simulate_batch(scene, self.coeffs, [scene.shift], 10, seed=5, batch_index=0, lane_width=0)
        with self.assertRaises(InvalidInputError):
            TransportRunner(n_workers=1, lane_width=0)

    def test_runtime_is_wall_time(self):
        t0 = clock_function()
        tally = TransportRunner(n_workers=2, batch_size=500).run(Scene(self.box), self.coeffs, 2000, seed=8)
        wall = clock_function() - t0
        self.assertGreater(tally.runtime, 0.0)
        self.assertLessEqual(tally.runtime, wall)

    def test_moderate_tends_to_large(self):
        # |k||phi| = 1e4 inside the support scrambles the phases of every history scattering there
        support = Disk((0, 0), 0.5)
        fields = [ShiftField(ShiftRegime.LARGE, support),
                  ShiftField(ShiftRegime.MODERATE, support, amplitude=1e4, profile='constant')]
        large, moderate = (c12_from_tally(t) for t in
                           TransportRunner(n_workers=2, batch_size=2000).run(Scene(self.box), self.coeffs, 6000,
                                                                             seed=21, shifts=fields))
        self.assertLess(large.value, 1.0)
        self.assertLessEqual(abs(moderate.value - large.value),
                             3 * math.hypot(large.stderr, moderate.stderr) + 0.01)

    def test_support_inside_absorber(self):
        scene = Scene(self.box, absorbers=(Disk((0, 0), 0.3),),
                      shift=ShiftField(ShiftRegime.LARGE, Disk((0, 0), 0.2)))
        tally = run_transport(scene, self.coeffs, 3000, seed=4, n_workers=2, batch_size=1000)
        self.assertGreater(tally.n_absorbed, 0)
        self.assertEqual(c12_from_tally(tally).value, 1.0)

    def test_moderate_bound(self):
        scene = Scene(self.box, shift=ShiftField(ShiftRegime.MODERATE, Annulus((0, 0), 0.2, 0.6), amplitude=3.0))
        tally = run_transport(scene, self.coeffs, 3000, seed=9, n_workers=2, batch_size=1000)
        tally.check(conservative=True)
        estimate = c12_from_tally(tally)
        self.assertTrue(0.0 <= estimate.value < 1.0)
        self.assertGreater(estimate.stderr, 0.0)

    def test_aperture(self):
        wide = run_transport(Scene(self.box), self.coeffs, 2000, seed=6, n_workers=1)
        narrow = run_transport(Scene(self.box, aperture_half_angle=0.3), self.coeffs, 2000, seed=6, n_workers=1)
        self.assertLess(narrow.sum_w11, wide.sum_w11)
        self.assertEqual(narrow.exits_per_side, wide.exits_per_side)

    def test_invalid(self):
        with self.assertRaises(InvalidSceneError):
            run_transport(Scene(self.box, measured=()), self.coeffs, 10, seed=0, n_workers=1)
        with self.assertRaises(InvalidInputError):
            run_transport(Scene(self.box), self.coeffs, 0, seed=0, n_workers=1)
        with self.assertRaises(InvalidInputError):
            run_transport(Scene(self.box), TransportCoefficients.synthetic(5.0, dimension=3), 10, seed=0,
                          n_workers=1)
        with self.assertRaises(InvalidInputError):
            TransportRunner(n_workers=0)

    def test_streams(self):
        first = batch_generator(7, 0).random(5)
        self.assertTrue(np.array_equal(first, batch_generator(7, 0).random(5)))
        self.assertFalse(np.array_equal(first, batch_generator(7, 1).random(5)))
        self.assertEqual(format_time_difference(61.5), "01:01.500")
        self.assertEqual(format_time_difference(2.25), "02.250 secs")


class test_tally(unittest.TestCase):

    def test_save_load(self):
        tally = BoundaryTally(n_launched=10, n_exited=10, seed=5, exits_per_side={'left': 4, 'right': 6})
        tally.add_exits(np.array([1.0, 0.5j, 0.25 - 0.25j]))
        tally.add_binned('right', np.array([0, 1, 1]), np.array([1.0, 0.5j, 0.25 - 0.25j]), 2)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "tally.txt"
            save_tally(tally, path)
            loaded = load_tally(path)
        self.assertEqual(loaded.sum_w12, tally.sum_w12)
        self.assertEqual(loaded.sum_w12_re_im, tally.sum_w12_re_im)
        self.assertEqual(loaded.exits_per_side, tally.exits_per_side)
        self.assertTrue(np.array_equal(loaded.per_segment['right']['w12'], tally.per_segment['right']['w12']))
        self.assertEqual(loaded.seed, 5)

    def test_merge_and_covariance(self):
        first = BoundaryTally(n_launched=4)
        first.add_exits(np.array([1.0, 1.0]))
        second = BoundaryTally(n_launched=4)
        second.add_exits(np.array([0.0]))
        merged = first + second
        self.assertEqual(merged.n_launched, 8)
        self.assertEqual(merged.sum_w11, 3)
        self.assertEqual(merged.sum_w12, 2)
        cov = merged.covariance()
        self.assertTrue(np.allclose(cov, cov.T))
        self.assertAlmostEqual(cov[2, 2], 3 / 8 - (3 / 8) ** 2)
        with self.assertRaises(InvalidInputError):
            BoundaryTally().covariance()

    def test_invariants(self):
        tally = BoundaryTally(n_launched=4, n_exited=4)
        tally.add_exits(np.array([1.0, 1.0j]))
        tally.check(conservative=True)
        tally.sum_w12 = 3.0
        with self.assertRaises(TallyInvariantError):
            tally.check()
        tally.sum_w12 = 0j
        tally.n_exited = 3
        tally.check()
        with self.assertRaises(TallyInvariantError):
            tally.check(conservative=True)
        tally.sum_w11 = 5.0
        with self.assertRaises(ArithmeticError):
            tally.check()

    def test_merged_runtime(self):
        merged = merge_tallies(BoundaryTally(n_launched=1, runtime=2.0), BoundaryTally(n_launched=1, runtime=3.0))
        self.assertEqual(merged.runtime, 3.0)
        self.assertEqual(merged.n_launched, 2)


#------------------------------------------------------------------------------
if __name__ == '__main__':
    unittest.main()
#------------------------------------------------------------------------------
