#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        sweep_iterators_unittest.py
# Purpose:     Tool used validate the sweep_iterators.py module
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------

# Python Libs
import sys        # python path handling
import os         # platform independent paths
import unittest   # performs test
#
# Module libs
sys.path.append(os.path.abspath((os.path.dirname(os.path.abspath(__file__)) + "/../")))   # add project root to lib search path
from specklelib.utils.sweep_iterators import sweep, sweep_n, radii_from_spec, check_increasing  # Python Script under test
from specklelib.utils.numerics import InvalidInputError
#------------------------------------------------------------------------------


class test_sweep_iterators(unittest.TestCase):

    def test_iterator_objects(self):
        """
        @note  iterator_objects
        """
        # *****************************
        # check
        self.assertListEqual(list(sweep(10)), [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10])
        self.assertListEqual(list(sweep(2, 8, 2)), [2, 4, 6, 8])
        self.assertListEqual(list(sweep(2, 8, -2)), [8, 6, 4, 2])
        self.assertListEqual(list(sweep(8, 2, 2)), [8, 6, 4, 2])
        # no drift, the stop value is kept
        self.assertListEqual(list(sweep(0.3, 1.1, 0.2)), [0.3, 0.5, 0.7, 0.9, 1.1])
        self.assertListEqual(list(sweep(0.02, 0.1, 0.02)), [0.02, 0.04, 0.06, 0.08, 0.1])
        self.assertEqual(len(list(sweep(0.01, 0.99, 0.01))), 99)
        self.assertListEqual(list(sweep_n(0.1, 0.5, 3)), [0.1, 0.3, 0.5])
        self.assertListEqual(list(sweep_n(15, -15, 13)),
                             [15.0, 12.5, 10.0, 7.5, 5.0, 2.5, 0.0, -2.5, -5.0, -7.5, -10.0, -12.5, -15.0])

    def test_iterator_errors(self):
        with self.assertRaises(InvalidInputError):
            sweep(0, 1, 0)
        with self.assertRaises(InvalidInputError):
            sweep_n(0, 1, 1)

    def test_radii_spec(self):
        self.assertListEqual(radii_from_spec([0.1, 0.2, 0.5]), [0.1, 0.2, 0.5])
        self.assertListEqual(radii_from_spec({'start': 0.1, 'stop': 0.4, 'step': 0.1}), [0.1, 0.2, 0.3, 0.4])
        self.assertListEqual(radii_from_spec({'start': 0.2, 'stop': 1.0, 'count': 5}), [0.2, 0.4, 0.6, 0.8, 1.0])
        self.assertListEqual(radii_from_spec([]), [])
        with self.assertRaises(InvalidInputError):
            radii_from_spec({'start': 0.1, 'stop': 0.4})
        with self.assertRaises(InvalidInputError):
            radii_from_spec({'start': 0.1, 'stop': 0.4, 'step': 0.1, 'steps': 2})

    def test_check_increasing(self):
        with self.assertRaises(InvalidInputError) as cm:
            check_increasing([0.1, 0.3, 0.2], 'radii')
        self.assertIn("'radii'", str(cm.exception))
        self.assertIn("0.3 followed by 0.2", str(cm.exception))
        with self.assertRaises(InvalidInputError):
            check_increasing([0.1, 0.1])
        with self.assertRaises(InvalidInputError):
            check_increasing([0.0, 0.1])
        self.assertListEqual(check_increasing((1, 2)), [1.0, 2.0])


#------------------------------------------------------------------------------
if __name__ == '__main__':
    unittest.main()
#------------------------------------------------------------------------------
