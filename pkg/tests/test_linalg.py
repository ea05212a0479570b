# -*- coding: utf-8 -*-
"""Unit tests for spectral-norm helpers and counter-based streams.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import os
import sys
import unittest

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.errors import NumericalError
from core.linalg import spectral_norm, power_norm_root, eigenvalues_by_modulus
from core.rng import make_stream, GRADIENT_STREAM, PROBLEM_STREAM


class TestSpectralNorm(unittest.TestCase):
    """Test cases for spectral_norm."""

    def setUp(self):
        """Set up test fixtures."""
        self.M = np.random.default_rng(3).standard_normal((12, 12))

    def test_vector_is_euclidean(self):
        self.assertAlmostEqual(spectral_norm(np.array([3.0, 4.0])), 5.0)

    def test_dense_matches_numpy(self):
        self.assertAlmostEqual(spectral_norm(self.M, method='dense'), np.linalg.norm(self.M, 2),
                               places=12)

    def test_power_matches_dense(self):
        dense = spectral_norm(self.M, method='dense')
        power = spectral_norm(self.M, method='power', tol=1e-13, max_iter=100000)

        self.assertLess(abs(power - dense) / dense, 1e-8)

    def test_zero_matrix(self):
        self.assertEqual(spectral_norm(np.zeros((4, 4))), 0.0)

    def test_unknown_method(self):
        with self.assertRaises(ValueError):
            spectral_norm(self.M, method='svd')

    def test_power_iteration_cap(self):
        with self.assertRaises(NumericalError) as ctx:
            spectral_norm(self.M, method='power', max_iter=2)

        self.assertEqual(ctx.exception.iterations, 2)


class TestPowerNormRoot(unittest.TestCase):
    """Test cases for power_norm_root and eigenvalues_by_modulus."""

    def test_symmetric_matrix_gives_radius(self):
        M = np.diag([0.5, -0.25, 0.1])

        self.assertAlmostEqual(power_norm_root(M, K=16), 0.5)

    def test_nilpotent(self):
        M = np.array([[0.0, 1.0], [0.0, 0.0]])

        self.assertEqual(power_norm_root(M, K=4), 0.0)

    def test_k_power_of_two(self):
        with self.assertRaises(ValueError):
            power_norm_root(np.eye(2), K=6)

    def test_eigenvalues_sorted(self):
        values = eigenvalues_by_modulus(np.diag([0.2, -0.9, 0.5]))

        np.testing.assert_allclose(np.abs(values), [0.9, 0.5, 0.2])


class TestStreams(unittest.TestCase):
    """Test cases for make_stream."""

    def test_same_address_same_numbers(self):
        a = make_stream(7, GRADIENT_STREAM, 3, 120).standard_normal(4)
        b = make_stream(7, GRADIENT_STREAM, 3, 120).standard_normal(4)

        np.testing.assert_array_equal(a, b)

    def test_addresses_are_independent(self):
        base = make_stream(7, GRADIENT_STREAM, 3, 120).random()
        others = [make_stream(8, GRADIENT_STREAM, 3, 120).random(),
                  make_stream(7, PROBLEM_STREAM, 3, 120).random(),
                  make_stream(7, GRADIENT_STREAM, 4, 120).random(),
                  make_stream(7, GRADIENT_STREAM, 3, 121).random()]

        self.assertEqual(len(set(others + [base])), 5)

    def test_negative_address_rejected(self):
        with self.assertRaises(ValueError):
            make_stream(-1)
        with self.assertRaises(ValueError):
            make_stream(0, GRADIENT_STREAM, node=-2)

    def test_seed_must_fit(self):
        with self.assertRaises(ValueError):
            make_stream(1 << 64)


if __name__ == '__main__':
    unittest.main()
