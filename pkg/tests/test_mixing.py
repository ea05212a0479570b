# -*- coding: utf-8 -*-
"""Unit tests for mixing-matrix construction and certification.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import json
import os
import shutil
import sys
import tempfile
import unittest

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.digraph import (DirectedGraph, gen_ring, gen_erdos_renyi, gen_multi_subring,
                          gen_spanning_tree_pair, root_set)
from core.errors import AssumptionViolationError
from core.mixing import (MixingPair, MixingError, NotUndirectedError, StructureError,
                         DecayUncertifiableError, pull_matrix, push_matrix, doubly_stochastic,
                         tree_01_matrices, root_eigenvector, second_eigenvalue_modulus,
                         certify_decay, validate_pair, build_pair)
from core.rng import make_stream, GRAPH_STREAM


def assert_certificate_holds(test, A, certificate, horizon=200):
    """Check ‖(A − 1πᵀ)ᵗ‖₂ <= alphaᵗ directly for t in [m, horizon]."""
    n = A.shape[0]
    M = A - np.outer(np.ones(n), certificate.pi)
    last = min(certificate.checked_horizon, horizon)
    for t in range(certificate.m, last + 1):
        norm = np.linalg.norm(np.linalg.matrix_power(M, t), 2)
        test.assertLessEqual(norm, certificate.alpha ** t * (1.0 + 1e-6) + 1e-300, t)


class TestConstructors(unittest.TestCase):
    """Test cases for matrix constructors."""

    def test_pull_matrix_ring(self):
        R = pull_matrix(gen_ring(3))

        expected = np.array([[0.5, 0.0, 0.5],
                             [0.5, 0.5, 0.0],
                             [0.0, 0.5, 0.5]])
        np.testing.assert_allclose(R, expected)

    def test_pull_matrix_row_stochastic(self):
        g = gen_erdos_renyi(9, 0.4, make_stream(2, GRAPH_STREAM))

        R = pull_matrix(g)

        np.testing.assert_allclose(R.sum(axis=1), np.ones(9), atol=1e-15)
        self.assertTrue(np.all(np.diag(R) > 0))
        self.assertEqual(DirectedGraph.from_matrix(R), g)

    def test_push_matrix_column_stochastic(self):
        g = gen_multi_subring(8, 3)

        C = push_matrix(g)

        np.testing.assert_allclose(C.sum(axis=0), np.ones(8), atol=1e-15)
        self.assertEqual(C[0, 0], 1.0 / 4.0)
        self.assertEqual(DirectedGraph.from_matrix(C), g)

    def test_doubly_stochastic_metropolis(self):
        g = gen_ring(5, bidirectional=True)

        W = doubly_stochastic(g)

        np.testing.assert_allclose(W, W.T)
        np.testing.assert_allclose(W.sum(axis=0), np.ones(5))
        np.testing.assert_allclose(W.sum(axis=1), np.ones(5))
        self.assertAlmostEqual(W[0, 1], 1.0 / 3.0)

    def test_doubly_stochastic_rejects_directed(self):
        with self.assertRaises(NotUndirectedError) as ctx:
            doubly_stochastic(gen_ring(4))

        self.assertEqual(len(ctx.exception.missing_edges), 4)

    def test_tree_matrices(self):
        pull, push = gen_spanning_tree_pair(6, make_stream(1, GRAPH_STREAM))

        pair = tree_01_matrices(pull, push)

        self.assertTrue(pair.spanning_tree_mode)
        np.testing.assert_array_equal(pair.R.sum(axis=1), np.ones(6))
        np.testing.assert_array_equal(pair.C.sum(axis=0), np.ones(6))
        self.assertTrue(set(np.unique(pair.R)) <= {0.0, 1.0})
        self.assertEqual(pair.R[0, 0], 1.0)

    def test_tree_matrices_reject_mismatch(self):
        pull, _ = gen_spanning_tree_pair(5, make_stream(1, GRAPH_STREAM))

        with self.assertRaises(StructureError):
            tree_01_matrices(pull, pull)
        with self.assertRaises(StructureError):
            ring = gen_ring(5)
            tree_01_matrices(ring, ring.reverse())

    def test_pair_matrices_read_only(self):
        pair = build_pair('push_pull', gen_ring(4, bidirectional=True))

        with self.assertRaises(ValueError):
            pair.R[0, 0] = 2.0

    def test_build_pair_schemes(self):
        g = gen_ring(4, bidirectional=True)

        self.assertFalse(build_pair('push_pull', g).spanning_tree_mode)
        dsgt = build_pair('dsgt', g)
        np.testing.assert_array_equal(dsgt.R, dsgt.C)
        with self.assertRaises(StructureError):
            build_pair('tree', g)
        with self.assertRaises(MixingError):
            build_pair('gossip', g)

    def test_push_pull_default_push_graph(self):
        g = gen_multi_subring(6, 2)

        pair = build_pair('push_pull', g)

        # the graph of Cᵀ equals the pull graph
        self.assertEqual(pair.push_graph().reverse(), g)
        self.assertEqual(pair.pull_graph(), g)


class TestRootEigenvector(unittest.TestCase):
    """Test cases for root_eigenvector."""

    def test_doubly_stochastic_uniform(self):
        W = doubly_stochastic(gen_ring(6, bidirectional=True))

        vector = root_eigenvector(W, root_set(gen_ring(6, bidirectional=True)))

        np.testing.assert_allclose(vector.pi, np.full(6, 1.0 / 6.0), atol=1e-12)
        self.assertLessEqual(vector.residual(W), 1e-12)

    def test_support_is_root_set(self):
        # node 0 feeds 1, which feeds 2; only node 0 is a root
        R = np.array([[1.0, 0.0, 0.0],
                      [0.5, 0.5, 0.0],
                      [0.0, 0.5, 0.5]])

        vector = root_eigenvector(R, root_set(DirectedGraph.from_matrix(R)))

        np.testing.assert_allclose(vector.pi, [1.0, 0.0, 0.0], atol=1e-12)
        self.assertEqual(vector.support(), frozenset([0]))
        self.assertEqual(vector.pi[1], 0.0)

    def test_unit_l1_nonnegative(self):
        g = gen_erdos_renyi(10, 0.3, make_stream(3, GRAPH_STREAM))
        R = pull_matrix(g)

        vector = root_eigenvector(R, root_set(g))

        self.assertAlmostEqual(vector.pi.sum(), 1.0, places=14)
        self.assertTrue(np.all(vector.pi > 0))
        self.assertLessEqual(vector.residual(R), 1e-10)

    def test_no_root_raises(self):
        g = DirectedGraph(4, [(0, 1), (1, 0), (2, 3), (3, 2)])

        with self.assertRaises(AssumptionViolationError):
            root_eigenvector(pull_matrix(g), root_set(g))

    def test_read_only(self):
        vector = root_eigenvector(np.eye(1), frozenset([0]))

        with self.assertRaises(ValueError):
            vector.pi[0] = 0.5


class TestCertifyDecay(unittest.TestCase):
    """Test cases for certify_decay."""

    def test_ring_certificate(self):
        W = doubly_stochastic(gen_ring(8, bidirectional=True))
        pi = np.full(8, 1.0 / 8.0)

        certificate = certify_decay(W, pi, T_check=300)

        self.assertGreaterEqual(certificate.m, 1)
        self.assertLess(certificate.alpha, 1.0)
        assert_certificate_holds(self, W, certificate)

    def test_alpha_close_to_second_eigenvalue(self):
        W = doubly_stochastic(gen_ring(6, bidirectional=True))

        certificate = certify_decay(W, np.full(6, 1.0 / 6.0), T_check=200)

        lam = second_eigenvalue_modulus(W)
        self.assertGreaterEqual(certificate.alpha, lam - 1e-9)
        self.assertLess(certificate.alpha, lam + 0.1 * (1.0 - lam))
        self.assertAlmostEqual(certificate.eigengap_rate, (1.0 + lam) / 2.0)

    def test_directed_certificate(self):
        g = gen_multi_subring(7, 2)
        R = pull_matrix(g)
        vector = root_eigenvector(R, root_set(g))

        certificate = certify_decay(R, vector, T_check=400)

        assert_certificate_holds(self, R, certificate)

    def test_nilpotent_deviation(self):
        pull, push = gen_spanning_tree_pair(5, make_stream(2, GRAPH_STREAM))
        pair = tree_01_matrices(pull, push)
        pi = np.zeros(5)
        pi[0] = 1.0

        certificate = certify_decay(pair.R, pi, T_check=50)

        self.assertEqual(certificate.rho, 0.0)
        assert_certificate_holds(self, np.asarray(pair.R), certificate, horizon=10)

    def test_identity_rejected(self):
        with self.assertRaises(DecayUncertifiableError) as ctx:
            certify_decay(np.eye(3), np.ones(3) / 3.0, T_check=100)

        self.assertAlmostEqual(ctx.exception.rho, 1.0)

    def test_certificate_to_dict(self):
        W = doubly_stochastic(gen_ring(4, bidirectional=True))

        data = certify_decay(W, np.full(4, 0.25), T_check=50).to_dict()

        self.assertEqual(sorted(data), ['alpha', 'checked_horizon', 'eigengap_rate', 'm', 'rho',
                                        'second_eigenvalue'])
        json.dumps(data)


class TestValidatePair(unittest.TestCase):
    """Test cases for validate_pair and MixingPair persistence."""

    def setUp(self):
        """Set up test fixtures."""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Clean up test fixtures."""
        if os.path.exists(self.temp_dir):
            shutil.rmtree(self.temp_dir)

    def test_valid_pair(self):
        g = gen_erdos_renyi(8, 0.3, make_stream(5, GRAPH_STREAM))

        report = validate_pair(build_pair('push_pull', g), T_check=500)

        self.assertTrue(report.passed, report.failed_checks())
        self.assertEqual([c['name'] for c in report.checks],
                         ['row_stochastic_R', 'column_stochastic_C', 'common_root',
                          'root_eigenvector_R', 'root_eigenvector_C', 'decay_R', 'decay_C',
                          'pi_positive'])
        self.assertGreater(report.get('pi_positive')['value'], 0.0)
        self.assertIsNotNone(report.cert_R)
        self.assertIsNotNone(report.cert_C)

    def test_disconnected_pair(self):
        g = DirectedGraph(4, [(0, 1), (1, 0), (2, 3), (3, 2)])

        report = validate_pair(build_pair('push_pull', g), T_check=100)

        self.assertFalse(report.passed)
        self.assertIn('common_root', report.failed_checks())
        self.assertIn('root_eigenvector_R', report.failed_checks())
        self.assertIsNone(report.get('nonexistent'))

    def test_non_stochastic_pair(self):
        g = gen_ring(3, bidirectional=True)
        R = pull_matrix(g)
        C = R.copy()

        report = validate_pair(MixingPair(R * 1.01, C), T_check=50)

        self.assertIn('row_stochastic_R', report.failed_checks())

    def test_tree_pair_passes(self):
        pull, push = gen_spanning_tree_pair(7, make_stream(9, GRAPH_STREAM))

        report = validate_pair(build_pair('tree', pull, push), T_check=50)

        self.assertTrue(report.passed, report.failed_checks())
        self.assertEqual(report.get('pi_positive')['value'], 1.0)

    def test_report_json(self):
        report = validate_pair(build_pair('dsgt', gen_ring(4, bidirectional=True)), T_check=50)

        checks = json.loads(report.to_json())

        self.assertEqual(len(checks), 8)

    def test_save_and_load(self):
        pair = build_pair('push_pull', gen_multi_subring(5, 2), name='msr5')

        pair.save_to_dir(self.temp_dir)
        loaded = MixingPair.load_from_dir(self.temp_dir)

        np.testing.assert_array_equal(loaded.R, pair.R)
        np.testing.assert_array_equal(loaded.C, pair.C)
        self.assertEqual(loaded.name, 'msr5')


if __name__ == '__main__':
    unittest.main()
