# -*- coding: utf-8 -*-
"""Unit tests for Trace records and aggregation.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import json
import math
import os
import sys
import unittest

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.trace import CSV_COLUMNS, Trace, TraceRecord, decay_profile, smoothed


def record(t, value, f_hat=1.5, dist_sq=None):
    return TraceRecord(t=t, gamma=0.1, grad_norm_sq=value, consensus=2.0 * value,
                       tracking=0.0, invariant_residual=0.0, f_hat=f_hat, dist_sq=dist_sq)


class TestTrace(unittest.TestCase):
    """Test cases for Trace class."""

    def setUp(self):
        """Set up test fixtures."""
        self.trace = Trace([record(0, 4.0, dist_sq=1.0), record(10, 2.0, dist_sq=0.5),
                            record(20, 0.0, dist_sq=0.25)], metadata={'seed': 3})

    def test_csv_header_and_rows(self):
        lines = self.trace.to_csv_string().splitlines()

        self.assertEqual(lines[0], ','.join(CSV_COLUMNS))
        self.assertEqual(lines[1], '0,0.10000000000000001,4,8,0,0,1.5')
        self.assertEqual(len(lines), 4)

    def test_missing_loss_is_empty_field(self):
        trace = Trace([record(0, 1.0, f_hat=None)])

        self.assertTrue(trace.to_csv_string().splitlines()[1].endswith(',0,0,'))

    def test_csv_parse(self):
        parsed = Trace.from_csv_string(self.trace.to_csv_string())

        self.assertEqual([r.t for r in parsed.records], [0, 10, 20])
        self.assertEqual(parsed.records[1].gamma, 0.1)
        self.assertIsNone(parsed.records[0].dist_sq)

    def test_column_and_averages(self):
        self.assertEqual(list(self.trace.column('grad_norm_sq')), [4.0, 2.0, 0.0])
        self.assertEqual(self.trace.time_average(), 2.0)
        self.assertEqual(self.trace.tail_average('dist_sq', window=2), 0.375)
        self.assertAlmostEqual(self.trace.tail_average('dist_sq'), 1.75 / 3.0)

    def test_column_none_is_nan(self):
        trace = Trace([record(0, 1.0, f_hat=None)])

        self.assertTrue(math.isnan(trace.column('f_hat')[0]))

    def test_metadata_json(self):
        self.assertEqual(json.loads(self.trace.metadata_json()), {'seed': 3})

    def test_len(self):
        self.assertEqual(len(self.trace), 3)


class TestAggregate(unittest.TestCase):
    """Test cases for Trace.aggregate."""

    def test_mean_across_seeds(self):
        a = Trace([record(0, 1.0), record(5, 3.0)], metadata={'seed': 0})
        b = Trace([record(0, 3.0), record(5, 5.0)], metadata={'seed': 1})

        mean = Trace.aggregate([a, b])

        self.assertEqual(list(mean.column('grad_norm_sq')), [2.0, 4.0])
        self.assertEqual(mean.metadata['seeds'], [0, 1])
        self.assertEqual(mean.metadata['aggregate'], 'mean')

    def test_none_fields_stay_none(self):
        a = Trace([record(0, 1.0, f_hat=None)])
        b = Trace([record(0, 1.0)])

        self.assertIsNone(Trace.aggregate([a, b]).records[0].f_hat)

    def test_mismatched_iterations(self):
        a = Trace([record(0, 1.0), record(5, 1.0)])
        b = Trace([record(0, 1.0), record(6, 1.0)])

        with self.assertRaises(ValueError):
            Trace.aggregate([a, b])

    def test_empty(self):
        with self.assertRaises(ValueError):
            Trace.aggregate([])


class TestDecayProfile(unittest.TestCase):
    """Test cases for smoothed and decay_profile."""

    def test_geometric_decay(self):
        values = 10.0 ** (-np.arange(400) / 100.0)

        profile = decay_profile(values, 50)

        self.assertAlmostEqual(profile['orders_of_magnitude'], 3.5)
        self.assertEqual(profile['max_relative_rise'], 0.0)
        self.assertEqual(profile['rises'], 0)
        self.assertEqual(profile['window'], 50)

    def test_rise_measured_from_running_minimum(self):
        profile = decay_profile([4.0, 4.0, 1.0, 1.0, 2.0, 2.0], 2)

        # smoothed curve 4, 2.5, 1, 1.5, 2
        self.assertAlmostEqual(profile['max_relative_rise'], 1.0)
        self.assertEqual(profile['rises'], 2)
        self.assertAlmostEqual(profile['orders_of_magnitude'], math.log10(2.0))

    def test_zero_end(self):
        profile = decay_profile([1.0, 0.0, 0.0], 1)

        self.assertEqual(profile['orders_of_magnitude'], float('inf'))
        self.assertEqual(profile['end'], 0.0)

    def test_window_checks(self):
        np.testing.assert_allclose(smoothed([1.0, 3.0, 5.0], 2), [2.0, 4.0])
        with self.assertRaises(ValueError):
            smoothed([1.0, 2.0], 3)
        with self.assertRaises(ValueError):
            smoothed([1.0, 2.0], 0)

    def test_trace_profile(self):
        trace = Trace([record(t, 2.0 ** -t) for t in range(4)])

        profile = trace.decay_profile(window=2)

        self.assertAlmostEqual(profile['start'], 0.75)
        self.assertAlmostEqual(profile['end'], 0.1875)


if __name__ == '__main__':
    unittest.main()
