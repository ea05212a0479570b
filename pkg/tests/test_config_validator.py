# -*- coding: utf-8 -*-
"""Unit tests for ConfigValidator class.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import copy
import os
import sys
import unittest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.config_validator import ConfigValidator, ConfigValidationError, ConfigParseError
from core.errors import SimulationError


class TestConfigValidator(unittest.TestCase):
    """Test cases for ConfigValidator class."""

    def setUp(self):
        """Set up test fixtures."""
        self.validator = ConfigValidator()

        # Valid config for testing
        self.valid_config = {
            'version': '1.0',
            'experiment': {'name': 'unit'},
            'topology': {'kind': 'er', 'n': 8, 'p': 0.3, 'seed': 1},
            'mixing': {'scheme': 'push_pull', 'push_graph': 'reverse'},
            'problem': {'kind': 'quadratic', 'p': 5, 'sigma': 1.0},
            'schedule': {'gamma0': 0.05, 'decay_factor': 0.8, 'decay_every': 300},
            'run': {'algorithm': 'spp', 'T': 100, 'seeds': [0, 1, 2]},
        }

    def config_with(self, section, key, value):
        config = copy.deepcopy(self.valid_config)
        config.setdefault(section, {})[key] = value
        return config

    def test_validate_valid_config(self):
        """Test validating a valid configuration."""
        is_valid, errors = self.validator.validate(self.valid_config)

        self.assertTrue(is_valid)
        self.assertEqual(len(errors), 0)

    def test_validate_missing_required_key(self):
        """Test validation fails for missing required key."""
        config = copy.deepcopy(self.valid_config)
        del config['topology']

        is_valid, errors = self.validator.validate(config)

        self.assertFalse(is_valid)
        self.assertTrue(any('topology' in err for err in errors))

    def test_validate_invalid_version(self):
        """Test validation fails for invalid version."""
        config = copy.deepcopy(self.valid_config)
        config['version'] = '99.9'

        is_valid, errors = self.validator.validate(config)

        self.assertFalse(is_valid)
        self.assertTrue(any('Unsupported version' in err for err in errors))

    def test_validate_version_not_string(self):
        """Test validation fails for non-string version."""
        config = copy.deepcopy(self.valid_config)
        config['version'] = 1.0

        is_valid, errors = self.validator.validate(config)

        self.assertFalse(is_valid)
        self.assertTrue(any('must be a string' in err for err in errors))

    def test_validate_not_a_dict(self):
        is_valid, errors = self.validator.validate(['version'])

        self.assertFalse(is_valid)
        self.assertEqual(len(errors), 1)

    def test_validate_section_not_object(self):
        config = copy.deepcopy(self.valid_config)
        config['run'] = 5

        is_valid, errors = self.validator.validate(config)

        self.assertFalse(is_valid)
        self.assertTrue(any("Section 'run'" in err for err in errors))

    def test_validate_unknown_topology(self):
        is_valid, errors = self.validator.validate(
            self.config_with('topology', 'kind', 'torus'))

        self.assertFalse(is_valid)
        self.assertTrue(any('topology.kind' in err for err in errors))

    def test_validate_probability_range(self):
        for p in (0.0, 1.5, 'half'):
            is_valid, errors = self.validator.validate(self.config_with('topology', 'p', p))
            self.assertFalse(is_valid, p)
            self.assertTrue(any('topology.p' in err for err in errors))

    def test_validate_boolean_is_not_integer(self):
        is_valid, errors = self.validator.validate(self.config_with('topology', 'n', True))

        self.assertFalse(is_valid)
        self.assertTrue(any('topology.n' in err for err in errors))

    def test_validate_msr_needs_more_nodes_than_rings(self):
        config = copy.deepcopy(self.valid_config)
        config['topology'] = {'kind': 'msr', 'n': 3, 'k': 3}

        is_valid, errors = self.validator.validate(config)

        self.assertFalse(is_valid)
        self.assertTrue(any('multi-sub-ring' in err for err in errors))

    def test_validate_edges(self):
        config = copy.deepcopy(self.valid_config)
        config['topology'] = {'kind': 'edges', 'n': 3, 'edges': [[0, 1], [1, 5], [2]]}

        is_valid, errors = self.validator.validate(config)

        self.assertFalse(is_valid)
        self.assertTrue(any('edges[1]' in err for err in errors))
        self.assertTrue(any('edges[2]' in err for err in errors))

    def test_validate_decay_k_power_of_two(self):
        is_valid, errors = self.validator.validate(self.config_with('mixing', 'decay_K', 48))

        self.assertFalse(is_valid)
        self.assertTrue(any('power of two' in err for err in errors))

    def test_validate_tree_scheme_needs_tree_topology(self):
        is_valid, errors = self.validator.validate(self.config_with('mixing', 'scheme', 'tree'))

        self.assertFalse(is_valid)
        self.assertTrue(any("'tree'" in err for err in errors))

    def test_validate_dsgt_algorithm_needs_dsgt_scheme(self):
        is_valid, errors = self.validator.validate(self.config_with('run', 'algorithm', 'dsgt'))

        self.assertFalse(is_valid)
        self.assertTrue(any('dsgt' in err for err in errors))

    def test_validate_mu_above_L(self):
        config = copy.deepcopy(self.valid_config)
        config['problem'].update({'mu': 2.0, 'L': 1.0})

        is_valid, errors = self.validator.validate(config)

        self.assertFalse(is_valid)
        self.assertTrue(any('problem.mu' in err for err in errors))

    def test_validate_decay_factor_range(self):
        is_valid, errors = self.validator.validate(
            self.config_with('schedule', 'decay_factor', 1.2))

        self.assertFalse(is_valid)
        self.assertTrue(any('schedule.decay_factor' in err for err in errors))

    def test_validate_seeds(self):
        for seeds in ([], [-1], 'zero'):
            is_valid, errors = self.validator.validate(self.config_with('run', 'seeds', seeds))
            self.assertFalse(is_valid, seeds)
            self.assertTrue(any('run.seeds' in err for err in errors))

    def test_duplicate_seeds_warn(self):
        is_valid, _ = self.validator.validate(self.config_with('run', 'seeds', [1, 1]))

        self.assertTrue(is_valid)
        self.assertTrue(any('duplicates' in w for w in self.validator.get_warnings()))

    def test_unknown_section_warns(self):
        config = copy.deepcopy(self.valid_config)
        config['plots'] = {}

        is_valid, _ = self.validator.validate(config)

        self.assertTrue(is_valid)
        self.assertTrue(any('plots' in w for w in self.validator.get_warnings()))

    def test_collects_multiple_errors(self):
        config = copy.deepcopy(self.valid_config)
        config['topology']['n'] = 0
        config['run']['T'] = 0
        config['constants'] = {'norm_method': 'svd'}

        is_valid, errors = self.validator.validate(config)

        self.assertFalse(is_valid)
        self.assertGreaterEqual(len(errors), 3)

    def test_validator_resets_between_calls(self):
        self.validator.validate({'version': 2})
        is_valid, errors = self.validator.validate(self.valid_config)

        self.assertTrue(is_valid)
        self.assertEqual(errors, [])


class TestConfigErrors(unittest.TestCase):
    """Test cases for configuration exceptions."""

    def test_validation_error_message(self):
        error = ConfigValidationError(['first problem', 'second problem'], source='a.json')

        self.assertIsInstance(error, SimulationError)
        self.assertEqual(error.errors, ['first problem', 'second problem'])
        self.assertIn('a.json', str(error))
        self.assertIn('second problem', str(error))

    def test_parse_error_points_at_column(self):
        error = ConfigParseError('a.json', 3, 5, 'Expecting value', '  "n": ,')

        self.assertEqual((error.line, error.column), (3, 5))
        self.assertIn('a.json:3:5', str(error))
        self.assertIn('    ^', str(error))


if __name__ == '__main__':
    unittest.main()
