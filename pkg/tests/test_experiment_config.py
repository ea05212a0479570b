# -*- coding: utf-8 -*-
"""Unit tests for ExperimentConfig class.

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

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.experiment_config import ExperimentConfig, CONFIG_PATH_ENV, OUTPUT_ROOT_ENV
from config.config_validator import ConfigValidationError, ConfigParseError

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


class TestExperimentConfig(unittest.TestCase):
    """Test cases for ExperimentConfig class."""

    def setUp(self):
        """Set up test fixtures."""
        self.temp_dir = tempfile.mkdtemp()
        self.saved_env = dict((key, os.environ.get(key))
                              for key in (CONFIG_PATH_ENV, OUTPUT_ROOT_ENV))
        self.data = {
            'version': '1.0',
            'experiment': {'name': 'unit'},
            'topology': {'kind': 'ring', 'n': 4},
            'mixing': {'scheme': 'dsgt'},
            'problem': {'kind': 'quadratic', 'p': 3},
            'run': {'algorithm': 'dsgt', 'T': 50},
        }

    def tearDown(self):
        """Clean up test fixtures."""
        if os.path.exists(self.temp_dir):
            shutil.rmtree(self.temp_dir)
        for key, value in self.saved_env.items():
            if value is None:
                os.environ.pop(key, None)
            else:
                os.environ[key] = value

    def write(self, name, text):
        path = os.path.join(self.temp_dir, name)
        with open(path, 'w') as f:
            f.write(text)
        return path

    def test_defaults_are_merged(self):
        config = ExperimentConfig(data=self.data)

        self.assertEqual(config.get_topology()['n'], 4)
        self.assertTrue(config.get_topology()['bidirectional'])
        self.assertEqual(config.get_schedule()['gamma0'], 0.05)
        self.assertEqual(config.get_run()['seeds'], [0])
        self.assertEqual(config.get_constants()['tol'], 1e-10)
        self.assertEqual(config.get_experiment_name(), 'unit')

    def test_defaults_not_modified(self):
        config = ExperimentConfig(data=self.data)
        config.data['topology']['n'] = 99

        self.assertEqual(ExperimentConfig.DEFAULTS['topology']['n'], 8)

    def test_load_from_file(self):
        path = self.write('exp.json', json.dumps(self.data))

        config = ExperimentConfig(path)

        self.assertEqual(config.config_path, path)
        self.assertEqual(config.version, '1.0')

    def test_missing_file(self):
        with self.assertRaises(IOError):
            ExperimentConfig(os.path.join(self.temp_dir, 'nope.json'))

    def test_parse_error_has_line_and_column(self):
        path = self.write('bad.json', '{\n  "version": "1.0",\n  "topology": ,\n}\n')

        with self.assertRaises(ConfigParseError) as ctx:
            ExperimentConfig(path)

        self.assertEqual(ctx.exception.line, 3)
        self.assertEqual(ctx.exception.column, 15)
        self.assertIn('"topology": ,', str(ctx.exception))

    def test_invalid_config_raises(self):
        self.data['topology']['kind'] = 'torus'

        with self.assertRaises(ConfigValidationError) as ctx:
            ExperimentConfig(data=self.data)

        self.assertTrue(any('topology.kind' in err for err in ctx.exception.errors))

    def test_canonical_round_trip(self):
        config = ExperimentConfig(data=self.data)
        text = config.to_canonical_json()

        again = ExperimentConfig(data=json.loads(text))

        self.assertEqual(again.to_canonical_json(), text)
        self.assertTrue(text.endswith('}\n'))

    def test_save_and_reload(self):
        config = ExperimentConfig(data=self.data)
        path = os.path.join(self.temp_dir, 'saved.json')
        config.save(path)

        reloaded = ExperimentConfig(path)

        self.assertEqual(reloaded.data, config.data)

    def test_with_value_returns_validated_copy(self):
        config = ExperimentConfig(data=self.data)

        changed = config.with_value('topology.n', 16)

        self.assertEqual(changed.get_topology()['n'], 16)
        self.assertEqual(config.get_topology()['n'], 4)
        with self.assertRaises(ConfigValidationError):
            config.with_value('topology.n', 0)

    def test_get_value(self):
        config = ExperimentConfig(data=self.data)

        self.assertEqual(config.get_value('problem.p'), 3)
        with self.assertRaises(KeyError):
            config.get_value('problem.missing')

    def test_apply_overrides(self):
        config = ExperimentConfig(data=self.data)

        overridden = config.apply_overrides(seed=7, tol=1e-6, metrics_every=10, T=20,
                                            workers=2)

        self.assertEqual(overridden.get_run()['seeds'], [7])
        self.assertEqual(overridden.get_run()['T'], 20)
        self.assertEqual(overridden.get_run()['metrics_every'], 10)
        self.assertEqual(overridden.get_run()['workers'], 2)
        self.assertEqual(overridden.get_constants()['tol'], 1e-6)

    def test_apply_no_overrides(self):
        config = ExperimentConfig(data=self.data)

        self.assertIs(config.apply_overrides(), config)

    def test_output_directory_uses_env_root(self):
        os.environ[OUTPUT_ROOT_ENV] = self.temp_dir
        config = ExperimentConfig(data=self.data)

        self.assertEqual(config.get_output_directory(), os.path.join(self.temp_dir, 'output'))

    def test_absolute_output_directory(self):
        os.environ[OUTPUT_ROOT_ENV] = '/elsewhere'
        config = ExperimentConfig(data=self.data).with_value('output.directory', self.temp_dir)

        self.assertEqual(config.get_output_directory(), self.temp_dir)

    def test_find_config_in_repository(self):
        path = ExperimentConfig.find_config('dsgt_ring')

        self.assertIsNotNone(path)
        self.assertEqual(os.path.dirname(path), os.path.join(REPO_ROOT, 'project_configs'))

    def test_find_config_from_env(self):
        self.write('custom_exp.json', json.dumps(self.data))
        os.environ[CONFIG_PATH_ENV] = self.temp_dir

        path = ExperimentConfig.find_config('custom_exp')

        self.assertEqual(path, os.path.join(self.temp_dir, 'custom_exp.json'))

    def test_find_config_missing(self):
        os.environ.pop(CONFIG_PATH_ENV, None)

        self.assertIsNone(ExperimentConfig.find_config('no_such_experiment'))

    def test_shipped_configs_load(self):
        directory = os.path.join(REPO_ROOT, 'project_configs')
        for name in sorted(os.listdir(directory)):
            if name.endswith('.json'):
                config = ExperimentConfig(os.path.join(directory, name))
                self.assertEqual(config.get_experiment_name(), name[:-len('.json')])


if __name__ == '__main__':
    unittest.main()
