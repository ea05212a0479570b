# -*- coding: utf-8 -*-
"""
Experiment Configuration Loader

This module handles loading, validating and serializing experiment
configuration from JSON files. Values missing from a file are filled from
DEFAULTS, and command-line flags can override file values.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function

import copy
import json
import logging
import os

from .config_validator import ConfigValidator, ConfigValidationError, ConfigParseError

logger = logging.getLogger(__name__)

CONFIG_PATH_ENV = 'PUSHPULL_CONFIG_PATH'
OUTPUT_ROOT_ENV = 'PUSHPULL_OUTPUT_ROOT'


def _deep_merge(base, override):
    """Return base updated recursively with override (neither is modified)."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class ExperimentConfig(object):
    """
    Loads and manages experiment configuration.

    Configuration can be loaded from:
    1. An explicit path
    2. A name under <repo>/project_configs/
    3. The directory named by the PUSHPULL_CONFIG_PATH environment variable

    Attributes:
        config_path (str): Path to the loaded configuration file
        data (dict): Configuration with defaults filled in
        version (str): Configuration schema version
    """

    REQUIRED_KEYS = ['version', 'topology', 'mixing', 'problem', 'run']
    SUPPORTED_VERSIONS = ['1.0']

    DEFAULTS = {
        'version': '1.0',
        'experiment': {'name': 'experiment'},
        'topology': {'kind': 'ring', 'n': 8, 'p': 0.3, 'k': 2, 'bidirectional': True,
                     'seed': 0, 'max_attempts': 1000, 'edges': []},
        'mixing': {'scheme': 'push_pull', 'push_graph': 'reverse', 'T_check': 2000,
                   'decay_K': 64},
        'problem': {'kind': 'quadratic', 'p': 5, 'J': 100, 'reg': 0.01, 'sigma_h': 0.2,
                    'heterogeneity': 1.0, 'sigma': 1.0, 'mu': 0.1, 'L': 1.0,
                    'shared_hessian': False, 'seed': 0, 'reference_iters': 2000},
        'schedule': {'gamma0': 0.05, 'decay_factor': 1.0, 'decay_every': 0,
                     'rescale_by_npi': False},
        'run': {'algorithm': 'spp', 'T': 1000, 'batch': 1, 'seeds': [0], 'metrics_every': 1,
                'workers': 1, 'record_loss': True, 'steady_state_window': 0},
        'constants': {'enabled': True, 'tol': 1e-10, 'max_terms': 100000,
                      'norm_method': 'auto'},
        'output': {'directory': 'output'},
    }

    def __init__(self, config_path=None, data=None):
        """
        Initialize ExperimentConfig.

        Args:
            config_path (str, optional): Path to configuration JSON file.
            data (dict, optional): Configuration dictionary, used when no
                path is given.

        Raises:
            IOError: If configuration file not found
            ConfigParseError: If the file is not valid JSON
            ConfigValidationError: If the configuration is invalid
        """
        self.config_path = config_path
        self.data = {}
        self.version = None

        if config_path:
            self.load(config_path)
        elif data is not None:
            self._set_data(data)

    @classmethod
    def from_dict(cls, data):
        return cls(data=data)

    def load(self, config_path):
        """
        Load configuration from JSON file.

        Args:
            config_path (str): Path to configuration JSON file

        Raises:
            IOError: If file doesn't exist or can't be read
            ConfigParseError: If JSON is invalid
            ConfigValidationError: If schema validation fails
        """
        if not os.path.exists(config_path):
            raise IOError("Configuration file not found: {}".format(config_path))

        try:
            with open(config_path, 'r') as f:
                text = f.read()
        except (IOError, OSError) as e:
            raise IOError("Failed to read configuration file: {}".format(e))

        self.config_path = config_path
        self._set_data(self.parse(text, config_path))
        logger.info("Loaded experiment configuration from {}".format(config_path))

    @staticmethod
    def parse(text, source='<string>'):
        """Parse JSON text, reporting failures with line and column.

        Raises:
            ConfigParseError: If the text is not valid JSON
        """
        try:
            return json.loads(text)
        except ValueError as e:
            line = getattr(e, 'lineno', 0)
            column = getattr(e, 'colno', 0)
            lines = text.splitlines()
            line_text = lines[line - 1] if 0 < line <= len(lines) else ''
            raise ConfigParseError(source, line, column, getattr(e, 'msg', str(e)), line_text)

    def _set_data(self, raw):
        validator = ConfigValidator()
        is_valid, errors = validator.validate(raw)
        for warning in validator.get_warnings():
            logger.warning(warning)
        if not is_valid:
            raise ConfigValidationError(errors, source=self.config_path)
        self.data = _deep_merge(self.DEFAULTS, raw)
        self.version = self.data['version']
        # Re-validate the merged view so cross-section checks see defaults
        is_valid, errors = ConfigValidator().validate(self.data)
        if not is_valid:
            raise ConfigValidationError(errors, source=self.config_path)

    def get_experiment_name(self):
        """Get experiment name from configuration."""
        return self.data.get('experiment', {}).get('name', 'experiment')

    def get_topology(self):
        return dict(self.data['topology'])

    def get_mixing(self):
        return dict(self.data['mixing'])

    def get_problem(self):
        return dict(self.data['problem'])

    def get_schedule(self):
        return dict(self.data['schedule'])

    def get_run(self):
        return dict(self.data['run'])

    def get_constants(self):
        return dict(self.data['constants'])

    def get_output_directory(self):
        """
        Resolve the output directory.

        A relative output.directory is placed under PUSHPULL_OUTPUT_ROOT when
        that variable is set, otherwise under the current directory.

        Returns:
            str: Output directory path
        """
        directory = self.data['output']['directory']
        if os.path.isabs(directory):
            return directory
        root = os.environ.get(OUTPUT_ROOT_ENV)
        if root:
            return os.path.join(root, directory)
        return os.path.abspath(directory)

    def get_value(self, dotted_key):
        """Get a value by 'section.key' path."""
        node = self.data
        for part in dotted_key.split('.'):
            node = node[part]
        return node

    def with_value(self, dotted_key, value):
        """
        Return a copy with one value replaced.

        Args:
            dotted_key (str): 'section.key' path, e.g. 'topology.n'
            value: New value

        Returns:
            ExperimentConfig: Validated copy
        """
        data = copy.deepcopy(self.data)
        node = data
        parts = dotted_key.split('.')
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
        clone = ExperimentConfig(data=data)
        clone.config_path = self.config_path
        return clone

    def apply_overrides(self, seed=None, tol=None, metrics_every=None, T=None, output=None,
                        workers=None):
        """
        Return a copy with command-line overrides applied.

        Args:
            seed (int, optional): Replaces run.seeds with [seed]
            tol (float, optional): constants.tol
            metrics_every (int, optional): run.metrics_every
            T (int, optional): run.T
            output (str, optional): output.directory
            workers (int, optional): run.workers

        Returns:
            ExperimentConfig: Overridden copy
        """
        overrides = (('run.seeds', None if seed is None else [seed]),
                     ('constants.tol', tol),
                     ('run.metrics_every', metrics_every),
                     ('run.T', T),
                     ('output.directory', output),
                     ('run.workers', workers))
        config = self
        for key, value in overrides:
            if value is not None:
                config = config.with_value(key, value)
                logger.debug("Override {} = {!r}".format(key, value))
        return config

    def to_canonical_json(self):
        """Canonical serialization: sorted keys, two-space indent, trailing newline."""
        return json.dumps(self.data, sort_keys=True, indent=2) + '\n'

    def save(self, file_path):
        with open(file_path, 'w') as f:
            f.write(self.to_canonical_json())

    @staticmethod
    def find_config(name):
        """
        Find a configuration file by name.

        Search order:
        1. name itself, when it is an existing path
        2. <repo>/project_configs/<name>
        3. $PUSHPULL_CONFIG_PATH/<name>

        Args:
            name (str): File name or path ('.json' is appended when missing)

        Returns:
            str: Path to configuration file, or None if not found
        """
        if os.path.exists(name):
            return name
        if not name.endswith('.json'):
            name += '.json'

        repo_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        candidates = [os.path.join(repo_root, 'project_configs', name)]
        env_dir = os.environ.get(CONFIG_PATH_ENV)
        if env_dir:
            candidates.append(os.path.join(env_dir, name))

        for candidate in candidates:
            if os.path.exists(candidate):
                return candidate
        return None

    def __repr__(self):
        return "ExperimentConfig(name='{}', path={})".format(
            self.get_experiment_name(), self.config_path)
