# -*- coding: utf-8 -*-
"""Experiment configuration validation and error handling.

This module validates experiment configuration dictionaries section by
section and collects every problem it finds instead of stopping at the
first one.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import numbers

from core.errors import SimulationError


class ConfigValidationError(SimulationError):
    """Exception raised for configuration validation errors.

    Attributes:
        errors (list): Validation messages
    """

    def __init__(self, errors, source=None):
        self.errors = list(errors)
        self.source = source
        header = "Invalid configuration"
        if source:
            header += " '{}'".format(source)
        super(ConfigValidationError, self).__init__(
            "{}:\n  - {}".format(header, '\n  - '.join(self.errors)))


class ConfigParseError(SimulationError):
    """Exception raised when a configuration file is not valid JSON.

    Attributes:
        path (str): File that failed to parse
        line (int): 1-based line of the error
        column (int): 1-based column of the error
        line_text (str): Offending line
    """

    def __init__(self, path, line, column, reason, line_text=''):
        self.path = path
        self.line = line
        self.column = column
        self.reason = reason
        self.line_text = line_text
        message = "{}:{}:{}: {}".format(path, line, column, reason)
        if line_text:
            message += "\n    {}\n    {}^".format(line_text, ' ' * max(column - 1, 0))
        super(ConfigParseError, self).__init__(message)


def _is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _is_int(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


class ConfigValidator(object):
    """Validates experiment configuration.

    Example:
        >>> from config.config_validator import ConfigValidator
        >>>
        >>> validator = ConfigValidator()
        >>> is_valid, errors = validator.validate(config_data)
        >>> if not is_valid:
        ...     for error in errors:
        ...         print(error)
    """

    # Required top-level keys
    REQUIRED_KEYS = ['version', 'topology', 'mixing', 'problem', 'run']

    # Supported versions
    SUPPORTED_VERSIONS = ['1.0']

    KNOWN_SECTIONS = ['version', 'experiment', 'topology', 'mixing', 'problem', 'schedule',
                      'run', 'constants', 'output']

    TOPOLOGY_KINDS = ['ring', 'er', 'msr', 'tree', 'edges']
    MIXING_SCHEMES = ['push_pull', 'dsgt', 'tree']
    PUSH_GRAPHS = ['reverse', 'same']
    PROBLEM_KINDS = ['logistic', 'quadratic']
    ALGORITHMS = ['spp', 'dsgt', 'centralized']
    NORM_METHODS = ['auto', 'dense', 'power']

    def __init__(self):
        """Initialize validator."""
        self.errors = []
        self.warnings = []

    def validate(self, config_data):
        """Validate configuration data.

        Args:
            config_data (dict): Configuration dictionary

        Returns:
            tuple: (is_valid, errors) where is_valid is bool and errors is list of strings
        """
        self.errors = []
        self.warnings = []

        if not isinstance(config_data, dict):
            self.errors.append("Configuration must be an object, got {}".format(
                type(config_data).__name__))
            return (False, self.errors)

        self._validate_required_keys(config_data)

        if 'version' in config_data:
            self._validate_version(config_data['version'])

        for section in self.KNOWN_SECTIONS[1:]:
            if section in config_data and not isinstance(config_data[section], dict):
                self.errors.append("Section '{}' must be an object, got {}".format(
                    section, type(config_data[section]).__name__))

        for key in config_data:
            if key not in self.KNOWN_SECTIONS:
                self.warnings.append("Unknown section '{}' is ignored".format(key))

        sections = dict((name, config_data.get(name)) for name in self.KNOWN_SECTIONS[1:])
        if isinstance(sections['topology'], dict):
            self._validate_topology(sections['topology'])
        if isinstance(sections['mixing'], dict):
            self._validate_mixing(sections['mixing'], sections['topology'])
        if isinstance(sections['problem'], dict):
            self._validate_problem(sections['problem'])
        if isinstance(sections['schedule'], dict):
            self._validate_schedule(sections['schedule'])
        if isinstance(sections['run'], dict):
            self._validate_run(sections['run'], sections['mixing'])
        if isinstance(sections['constants'], dict):
            self._validate_constants(sections['constants'])
        if isinstance(sections['output'], dict):
            directory = sections['output'].get('directory')
            if directory is not None and not isinstance(directory, str):
                self.errors.append("output.directory must be a string")

        return (len(self.errors) == 0, self.errors)

    def _validate_required_keys(self, config_data):
        """Validate that all required top-level keys are present.

        Args:
            config_data (dict): Configuration dictionary
        """
        for key in self.REQUIRED_KEYS:
            if key not in config_data:
                self.errors.append(
                    "Missing required key: '{}'".format(key)
                )

    def _validate_version(self, version):
        """Validate version field.

        Args:
            version (str): Version string
        """
        if not isinstance(version, str):
            self.errors.append(
                "Version must be a string, got {}".format(type(version).__name__)
            )
            return

        if version not in self.SUPPORTED_VERSIONS:
            self.errors.append(
                "Unsupported version '{}'. Supported versions: {}".format(
                    version, ', '.join(self.SUPPORTED_VERSIONS)
                )
            )

    def _check_choice(self, section, key, value, choices):
        if value is not None and value not in choices:
            self.errors.append("{}.{} must be one of {}, got '{}'".format(
                section, key, ', '.join(choices), value))

    def _check_int(self, section, key, value, minimum):
        if value is None:
            return
        if not _is_int(value) or value < minimum:
            self.errors.append("{}.{} must be an integer >= {}, got {!r}".format(
                section, key, minimum, value))

    def _check_number(self, section, key, value, low=None, high=None, low_open=False):
        if value is None:
            return
        if not _is_number(value):
            self.errors.append("{}.{} must be a number, got {!r}".format(section, key, value))
            return
        if low is not None and (value < low or (low_open and value == low)):
            bracket = '(' if low_open else '['
            self.errors.append("{}.{} must be in {}{}, {}], got {}".format(
                section, key, bracket, low, high if high is not None else 'inf', value))
        elif high is not None and value > high:
            self.errors.append("{}.{} must be at most {}, got {}".format(section, key, high, value))

    def _validate_topology(self, topology):
        """Validate topology section.

        Args:
            topology (dict): Topology dictionary
        """
        kind = topology.get('kind')
        if kind is None:
            self.errors.append("Missing required topology field: 'kind'")
        self._check_choice('topology', 'kind', kind, self.TOPOLOGY_KINDS)
        self._check_int('topology', 'n', topology.get('n'), 1)
        self._check_number('topology', 'p', topology.get('p'), 0.0, 1.0, low_open=True)
        self._check_int('topology', 'k', topology.get('k'), 1)
        self._check_int('topology', 'seed', topology.get('seed'), 0)
        self._check_int('topology', 'max_attempts', topology.get('max_attempts'), 1)

        n = topology.get('n')
        if kind == 'msr' and _is_int(n) and _is_int(topology.get('k')) and n <= topology['k']:
            self.errors.append("topology.n must exceed topology.k for multi-sub-ring graphs")

        if kind == 'edges':
            edges = topology.get('edges')
            if not isinstance(edges, list):
                self.errors.append("topology.edges must be a list of [j, i] pairs")
                return
            for index, edge in enumerate(edges):
                if (not isinstance(edge, list) or len(edge) != 2
                        or not all(_is_int(v) for v in edge)):
                    self.errors.append("topology.edges[{}] must be a [j, i] integer pair".format(index))
                elif _is_int(n) and not all(0 <= v < n for v in edge):
                    self.errors.append("topology.edges[{}] = {} is outside [0, {})".format(
                        index, edge, n))

    def _validate_mixing(self, mixing, topology):
        """Validate mixing section against the topology.

        Args:
            mixing (dict): Mixing dictionary
            topology (dict): Topology dictionary, may be None
        """
        scheme = mixing.get('scheme')
        self._check_choice('mixing', 'scheme', scheme, self.MIXING_SCHEMES)
        self._check_choice('mixing', 'push_graph', mixing.get('push_graph'), self.PUSH_GRAPHS)
        self._check_int('mixing', 'T_check', mixing.get('T_check'), 1)
        K = mixing.get('decay_K')
        self._check_int('mixing', 'decay_K', K, 1)
        if _is_int(K) and K > 0 and (K & (K - 1)) != 0:
            self.errors.append("mixing.decay_K must be a power of two, got {}".format(K))

        kind = topology.get('kind') if isinstance(topology, dict) else None
        if (scheme == 'tree') != (kind == 'tree') and kind is not None and scheme is not None:
            self.errors.append("mixing.scheme 'tree' and topology.kind 'tree' go together")

    def _validate_problem(self, problem):
        """Validate problem section.

        Args:
            problem (dict): Problem dictionary
        """
        kind = problem.get('kind')
        if kind is None:
            self.errors.append("Missing required problem field: 'kind'")
        self._check_choice('problem', 'kind', kind, self.PROBLEM_KINDS)
        for key in ('p', 'J', 'reference_iters'):
            self._check_int('problem', key, problem.get(key), 1)
        self._check_int('problem', 'seed', problem.get('seed'), 0)
        for key in ('reg', 'sigma_h', 'heterogeneity', 'sigma'):
            self._check_number('problem', key, problem.get(key), 0.0)
        self._check_number('problem', 'mu', problem.get('mu'), 0.0, low_open=True)
        self._check_number('problem', 'L', problem.get('L'), 0.0, low_open=True)
        mu, L = problem.get('mu'), problem.get('L')
        if _is_number(mu) and _is_number(L) and mu > L:
            self.errors.append("problem.mu must not exceed problem.L")
        shared = problem.get('shared_hessian')
        if shared is not None and not isinstance(shared, bool):
            self.errors.append("problem.shared_hessian must be true or false")

    def _validate_schedule(self, schedule):
        """Validate schedule section.

        Args:
            schedule (dict): Schedule dictionary
        """
        self._check_number('schedule', 'gamma0', schedule.get('gamma0'), 0.0, low_open=True)
        self._check_number('schedule', 'decay_factor', schedule.get('decay_factor'), 0.0, 1.0,
                           low_open=True)
        self._check_int('schedule', 'decay_every', schedule.get('decay_every'), 0)
        rescale = schedule.get('rescale_by_npi')
        if rescale is not None and not isinstance(rescale, bool):
            self.errors.append("schedule.rescale_by_npi must be true or false")

    def _validate_run(self, run, mixing):
        """Validate run section.

        Args:
            run (dict): Run dictionary
            mixing (dict): Mixing dictionary, may be None
        """
        self._check_choice('run', 'algorithm', run.get('algorithm'), self.ALGORITHMS)
        self._check_int('run', 'T', run.get('T'), 1)
        self._check_int('run', 'batch', run.get('batch'), 1)
        self._check_int('run', 'metrics_every', run.get('metrics_every'), 1)
        self._check_int('run', 'workers', run.get('workers'), 1)
        self._check_int('run', 'steady_state_window', run.get('steady_state_window'), 0)

        seeds = run.get('seeds')
        if seeds is not None:
            if not isinstance(seeds, list) or not seeds:
                self.errors.append("run.seeds must be a non-empty list")
            elif not all(_is_int(seed) and seed >= 0 for seed in seeds):
                self.errors.append("run.seeds must contain non-negative integers")
            elif len(set(seeds)) != len(seeds):
                self.warnings.append("run.seeds contains duplicates")

        scheme = mixing.get('scheme') if isinstance(mixing, dict) else None
        if run.get('algorithm') == 'dsgt' and scheme not in (None, 'dsgt'):
            self.errors.append("run.algorithm 'dsgt' needs mixing.scheme 'dsgt'")

    def _validate_constants(self, constants):
        """Validate constants section.

        Args:
            constants (dict): Constants dictionary
        """
        self._check_number('constants', 'tol', constants.get('tol'), 0.0, low_open=True)
        self._check_int('constants', 'max_terms', constants.get('max_terms'), 1)
        self._check_choice('constants', 'norm_method', constants.get('norm_method'),
                           self.NORM_METHODS)
        enabled = constants.get('enabled')
        if enabled is not None and not isinstance(enabled, bool):
            self.errors.append("constants.enabled must be true or false")

    def get_warnings(self):
        """Get validation warnings.

        Returns:
            list: List of warning messages
        """
        return self.warnings
