# -*- coding: utf-8 -*-
"""Experiment Runner - configuration-driven validation, runs and sweeps.

This module ties the pieces together:
- Graph generation from the topology section
- Mixing pair construction and certification
- Series constants and the theory bundle
- Multi-seed simulation with per-seed and aggregate traces
- Parameter sweeps with a summary table

Every output directory receives the canonical configuration and a version
stamp, and files are written atomically.

Example:
    >>> from config.experiment_config import ExperimentConfig
    >>> from tools.experiment_runner import ExperimentRunner
    >>> config = ExperimentConfig(ExperimentConfig.find_config('dsgt_ring'))
    >>> result = ExperimentRunner(config).run()
    >>> result.time_average_grad_norm_sq

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function

import csv
import io
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

import core
from core.digraph import (DirectedGraph, gen_ring, gen_erdos_renyi, gen_multi_subring,
                          gen_spanning_tree_pair)
from core.engine import StepsizeSchedule, run_spp, run_dsgt, run_centralized_sgd
from core.errors import SimulationError, AssumptionViolationError
from core.mixing import build_pair, validate_pair
from core.problems import gen_logistic, gen_quadratic, reference_minimum
from core.rng import make_stream, GRAPH_STREAM, PROBLEM_STREAM
from core.series import (TruncationError, compute_constants, theory_bundle, bound_rhs,
                         descent_rhs, transient_time, speedup_ratio)
from core.trace import SHAPE_WINDOW, Trace

logger = logging.getLogger(__name__)

SWEEP_AXES = {
    'n': 'topology.n',
    'topology': 'topology.kind',
    'gamma': 'schedule.gamma0',
}

SUMMARY_COLUMNS = ('axis', 'value', 'status', 'time_avg_grad_norm_sq', 'steady_state_mse',
                   'bound_rhs', 'speedup_ratio', 'error')


def atomic_write(file_path, text):
    """Write text to file_path through a temporary file and os.replace."""
    directory = os.path.dirname(os.path.abspath(file_path))
    if not os.path.exists(directory):
        os.makedirs(directory)
    handle, temp_path = tempfile.mkstemp(dir=directory, prefix='.tmp-')
    try:
        with os.fdopen(handle, 'w') as f:
            f.write(text)
        os.replace(temp_path, file_path)
    except Exception:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise


def _json(data):
    return json.dumps(data, indent=2, sort_keys=True) + '\n'


def parse_axis_values(axis, text):
    """Parse comma-separated sweep values for an axis.

    Raises:
        ValueError: If the axis is unknown or a value does not parse
    """
    if axis not in SWEEP_AXES:
        raise ValueError("Unknown sweep axis '{}'. Supported: {}".format(
            axis, ', '.join(sorted(SWEEP_AXES))))
    items = [item.strip() for item in text.split(',') if item.strip()]
    if not items:
        raise ValueError("No sweep values given")
    if axis == 'n':
        return [int(item) for item in items]
    if axis == 'gamma':
        return [float(item) for item in items]
    return items


class RunResult(object):
    """Outputs of one configured run.

    Attributes:
        traces (list): One Trace per seed
        aggregate (Trace): Mean across seeds per iteration
        validation (ValidationReport): Pair checks, None for centralized runs
        spectral_report (SpectralReport): Series constants, or None
        bundle (TheoryBundle): Theory bundle, or None
        summary (dict): JSON-ready summary
        output_dir (str): Directory written, or None
    """

    def __init__(self, traces, aggregate, validation, spectral_report, bundle, summary,
                 output_dir=None, steady_state_window=None):
        self.traces = traces
        self.aggregate = aggregate
        self.validation = validation
        self.spectral_report = spectral_report
        self.bundle = bundle
        self.summary = summary
        self.output_dir = output_dir
        self.steady_state_window = steady_state_window

    @property
    def time_average_grad_norm_sq(self):
        return self.aggregate.time_average('grad_norm_sq')

    @property
    def steady_state_mse(self):
        """Mean of ‖x̂ − x*‖² over the steady-state window, None without x*."""
        values = self.aggregate.column('dist_sq')
        if np.all(np.isnan(values)):
            return None
        return self.aggregate.tail_average('dist_sq', self.steady_state_window)


class ExperimentRunner(object):
    """Builds and runs one experiment configuration.

    Attributes:
        config (ExperimentConfig): The configuration
        output_dir (str): Where results are written, None to skip writing
    """

    def __init__(self, config, output_dir=None, write=True):
        self.config = config
        if output_dir is None and write:
            output_dir = os.path.join(config.get_output_directory(),
                                      config.get_experiment_name())
        self.output_dir = output_dir if write else None

    def build_graphs(self):
        """Generate (pull graph, push graph or None) from the topology section."""
        topology = self.config.get_topology()
        kind, n = topology['kind'], topology['n']
        stream = make_stream(topology['seed'], GRAPH_STREAM)
        if kind == 'ring':
            return gen_ring(n, bidirectional=topology['bidirectional']), None
        if kind == 'er':
            return gen_erdos_renyi(n, topology['p'], stream,
                                   max_attempts=topology['max_attempts']), None
        if kind == 'msr':
            return gen_multi_subring(n, topology['k']), None
        if kind == 'tree':
            return gen_spanning_tree_pair(n, stream)
        return DirectedGraph(n, [tuple(edge) for edge in topology['edges']]), None

    def build_pair(self):
        """Build the mixing pair named by the mixing section."""
        mixing = self.config.get_mixing()
        pull, push = self.build_graphs()
        if push is None and mixing['scheme'] == 'push_pull' and mixing['push_graph'] == 'same':
            push = pull
        name = "{}-{}-n{}".format(mixing['scheme'], self.config.get_topology()['kind'], pull.n)
        pair = build_pair(mixing['scheme'], pull, push, name=name)
        logger.info("Built mixing pair {}".format(pair))
        return pair

    def build_problem(self):
        """Generate the problem; logistic problems get a reference f* surrogate."""
        settings = self.config.get_problem()
        n = self.config.get_topology()['n']
        stream = make_stream(settings['seed'], PROBLEM_STREAM)
        if settings['kind'] == 'quadratic':
            return gen_quadratic(n, settings['p'], settings['heterogeneity'], settings['sigma'],
                                 stream, mu=settings['mu'], L=settings['L'],
                                 shared_hessian=settings['shared_hessian'], seed=settings['seed'])
        problem = gen_logistic(n, settings['J'], settings['p'], settings['reg'],
                               settings['sigma_h'], stream, seed=settings['seed'])
        reference_minimum(problem, iters=settings['reference_iters'])
        return problem

    def validate(self, pair=None):
        """Run validate_pair with the configured certificate settings."""
        mixing = self.config.get_mixing()
        pair = pair or self.build_pair()
        return validate_pair(pair, T_check=mixing['T_check'], K=mixing['decay_K'],
                             norm_method=self.config.get_constants()['norm_method'])

    def compute_report(self, pair, validation):
        """Series constants, or None when disabled or truncation fails."""
        constants = self.config.get_constants()
        if not constants['enabled']:
            return None
        try:
            return compute_constants(pair, validation.cert_R, validation.cert_C,
                                     tol=constants['tol'], max_terms=constants['max_terms'],
                                     norm_method=constants['norm_method'])
        except TruncationError as e:
            logger.warning("Series constants unavailable: {}".format(e))
            return None

    def _theory(self, report, problem, run):
        if report is None:
            return None, {}
        x0 = np.zeros(problem.p)
        Delta_f = problem.optimality_gap(x0)
        if Delta_f <= 0.0:
            logger.warning("Initial optimality gap {:.3g} is not positive; theory bundle "
                           "skipped".format(Delta_f))
            return None, {}
        gradients = problem.gradient_matrix(np.tile(x0, (problem.n, 1)))
        F0 = float(np.sum(gradients ** 2)) / problem.n
        sigma2 = problem.sigma2_hint / run['batch']
        bundle = theory_bundle(report, problem.L, sigma2, Delta_f, F0, run['T'])
        extras = {
            'bound_rhs': bound_rhs(bundle, report),
            'descent_rhs': descent_rhs(bundle, report),
            'transient_time': transient_time(report, problem.L, sigma2, Delta_f, F0),
        }
        return bundle, extras

    def _run_seed(self, seed, problem, pair, validation, schedule, run):
        common = dict(batch=run['batch'], seed=seed, metrics_every=run['metrics_every'],
                      record_loss=run['record_loss'])
        if run['algorithm'] == 'centralized':
            return run_centralized_sgd(problem, schedule, run['T'], **common)
        if run['algorithm'] == 'dsgt':
            return run_dsgt(problem, pair.R, schedule, run['T'], **common)
        return run_spp(problem, pair, validation.pi_R, schedule, run['T'],
                       pi_C=validation.pi_C, **common)

    def run(self):
        """
        Run every seed and write per-seed, aggregate and summary outputs.

        Returns:
            RunResult: Traces, constants and summary

        Raises:
            AssumptionViolationError: If the mixing pair fails validation
            DivergenceError: If a seed diverges (the seed is named)
        """
        run = self.config.get_run()
        problem = self.build_problem()
        pair = None
        validation = None
        report = None
        if run['algorithm'] != 'centralized':
            pair = self.build_pair()
            validation = self.validate(pair)
            if not validation.passed:
                raise AssumptionViolationError(
                    'mixing pair validation', "failed checks: {}".format(
                        ', '.join(validation.failed_checks())))
            report = self.compute_report(pair, validation)

        bundle, theory = self._theory(report, problem, run)
        schedule = StepsizeSchedule(**self.config.get_schedule())

        seeds = run['seeds']
        workers = min(run['workers'], len(seeds))
        logger.info("Running {} seed(s) of '{}' ({} worker(s))".format(
            len(seeds), self.config.get_experiment_name(), workers))

        def one(seed):
            return self._run_seed(seed, problem, pair, validation, schedule, run)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                traces = list(executor.map(one, seeds))
        else:
            traces = [one(seed) for seed in seeds]

        aggregate = Trace.aggregate(traces)
        n_pi = traces[0].metadata['n_pi']
        window = run['steady_state_window'] or max(1, len(aggregate) // 5)

        summary = {
            'experiment': self.config.get_experiment_name(),
            'algorithm': run['algorithm'],
            'seeds': seeds,
            'problem': problem.to_dict(),
            'pair_id': pair.name if pair is not None else None,
            'spectral_report': report.to_dict() if report is not None else None,
            'theory_bundle': bundle.to_dict() if bundle is not None else None,
            'speedup_ratio': speedup_ratio(report) if report is not None else None,
            'time_avg_grad_norm_sq': aggregate.time_average('grad_norm_sq'),
            'steady_state_window': window,
            'n_pi': n_pi,
            'gamma0_effective': schedule.gamma(0, n_pi),
            'grad_norm_shape': (aggregate.decay_profile('grad_norm_sq', SHAPE_WINDOW)
                                if len(aggregate) >= SHAPE_WINDOW else None),
        }
        summary.update(theory)
        result = RunResult(traces, aggregate, validation, report, bundle, summary,
                           output_dir=self.output_dir, steady_state_window=window)
        summary['steady_state_mse'] = result.steady_state_mse

        if self.output_dir:
            self._write(result)
        return result

    def _write_stamp(self, directory):
        atomic_write(os.path.join(directory, 'config.json'), self.config.to_canonical_json())
        atomic_write(os.path.join(directory, 'version.json'),
                     _json({'version': core.__version__}))

    def _write(self, result):
        directory = self.output_dir
        self._write_stamp(directory)
        if result.validation is not None:
            atomic_write(os.path.join(directory, 'validation.json'),
                         result.validation.to_json() + '\n')
        for trace in result.traces:
            stem = os.path.join(directory, 'trace_seed{}'.format(trace.metadata['seed']))
            atomic_write(stem + '.csv', trace.to_csv_string())
            atomic_write(stem + '.json', trace.metadata_json() + '\n')
        atomic_write(os.path.join(directory, 'aggregate.csv'), result.aggregate.to_csv_string())
        atomic_write(os.path.join(directory, 'summary.json'), _json(result.summary))
        logger.info("Wrote results to {}".format(directory))

    def sweep(self, axis, values):
        """
        Run the configuration once per axis value.

        Failed cells are recorded in the summary and the sweep continues.

        Args:
            axis (str): 'n', 'topology' or 'gamma'
            values (list): Values for the axis

        Returns:
            list: One summary row (dict) per value, in input order
        """
        if axis not in SWEEP_AXES:
            raise ValueError("Unknown sweep axis '{}'".format(axis))
        key = SWEEP_AXES[axis]
        base = self.output_dir
        workers = min(self.config.get_run()['workers'], len(values))

        def cell(value):
            row = dict((name, None) for name in SUMMARY_COLUMNS)
            row.update({'axis': axis, 'value': value})
            try:
                config = self.config.with_value(key, value)
                cell_dir = None
                if base:
                    cell_dir = os.path.join(base, 'sweep_{}'.format(axis),
                                            '{}_{}'.format(axis, value))
                result = ExperimentRunner(config, output_dir=cell_dir,
                                          write=cell_dir is not None).run()
            except (SimulationError, ValueError) as e:
                logger.warning("Sweep cell {}={} failed: {}".format(axis, value, e))
                row.update({'status': 'failed', 'error': str(e)})
                return row
            row.update({
                'status': 'ok',
                'time_avg_grad_norm_sq': result.time_average_grad_norm_sq,
                'steady_state_mse': result.steady_state_mse,
                'bound_rhs': result.summary.get('bound_rhs'),
                'speedup_ratio': result.summary.get('speedup_ratio'),
            })
            return row

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                rows = list(executor.map(cell, values))
        else:
            rows = [cell(value) for value in values]

        if base:
            sweep_dir = os.path.join(base, 'sweep_{}'.format(axis))
            self._write_stamp(sweep_dir)
            atomic_write(os.path.join(sweep_dir, 'summary.csv'), summary_csv(rows))
        return rows


def summary_csv(rows):
    """Render sweep rows as CSV with SUMMARY_COLUMNS."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(SUMMARY_COLUMNS)
    for row in rows:
        cells = []
        for name in SUMMARY_COLUMNS:
            value = row.get(name)
            if value is None:
                cells.append('')
            elif isinstance(value, float):
                cells.append('%.17g' % value)
            else:
                cells.append(str(value))
        writer.writerow(cells)
    return buffer.getvalue()


def cmd_validate(config, stream=None):
    """
    Build and validate the configured mixing pair and print a JSON report.

    Returns:
        int: 0 when every check passes, 1 otherwise
    """
    stream = stream or sys.stdout
    runner = ExperimentRunner(config, write=False)
    pair = runner.build_pair()
    report = runner.validate(pair)
    pi = report.get('pi_positive')
    payload = {
        'experiment': config.get_experiment_name(),
        'pair': pair.name,
        'passed': report.passed,
        'failed_checks': report.failed_checks(),
        'pi': pi['value'] if pi else None,
        'checks': report.checks,
    }
    stream.write(_json(payload))
    return 0 if report.passed else 1


def cmd_run(config):
    """Run the configuration and write its outputs. Returns the RunResult."""
    return ExperimentRunner(config).run()


def cmd_sweep(config, axis, values):
    """Sweep one axis and write summary.csv. Returns the summary rows."""
    return ExperimentRunner(config).sweep(axis, values)
