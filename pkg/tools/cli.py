# -*- coding: utf-8 -*-
"""
Command-line interface for the Push-Pull simulator.

Subcommands:
    graph gen | roots           Generate graphs, report root sets
    mixing build | validate     Build and certify mixing pairs
    constants                   Series constants and speedup ratio of a pair
    validate CONFIG             Certify the pair named by a configuration
    run CONFIG                  Run all seeds of a configuration
    sweep CONFIG                Run a configuration over one axis

Structured output is JSON, tabular output is CSV. Errors are reported on
stderr and exit with status 1.

Example:
    $ python run_pushpull.py graph gen --topology er --n 8 --p 0.3 --seed 7
    $ python run_pushpull.py validate er_validate
    $ python run_pushpull.py sweep quadratic_speedup --axis n --values 4,16

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function

import argparse
import json
import logging
import sys

import core
from config.experiment_config import ExperimentConfig
from core.digraph import (DirectedGraph, gen_ring, gen_erdos_renyi, gen_multi_subring,
                          gen_spanning_tree_pair, root_set)
from core.errors import SimulationError
from core.mixing import MixingPair, build_pair, validate_pair, DEFAULT_T_CHECK
from core.rng import make_stream, GRAPH_STREAM
from core.series import DEFAULT_TOL, SERIES_NAMES, compute_constants, speedup_ratio
from tools.experiment_runner import (cmd_validate, cmd_run, cmd_sweep, parse_axis_values,
                                     summary_csv, SWEEP_AXES)

logger = logging.getLogger(__name__)


def _common_parser():
    """Flags accepted by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help='Seed (replaces run.seeds)')
    common.add_argument('--tol', type=float, default=None, help='Series truncation tolerance')
    common.add_argument('--metrics-every', type=int, default=None, dest='metrics_every',
                        help='Record metrics every k iterations')
    common.add_argument('--T', type=int, default=None, dest='T', help='Number of iterations')
    common.add_argument('--out', default=None, help='Output directory or file')
    common.add_argument('--workers', type=int, default=None, help='Worker threads')
    common.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
    return common


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog='pushpull', description='Stochastic Push-Pull simulator')
    parser.add_argument('--version', action='version', version=core.__version__)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    graph = sub.add_parser('graph', help='Graph generation and analysis')
    graph_sub = graph.add_subparsers(dest='graph_command')
    graph_sub.required = True
    gen = graph_sub.add_parser('gen', parents=[common], help='Generate a graph edge list')
    gen.add_argument('--topology', required=True, choices=['ring', 'er', 'msr', 'tree'])
    gen.add_argument('--n', type=int, required=True, help='Number of nodes')
    gen.add_argument('--p', type=float, default=0.3, help='Edge probability (er)')
    gen.add_argument('--max-attempts', type=int, default=1000, dest='max_attempts',
                     help='Regeneration cap (er)')
    gen.add_argument('--k', type=int, default=2, help='Number of subrings (msr)')
    gen.add_argument('--unidirectional', action='store_true', help='One-way ring (ring)')
    gen.add_argument('--push-out', default=None, dest='push_out',
                     help='File for the push tree (tree)')
    roots = graph_sub.add_parser('roots', parents=[common], help='Root set of a graph')
    roots.add_argument('--graph', required=True, help='Edge-list file')

    mixing = sub.add_parser('mixing', help='Mixing pair construction and checks')
    mixing_sub = mixing.add_subparsers(dest='mixing_command')
    mixing_sub.required = True
    build = mixing_sub.add_parser('build', parents=[common], help='Build a mixing pair')
    build.add_argument('--scheme', required=True, choices=['push_pull', 'dsgt', 'tree'])
    build.add_argument('--graph', required=True, help='Pull-graph edge-list file')
    build.add_argument('--push-graph', default=None, dest='push_graph',
                       help='Push-graph edge-list file')
    check = mixing_sub.add_parser('validate', parents=[common], help='Validate a saved pair')
    check.add_argument('--pair', required=True, help='Pair directory')
    check.add_argument('--T-check', type=int, default=DEFAULT_T_CHECK, dest='T_check')

    constants = sub.add_parser('constants', parents=[common],
                               help='Series constants of a saved pair')
    constants.add_argument('--pair', required=True, help='Pair directory')
    constants.add_argument('--json', action='store_true', help='Print the full JSON report')

    for name, text in (('validate', 'Validate the configured mixing pair'),
                       ('run', 'Run a configuration'),
                       ('sweep', 'Sweep a configuration over one axis')):
        command = sub.add_parser(name, parents=[common], help=text)
        command.add_argument('config', help='Configuration name or path')
        if name == 'sweep':
            command.add_argument('--axis', required=True, choices=sorted(SWEEP_AXES))
            command.add_argument('--values', required=True, help='Comma-separated values')
    return parser


def _emit(text, out=None):
    if out:
        with open(out, 'w') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _json(data):
    return json.dumps(data, indent=2, sort_keys=True) + '\n'


def _graph_gen(args):
    seed = 0 if args.seed is None else args.seed
    stream = make_stream(seed, GRAPH_STREAM)
    if args.topology == 'ring':
        g = gen_ring(args.n, bidirectional=not args.unidirectional)
    elif args.topology == 'er':
        g = gen_erdos_renyi(args.n, args.p, stream, max_attempts=args.max_attempts)
    elif args.topology == 'msr':
        g = gen_multi_subring(args.n, args.k)
    else:
        g, push = gen_spanning_tree_pair(args.n, stream)
        if args.push_out:
            push.save_to_file(args.push_out)
    _emit(g.to_edge_list(), args.out)
    return 0


def _graph_roots(args):
    g = DirectedGraph.load_from_file(args.graph)
    roots = sorted(root_set(g))
    _emit(_json({'n': g.n, 'roots': roots,
                 'strongly_connected': g.is_strongly_connected()}))
    return 0


def _mixing_build(args):
    if not args.out:
        raise ValueError("mixing build needs --out DIRECTORY")
    pull = DirectedGraph.load_from_file(args.graph)
    push = DirectedGraph.load_from_file(args.push_graph) if args.push_graph else None
    pair = build_pair(args.scheme, pull, push)
    pair.save_to_dir(args.out)
    return 0


def _mixing_validate(args):
    pair = MixingPair.load_from_dir(args.pair)
    report = validate_pair(pair, T_check=args.T_check)
    _emit(_json({'pair': pair.name, 'passed': report.passed,
                 'failed_checks': report.failed_checks(), 'checks': report.checks}))
    return 0 if report.passed else 1


def constants_table(report):
    """CSV table of every constant plus pi and the speedup ratio."""
    rows = ['name,value']
    values = report.constants()
    for name in SERIES_NAMES + ('M2_tilde',):
        suffix = ' (upper bound)' if name in report.upper_bounds else ''
        rows.append('{}{},{}'.format(name, suffix, '%.17g' % values[name]))
    rows.append('pi,{}'.format('%.17g' % report.pi))
    rows.append('speedup_ratio,{}'.format('%.17g' % speedup_ratio(report)))
    return '\n'.join(rows) + '\n'


def _constants(args):
    pair = MixingPair.load_from_dir(args.pair)
    validation = validate_pair(pair)
    if validation.cert_R is None or validation.cert_C is None:
        sys.stderr.write("Pair failed validation: {}\n".format(
            ', '.join(validation.failed_checks())))
        return 1
    tol = DEFAULT_TOL if args.tol is None else args.tol
    report = compute_constants(pair, validation.cert_R, validation.cert_C, tol=tol)
    if args.json:
        data = report.to_dict()
        data['speedup_ratio'] = speedup_ratio(report)
        _emit(_json(data), args.out)
    else:
        _emit(constants_table(report), args.out)
    return 0


def _load_config(args):
    path = ExperimentConfig.find_config(args.config)
    if path is None:
        raise IOError("Configuration not found: {}".format(args.config))
    config = ExperimentConfig(path)
    return config.apply_overrides(seed=args.seed, tol=args.tol,
                                  metrics_every=args.metrics_every, T=args.T,
                                  output=args.out, workers=args.workers)


def _validate(args):
    return cmd_validate(_load_config(args))


def _run(args):
    result = cmd_run(_load_config(args))
    _emit(_json({'output_dir': result.output_dir,
                 'time_avg_grad_norm_sq': result.time_average_grad_norm_sq,
                 'steady_state_mse': result.steady_state_mse,
                 'bound_rhs': result.summary.get('bound_rhs')}))
    return 0


def _sweep(args):
    rows = cmd_sweep(_load_config(args), args.axis, parse_axis_values(args.axis, args.values))
    _emit(summary_csv(rows))
    return 0 if all(row['status'] == 'ok' for row in rows) else 1


def _dispatch(args):
    if args.command == 'graph':
        return _graph_gen(args) if args.graph_command == 'gen' else _graph_roots(args)
    if args.command == 'mixing':
        return _mixing_build(args) if args.mixing_command == 'build' else _mixing_validate(args)
    handlers = {'constants': _constants, 'validate': _validate, 'run': _run, 'sweep': _sweep}
    return handlers[args.command](args)


def main(argv=None):
    """
    Parse arguments and run a subcommand.

    Args:
        argv (list, optional): Arguments without the program name

    Returns:
        int: Exit status
    """
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        return _dispatch(args)
    except (SimulationError, IOError, ValueError) as e:
        logger.error(str(e))
        sys.stderr.write("Error: {}\n".format(e))
        return 1
