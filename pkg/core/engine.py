# -*- coding: utf-8 -*-
"""Stochastic Push-Pull engine and reference baselines.

The simulation applies the compact matrix recursion

    X⁽ᵗ⁺¹⁾ = R (X⁽ᵗ⁾ − γ_t Y⁽ᵗ⁾)
    Y⁽ᵗ⁺¹⁾ = C (Y⁽ᵗ⁾ − G⁽ᵗ⁾) + C G⁽ᵗ⁺¹⁾

which is C(Y + G⁺ − G) regrouped so that Y stays bitwise equal to G on a
single node. Each node's stochastic gradient at iteration t is drawn from
the counter-based stream (seed, node, t), so runs are reproducible for any
number of workers.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .digraph import root_set
from .errors import SimulationError, AssumptionViolationError, DimensionError
from .linalg import spectral_norm
from .mixing import MixingPair, root_eigenvector
from .rng import make_stream, GRADIENT_STREAM
from .trace import Trace, TraceRecord

logger = logging.getLogger(__name__)

CONSERVATION_TOL = 1e-8


# Custom Exceptions

class EngineError(SimulationError):
    """Base exception for simulation runs."""
    pass


class DivergenceError(EngineError):
    """Raised when an iterate becomes non-finite.

    Attributes:
        iteration (int): Iteration that produced the non-finite value
        diagnostics (dict): State summary at the failure
        seed (int): Run seed, when known
    """

    def __init__(self, iteration, diagnostics=None, seed=None):
        self.iteration = iteration
        self.diagnostics = diagnostics or {}
        self.seed = seed
        message = "Iterates diverged at iteration {}".format(iteration)
        if seed is not None:
            message += " (seed {})".format(seed)
        if self.diagnostics:
            message += ": {}".format(', '.join(
                '{}={}'.format(k, v) for k, v in sorted(self.diagnostics.items())))
        super(DivergenceError, self).__init__(message)


class InvariantViolationError(EngineError):
    """Raised when 1ᵀY drifts away from 1ᵀG."""

    def __init__(self, iteration, residual, tolerance):
        self.iteration = iteration
        self.residual = residual
        self.tolerance = tolerance
        super(InvariantViolationError, self).__init__(
            "Tracking conservation broken at iteration {}: residual {:.3g} > {:.3g}".format(
                iteration, residual, tolerance))


class State(object):
    """Iterates of one run.

    Attributes:
        X (numpy.ndarray): n x p local iterates
        Y (numpy.ndarray): n x p gradient trackers
        G (numpy.ndarray): n x p current stochastic gradients
        t (int): Iteration counter
    """

    def __init__(self, X, Y, G, t=0):
        self.X = X
        self.Y = Y
        self.G = G
        self.t = t


class StepsizeSchedule(object):
    """Piecewise-constant stepsize gamma(t) = gamma0 · decay_factor^floor(t / decay_every).

    Attributes:
        gamma0 (float): Base stepsize
        decay_factor (float): Multiplier in (0, 1]
        decay_every (int): Iterations between decays, 0 for constant
        rescale_by_npi (bool): Divide gamma0 by n·π
    """

    def __init__(self, gamma0, decay_factor=1.0, decay_every=0, rescale_by_npi=False):
        if gamma0 <= 0:
            raise ValueError("gamma0 must be positive, got {}".format(gamma0))
        if not 0.0 < decay_factor <= 1.0:
            raise ValueError("decay_factor must be in (0, 1], got {}".format(decay_factor))
        if decay_every < 0:
            raise ValueError("decay_every must be non-negative, got {}".format(decay_every))
        self.gamma0 = float(gamma0)
        self.decay_factor = float(decay_factor)
        self.decay_every = int(decay_every)
        self.rescale_by_npi = bool(rescale_by_npi)

    def gamma(self, t, n_pi=1.0):
        base = self.gamma0 / n_pi if self.rescale_by_npi else self.gamma0
        if self.decay_every > 0:
            return base * self.decay_factor ** (t // self.decay_every)
        return base

    def to_dict(self):
        return {'gamma0': self.gamma0, 'decay_factor': self.decay_factor,
                'decay_every': self.decay_every, 'rescale_by_npi': self.rescale_by_npi}


def hat_x(state, pi_R):
    """π_R-weighted average π_RᵀX of the local iterates."""
    pi = np.asarray(getattr(pi_R, 'pi', pi_R), dtype=float)
    X = state.X if isinstance(state, State) else np.asarray(state)
    if pi.shape != (X.shape[0],):
        raise DimensionError("π_R must have one entry per node", expected=(X.shape[0],),
                             actual=pi.shape)
    return pi.dot(X)


class _GradientSampler(object):
    """Evaluates the stacked stochastic gradients of one run."""

    def __init__(self, problem, batch, seed, executor=None, enumerate_full=False):
        self.problem = problem
        self.batch = batch
        self.seed = seed
        self.executor = executor
        self.enumerate_full = enumerate_full

    def _node(self, i, x, t):
        rng = make_stream(self.seed, GRADIENT_STREAM, i, t)
        return self.problem.stoch_grad(i, x, self.batch, rng, enumerate_full=self.enumerate_full)

    def __call__(self, X, t):
        nodes = range(self.problem.n)
        if self.executor is None:
            rows = [self._node(i, X[i], t) for i in nodes]
        else:
            rows = list(self.executor.map(lambda i: self._node(i, X[i], t), nodes))
        return np.vstack(rows)


def _diagnostics(X, Y, gamma):
    with np.errstate(invalid='ignore', over='ignore'):
        return {
            'gamma': gamma,
            'max_abs_x': float(np.nanmax(np.abs(X))) if np.any(np.isfinite(X)) else float('nan'),
            'max_abs_y': float(np.nanmax(np.abs(Y))) if np.any(np.isfinite(Y)) else float('nan'),
        }


def _run(problem, R, C, pi_R, pi_C, schedule, T, batch, seed, metrics_every=1, x0=None,
         workers=1, record_loss=True, enumerate_full=False, metadata=None, centralized=False):
    n, p = problem.n, problem.p
    if R.shape != (n, n):
        raise DimensionError("Mixing matrices must be n x n", expected=(n, n), actual=R.shape)
    if T < 0:
        raise ValueError("T must be non-negative, got {}".format(T))
    if metrics_every < 1:
        raise ValueError("metrics_every must be at least 1, got {}".format(metrics_every))

    ones = np.ones(n)
    n_pi = n * float(pi_R.dot(pi_C))
    x_start = np.zeros(p) if x0 is None else np.asarray(x0, dtype=float)
    X = np.tile(x_start, (n, 1))

    executor = ThreadPoolExecutor(max_workers=workers) if workers and workers > 1 else None
    sample = _GradientSampler(problem, batch, seed, executor=executor,
                              enumerate_full=enumerate_full)
    trace = Trace(metadata=dict(metadata or {}, seed=seed, T=T, batch=batch,
                                problem_id=problem.problem_id))
    max_recursion = 0.0
    max_conservation = 0.0

    def record(t, X, Y, G, gamma, x_hat):
        gradient = problem.full_gradient(x_hat)
        deviation = X - np.outer(ones, x_hat)
        tracker_dev = Y - np.outer(pi_C, ones.dot(Y))
        residual = float(np.max(np.abs(ones.dot(Y) - ones.dot(G))))
        dist_sq = None
        if problem.x_star is not None:
            offset = x_hat - problem.x_star
            dist_sq = float(offset.dot(offset))
        trace.append(TraceRecord(
            t=t, gamma=gamma, grad_norm_sq=float(gradient.dot(gradient)),
            consensus=float(np.sum(deviation ** 2)), tracking=float(np.sum(tracker_dev ** 2)),
            invariant_residual=residual,
            f_hat=problem.loss(x_hat) if record_loss else None, dist_sq=dist_sq))

    try:
        G = sample(X, 0)
        Y = G.copy()
        x_hat = pi_R.dot(X)
        for t in range(T + 1):
            gamma = schedule.gamma(t, n_pi)
            if t % metrics_every == 0 or t == T:
                record(t, X, Y, G, gamma, x_hat)
            if t == T:
                break

            if centralized:
                # Single iterate driven by the average of all node gradients
                direction = G.mean(axis=0)
                x_next = x_hat - gamma * direction
                X_next = np.tile(x_next, (n, 1))
                G_next = sample(X_next, t + 1)
                Y_next = G_next.copy()
            else:
                X_next = R.dot(X - gamma * Y)
                G_next = sample(X_next, t + 1)
                Y_next = C.dot(Y - G) + C.dot(G_next)

            if not (np.all(np.isfinite(X_next)) and np.all(np.isfinite(Y_next))):
                logger.error("Divergence at iteration {} (seed {})".format(t + 1, seed))
                raise DivergenceError(t + 1, _diagnostics(X_next, Y_next, gamma), seed=seed)

            conservation = float(np.max(np.abs(ones.dot(Y_next) - ones.dot(G_next))))
            tolerance = CONSERVATION_TOL * max(1.0, float(np.linalg.norm(G_next)))
            if conservation > tolerance:
                raise InvariantViolationError(t + 1, conservation, tolerance)
            max_conservation = max(max_conservation, conservation)

            x_hat_next = pi_R.dot(X_next)
            step = gamma * pi_R.dot(Y)
            scale = max(1.0, float(np.linalg.norm(X - gamma * Y)))
            recursion = float(np.linalg.norm(x_hat_next - x_hat + step)) / scale
            max_recursion = max(max_recursion, recursion)

            X, Y, G, x_hat = X_next, Y_next, G_next, x_hat_next
    finally:
        if executor is not None:
            executor.shutdown(wait=True)

    trace.metadata['max_recursion_residual'] = max_recursion
    trace.metadata['max_conservation_residual'] = max_conservation
    trace.metadata['n_pi'] = n_pi
    trace.final_x_hat = x_hat
    trace.final_state = State(X, Y, G, T)
    logger.debug("Run finished: seed={} T={} final grad_norm_sq={:.3g}".format(
        seed, T, trace.records[-1].grad_norm_sq))
    return trace


def _pi_vector(value):
    return np.asarray(getattr(value, 'pi', value), dtype=float)


def run_spp(problem, pair, pi_R, schedule, T, batch=1, seed=0, pi_C=None, metrics_every=1,
            x0=None, workers=1, record_loss=True, enumerate_full=False):
    """Run Stochastic Push-Pull.

    All agents start from the same x0 (zeros by default) and Y⁽⁰⁾ = G⁽⁰⁾.
    Metrics are taken at x̂ = π_RᵀX every metrics_every iterations and at T.

    Args:
        problem (Problem): Objective with stochastic oracles
        pair (MixingPair): Validated mixing pair
        pi_R (RootEigenvector or array_like): Root eigenvector of R
        schedule (StepsizeSchedule): Stepsizes
        T (int): Number of iterations
        batch (int): Minibatch size per node
        seed (int): Run seed
        pi_C (RootEigenvector or array_like, optional): Right Perron vector
            of C; computed when omitted
        metrics_every (int): Record thinning
        x0 (array_like, optional): Common starting point
        workers (int): Threads for per-node gradient evaluation

    Returns:
        Trace: The recorded run

    Raises:
        DivergenceError: On non-finite iterates
        InvariantViolationError: If 1ᵀY drifts from 1ᵀG
    """
    if pair.n != problem.n:
        raise DimensionError("Pair and problem disagree on n", expected=problem.n, actual=pair.n)
    if pi_C is None:
        pi_C = root_eigenvector(pair.C.T, root_set(pair.push_graph().reverse()),
                                associated_matrix='C^T')
    metadata = {'algorithm': 'spp', 'pair_id': pair.name, 'schedule': schedule.to_dict()}
    return _run(problem, np.asarray(pair.R), np.asarray(pair.C), _pi_vector(pi_R),
                _pi_vector(pi_C), schedule, T, batch, seed, metrics_every=metrics_every, x0=x0,
                workers=workers, record_loss=record_loss, enumerate_full=enumerate_full,
                metadata=metadata)


def run_dsgt(problem, W, schedule, T, batch=1, seed=0, metrics_every=1, x0=None, workers=1,
             record_loss=True, enumerate_full=False):
    """Distributed stochastic gradient tracking: run_spp with R = C = W and π = 1/n.

    Raises:
        AssumptionViolationError: If W is not doubly stochastic or
            ‖W − 11ᵀ/n‖₂ >= 1
    """
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    if (np.any(W < 0) or np.max(np.abs(W.sum(axis=0) - 1.0)) > 1e-12
            or np.max(np.abs(W.sum(axis=1) - 1.0)) > 1e-12):
        raise AssumptionViolationError('doubly stochastic W')
    lam = spectral_norm(W - np.full((n, n), 1.0 / n))
    if n > 1 and lam >= 1.0 - 1e-12:
        raise AssumptionViolationError('exponential decay', "‖W − 11ᵀ/n‖₂ = {:.6g}".format(lam))
    uniform = np.full(n, 1.0 / n)
    trace = run_spp(problem, MixingPair(W, W, name='dsgt'), uniform, schedule, T, batch=batch,
                    seed=seed, pi_C=uniform, metrics_every=metrics_every, x0=x0,
                    workers=workers, record_loss=record_loss, enumerate_full=enumerate_full)
    trace.metadata['algorithm'] = 'dsgt'
    return trace


def run_centralized_sgd(problem, schedule, T, batch=1, seed=0, metrics_every=1, x0=None,
                        workers=1, record_loss=True, enumerate_full=False):
    """Centralized SGD x⁺ = x − γ_t (1/n) Σ_i g_i(x) on the same noise streams."""
    n = problem.n
    uniform = np.full(n, 1.0 / n)
    identity = np.eye(n)
    metadata = {'algorithm': 'centralized', 'pair_id': 'centralized',
                'schedule': schedule.to_dict()}
    return _run(problem, identity, identity, uniform, uniform, schedule, T, batch, seed,
                metrics_every=metrics_every, x0=x0, workers=workers, record_loss=record_loss,
                enumerate_full=enumerate_full, metadata=metadata, centralized=True)
