# -*- coding: utf-8 -*-
"""Objective families and gradient oracles.

Two families of local objectives are provided:
- LogisticLocal: logistic loss with the nonconvex regularizer
  R Σ x_k²/(1 + x_k²), fed by the synthetic heterogeneous generator
- QuadraticLocal: f_i(x) = ½ xᵀA_i x − b_iᵀx with SPD A_i, whose global
  minimizer is known in closed form

A Problem bundles n local objectives with the smoothness constant L and a
nominal per-sample variance. Stochastic oracles take an explicit random
stream, so a draw depends only on the stream's address.

Example:
    >>> from core.problems import gen_quadratic
    >>> from core.rng import make_stream, PROBLEM_STREAM
    >>> problem = gen_quadratic(4, 3, 1.0, 0.5, make_stream(0, PROBLEM_STREAM))
    >>> problem.grad(0, problem.x_star).shape
    (3,)

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function

import json
import logging
import os

import numpy as np
import scipy.linalg
from scipy.special import expit

from .errors import DimensionError
from .rng import make_stream, GRADIENT_STREAM

logger = logging.getLogger(__name__)

DEFAULT_REFERENCE_ITERS = 2000


def _check_dimension(x, p):
    x = np.asarray(x, dtype=float)
    if x.shape != (p,):
        raise DimensionError("Point has wrong dimension", expected=(p,), actual=x.shape)
    return x


class LogisticLocal(object):
    """Logistic loss of one node with nonconvex regularization.

    f_i(x) = (1/J) Σ_j log(1 + exp(−y_j h_jᵀx)) + R Σ_k x_k²/(1 + x_k²)

    Attributes:
        H (numpy.ndarray): J x p features
        y (numpy.ndarray): Labels in {-1, +1}
        reg (float): Regularization weight R
    """

    kind = 'logistic'

    def __init__(self, H, y, reg):
        self.H = np.asarray(H, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.reg = float(reg)
        if self.H.ndim != 2 or self.y.shape != (self.H.shape[0],):
            raise DimensionError("Labels must match feature rows",
                                 expected=(self.H.shape[0],), actual=self.y.shape)

    @property
    def J(self):
        return self.H.shape[0]

    @property
    def p(self):
        return self.H.shape[1]

    def loss(self, x):
        margins = self.y * self.H.dot(x)
        data = np.mean(np.logaddexp(0.0, -margins))
        return float(data + self.reg * np.sum(x ** 2 / (1.0 + x ** 2)))

    def _data_gradient(self, H, y, x):
        weights = y * expit(-y * H.dot(x))
        return -H.T.dot(weights) / H.shape[0]

    def regularizer_gradient(self, x):
        return 2.0 * self.reg * x / (1.0 + x ** 2) ** 2

    def grad(self, x):
        return self._data_gradient(self.H, self.y, x) + self.regularizer_gradient(x)

    def stoch_grad(self, x, batch, rng, enumerate_full=False):
        """Minibatch gradient, samples drawn uniformly with replacement.

        With enumerate_full and batch >= J every sample is used once, in
        order, and the result equals grad(x).
        """
        if enumerate_full and batch >= self.J:
            return self.grad(x)
        index = rng.integers(0, self.J, size=batch)
        return self._data_gradient(self.H[index], self.y[index], x) + self.regularizer_gradient(x)

    def sample_variance(self, x):
        """Mean squared deviation of single-sample data gradients at x."""
        weights = self.y * expit(-self.y * self.H.dot(x))
        samples = -self.H * weights[:, None]
        spread = samples - samples.mean(axis=0)
        return float(np.mean(np.sum(spread ** 2, axis=1)))


class QuadraticLocal(object):
    """Quadratic f_i(x) = ½ xᵀA x − bᵀx with isotropic gradient noise.

    The stochastic oracle adds N(0, σ²/(p·batch) I), so the noise variance
    is exactly σ²/batch.

    Attributes:
        A (numpy.ndarray): p x p symmetric positive semidefinite matrix
        b (numpy.ndarray): Length-p vector
        sigma (float): Noise level σ
    """

    kind = 'quadratic'

    def __init__(self, A, b, sigma=0.0):
        self.A = np.asarray(A, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.sigma = float(sigma)
        if self.A.shape != (self.b.shape[0], self.b.shape[0]):
            raise DimensionError("A must be p x p", expected=(self.b.shape[0],) * 2,
                                 actual=self.A.shape)

    @property
    def p(self):
        return self.b.shape[0]

    def loss(self, x):
        return float(0.5 * x.dot(self.A.dot(x)) - self.b.dot(x))

    def grad(self, x):
        return self.A.dot(x) - self.b

    def stoch_grad(self, x, batch, rng, enumerate_full=False):
        gradient = self.grad(x)
        if self.sigma == 0.0:
            return gradient
        scale = self.sigma / np.sqrt(self.p * batch)
        return gradient + rng.normal(0.0, scale, size=self.p)


class Problem(object):
    """n local objectives forming f(x) = (1/n) Σ_i f_i(x).

    Attributes:
        locals (list): Local objective descriptors
        L (float): Smoothness constant of every f_i
        sigma2_hint (float): Nominal per-sample gradient variance
        x_star (numpy.ndarray): Known minimizer, or None
        f_star (float): Optimal value or a surrogate, or None
        f_star_source (str): 'analytic', 'reference_gd' or None
        seed (int): Generation seed, used as problem id
    """

    def __init__(self, locals_, L, sigma2_hint, seed=None, x_star=None, f_star=None,
                 f_star_source=None, params=None):
        if not locals_:
            raise DimensionError("A problem needs at least one node")
        dims = set(local.p for local in locals_)
        if len(dims) != 1:
            raise DimensionError("Local objectives disagree on dimension", actual=sorted(dims))
        self.locals = list(locals_)
        self.L = float(L)
        self.sigma2_hint = float(sigma2_hint)
        self.seed = seed
        self.x_star = None if x_star is None else np.asarray(x_star, dtype=float)
        self.f_star = None if f_star is None else float(f_star)
        self.f_star_source = f_star_source
        self.params = dict(params or {})

    @property
    def kind(self):
        return self.locals[0].kind

    @property
    def n(self):
        return len(self.locals)

    @property
    def p(self):
        return self.locals[0].p

    @property
    def problem_id(self):
        return "{}-n{}-p{}-seed{}".format(self.kind, self.n, self.p, self.seed)

    def grad(self, i, x):
        return self.locals[i].grad(_check_dimension(x, self.p))

    def stoch_grad(self, i, x, batch, rng, enumerate_full=False):
        if batch < 1:
            raise ValueError("Batch size must be at least 1, got {}".format(batch))
        return self.locals[i].stoch_grad(_check_dimension(x, self.p), batch, rng,
                                         enumerate_full=enumerate_full)

    def local_loss(self, i, x):
        return self.locals[i].loss(_check_dimension(x, self.p))

    def loss(self, x):
        """Global objective f(x)."""
        x = _check_dimension(x, self.p)
        return float(np.mean([local.loss(x) for local in self.locals]))

    def full_gradient(self, x):
        """Global gradient ∇f(x)."""
        x = _check_dimension(x, self.p)
        return np.mean([local.grad(x) for local in self.locals], axis=0)

    def gradient_matrix(self, X):
        """Exact local gradients stacked as an n x p matrix."""
        return np.vstack([self.locals[i].grad(X[i]) for i in range(self.n)])

    def optimality_gap(self, x):
        """f(x) − f*, using the recorded f* or its surrogate."""
        if self.f_star is None:
            raise ValueError("Problem has no optimal value; call reference_minimum first")
        return self.loss(x) - self.f_star

    def to_dict(self):
        return {
            'kind': self.kind,
            'n': self.n,
            'p': self.p,
            'L': self.L,
            'sigma2_hint': self.sigma2_hint,
            'seed': self.seed,
            'f_star': self.f_star,
            'f_star_source': self.f_star_source,
            'params': self.params,
        }

    def save_to_dir(self, directory):
        """Write problem.json plus one CSV per data matrix."""
        if not os.path.exists(directory):
            os.makedirs(directory)
        fmt = '%.17g'
        for i, local in enumerate(self.locals):
            if local.kind == 'logistic':
                np.savetxt(os.path.join(directory, 'node{}_H.csv'.format(i)), local.H,
                           fmt=fmt, delimiter=',')
                np.savetxt(os.path.join(directory, 'node{}_y.csv'.format(i)), local.y[None, :],
                           fmt=fmt, delimiter=',')
            else:
                np.savetxt(os.path.join(directory, 'node{}_A.csv'.format(i)), local.A,
                           fmt=fmt, delimiter=',')
                np.savetxt(os.path.join(directory, 'node{}_b.csv'.format(i)), local.b[None, :],
                           fmt=fmt, delimiter=',')
        if self.x_star is not None:
            np.savetxt(os.path.join(directory, 'x_star.csv'), self.x_star[None, :],
                       fmt=fmt, delimiter=',')
        with open(os.path.join(directory, 'problem.json'), 'w') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
        logger.info("Saved problem '{}' to {}".format(self.problem_id, directory))

    @classmethod
    def load_from_dir(cls, directory):
        with open(os.path.join(directory, 'problem.json'), 'r') as f:
            meta = json.load(f)

        def read(name):
            return np.loadtxt(os.path.join(directory, name), delimiter=',', ndmin=2)

        params = meta.get('params', {})
        locals_ = []
        for i in range(meta['n']):
            if meta['kind'] == 'logistic':
                locals_.append(LogisticLocal(read('node{}_H.csv'.format(i)),
                                             read('node{}_y.csv'.format(i))[0],
                                             params.get('reg', 0.0)))
            else:
                locals_.append(QuadraticLocal(read('node{}_A.csv'.format(i)),
                                              read('node{}_b.csv'.format(i))[0],
                                              params.get('sigma', 0.0)))
        x_star = None
        if os.path.exists(os.path.join(directory, 'x_star.csv')):
            x_star = read('x_star.csv')[0]
        return cls(locals_, meta['L'], meta['sigma2_hint'], seed=meta.get('seed'),
                   x_star=x_star, f_star=meta.get('f_star'),
                   f_star_source=meta.get('f_star_source'), params=params)

    def __repr__(self):
        return "Problem('{}', L={:.4g})".format(self.problem_id, self.L)


def grad(problem, i, x):
    """Exact local gradient ∇f_i(x)."""
    return problem.grad(i, x)


def stoch_grad(problem, i, x, batch, rng, enumerate_full=False):
    """Stochastic local gradient drawn from rng."""
    return problem.stoch_grad(i, x, batch, rng, enumerate_full=enumerate_full)


def gen_logistic(n, J, p, R_reg, sigma_h, rng, x_tilde=None, seed=None):
    """Synthetic heterogeneous logistic-regression problem.

    A shared parameter x̃ ~ N(0, I_p) is perturbed per node,
    x̃_i = x̃ + v_i with v_i ~ N(0, σ_h² I). Features are h ~ N(0, I_p) and a
    label is +1 with probability 1/(1 + exp(−hᵀx̃_i)), else −1.

    Args:
        n, J, p (int): Nodes, samples per node, dimension
        R_reg (float): Regularization weight
        sigma_h (float): Heterogeneity level
        rng (numpy.random.Generator): Seeded stream
        x_tilde (array_like, optional): Fixed shared parameter instead of a draw
        seed (int, optional): Seed recorded as the problem id

    Returns:
        Problem: The instance, with sigma2_hint measured at x = 0
    """
    if min(n, J, p) < 1:
        raise ValueError("Sizes must be positive, got n={}, J={}, p={}".format(n, J, p))
    if sigma_h < 0:
        raise ValueError("sigma_h must be non-negative, got {}".format(sigma_h))

    shared = rng.standard_normal(p) if x_tilde is None else np.asarray(x_tilde, dtype=float)
    locals_ = []
    for _ in range(n):
        x_node = shared + sigma_h * rng.standard_normal(p)
        H = rng.standard_normal((J, p))
        z = rng.random(J)
        y = np.where(z < expit(H.dot(x_node)), 1.0, -1.0)
        locals_.append(LogisticLocal(H, y, R_reg))

    L = max(scipy.linalg.norm(local.H, 2) ** 2 for local in locals_) / (4.0 * J) + 2.0 * R_reg
    zero = np.zeros(p)
    sigma2_hint = float(np.mean([local.sample_variance(zero) for local in locals_]))
    params = {'J': J, 'reg': R_reg, 'sigma_h': sigma_h}
    logger.info("Generated logistic problem n={} J={} p={} (L={:.4g})".format(n, J, p, L))
    return Problem(locals_, L, sigma2_hint, seed=seed, params=params)


def gen_quadratic(n, p, heterogeneity, sigma, rng, mu=0.1, L=1.0, shared_hessian=False,
                  seed=None):
    """Random strongly convex quadratic problem with known minimizer.

    Each A_i = Q diag(e) Qᵀ has eigenvalues in [mu, L] (both endpoints
    attained when p >= 2). b_i = A_i (x* + heterogeneity·u_i) with
    u_i ~ N(0, I), and the global minimizer solves (mean A_i) x = mean b_i.

    Args:
        n, p (int): Nodes and dimension
        heterogeneity (float): Spread of local minimizers
        sigma (float): Gradient-noise level σ
        rng (numpy.random.Generator): Seeded stream
        mu, L (float): Eigenvalue range
        shared_hessian (bool): Use one A for every node
        seed (int, optional): Seed recorded as the problem id

    Returns:
        Problem: The instance with analytic x_star and f_star
    """
    if min(n, p) < 1:
        raise ValueError("Sizes must be positive, got n={}, p={}".format(n, p))
    if not 0.0 < mu <= L:
        raise ValueError("Need 0 < mu <= L, got mu={}, L={}".format(mu, L))

    def random_spd():
        basis, _ = scipy.linalg.qr(rng.standard_normal((p, p)))
        eigs = rng.uniform(mu, L, size=p)
        eigs[-1] = L
        if p > 1:
            eigs[0] = mu
        return (basis * eigs).dot(basis.T)

    shared = random_spd() if shared_hessian else None
    x_center = rng.standard_normal(p)
    locals_ = []
    for _ in range(n):
        A = shared if shared_hessian else random_spd()
        A = (A + A.T) / 2.0
        u = rng.standard_normal(p)
        locals_.append(QuadraticLocal(A, A.dot(x_center + heterogeneity * u), sigma))

    A_mean = np.mean([local.A for local in locals_], axis=0)
    b_mean = np.mean([local.b for local in locals_], axis=0)
    x_star = scipy.linalg.solve(A_mean, b_mean, assume_a='pos')
    problem = Problem(locals_, L, sigma ** 2, seed=seed, x_star=x_star,
                      f_star_source='analytic',
                      params={'heterogeneity': heterogeneity, 'sigma': sigma, 'mu': mu,
                              'shared_hessian': bool(shared_hessian)})
    problem.f_star = problem.loss(x_star)
    return problem


def reference_minimum(problem, iters=DEFAULT_REFERENCE_ITERS, x0=None):
    """Deterministic gradient descent with step 1/L as an f* surrogate.

    Stores the lowest value seen on the problem as f_star with
    f_star_source 'reference_gd'.

    Returns:
        tuple: (x, f) of the best iterate
    """
    x = np.zeros(problem.p) if x0 is None else np.array(x0, dtype=float)
    best_x, best_f = x.copy(), problem.loss(x)
    step = 1.0 / problem.L
    for _ in range(iters):
        x = x - step * problem.full_gradient(x)
        value = problem.loss(x)
        if value < best_f:
            best_x, best_f = x.copy(), value
    problem.f_star = best_f
    problem.f_star_source = 'reference_gd'
    logger.info("Reference minimum after {} GD steps: f={:.10g}".format(iters, best_f))
    return best_x, best_f


def estimate_sigma2(problem, x, batch=1, draws=1000, seed=0):
    """Monte-Carlo estimate of E‖g_i(x) − ∇f_i(x)‖² averaged over nodes."""
    x = _check_dimension(x, problem.p)
    total = 0.0
    for i in range(problem.n):
        exact = problem.grad(i, x)
        for draw in range(draws):
            sample = problem.stoch_grad(i, x, batch, make_stream(seed, GRADIENT_STREAM, i, draw))
            total += float(np.sum((sample - exact) ** 2))
    return total / (problem.n * draws)
