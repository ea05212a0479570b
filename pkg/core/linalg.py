# -*- coding: utf-8 -*-
"""Linear-algebra helpers shared by the mixing and series modules.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function

import logging

import numpy as np
import scipy.linalg

from .errors import NumericalError

logger = logging.getLogger(__name__)

# Matrices up to this size use a dense SVD under method='auto'
DENSE_LIMIT = 64

NORM_METHODS = ('auto', 'dense', 'power')


def spectral_norm(M, method='auto', tol=1e-12, max_iter=10000):
    """Return the spectral norm (largest singular value) of M.

    Args:
        M (array_like): Matrix or vector
        method (str): 'dense' (LAPACK SVD), 'power' (power iteration on
            MᵀM) or 'auto' (dense up to DENSE_LIMIT rows/columns)
        tol (float): Relative tolerance for power iteration
        max_iter (int): Iteration cap for power iteration

    Returns:
        float: ‖M‖₂

    Raises:
        ValueError: If method is unknown
        NumericalError: If power iteration does not converge
    """
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        return float(np.sqrt(np.dot(M, M)))
    if method not in NORM_METHODS:
        raise ValueError("Unknown norm method '{}'. Supported: {}".format(
            method, ', '.join(NORM_METHODS)))
    if M.size == 0 or not np.any(M):
        return 0.0

    if method == 'auto':
        method = 'dense' if max(M.shape) <= DENSE_LIMIT else 'power'
    if method == 'dense':
        return float(scipy.linalg.svdvals(M, check_finite=False)[0])
    return _power_norm(M, tol, max_iter)


def _power_norm(M, tol, max_iter):
    """Power iteration on MᵀM from a fixed pseudo-random start."""
    # A fixed non-uniform start: 1 is often in the kernel of deviation matrices
    v = np.random.default_rng(12345).standard_normal(M.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for iteration in range(1, max_iter + 1):
        u = M.dot(v)
        w = M.T.dot(u)
        w_norm = np.linalg.norm(w)
        if w_norm == 0.0:
            return 0.0
        v = w / w_norm
        new_sigma = np.sqrt(w_norm)
        if abs(new_sigma - sigma) <= tol * new_sigma:
            logger.debug("Power norm converged after {} iterations".format(iteration))
            return float(new_sigma)
        sigma = new_sigma
    raise NumericalError('spectral_norm', max_iter, 'last estimate {:.6g}'.format(sigma))


def power_norm_root(M, K=64, method='auto'):
    """Estimate the spectral radius of M as ‖M^K‖₂^(1/K).

    M^K is formed by repeated squaring, so K must be a power of two.

    Args:
        M (numpy.ndarray): Square matrix
        K (int): Power, a power of two
        method (str): Norm method passed to spectral_norm

    Returns:
        float: The K-step norm root
    """
    if K < 1 or (K & (K - 1)) != 0:
        raise ValueError("K must be a positive power of two, got {}".format(K))
    P = np.array(M, dtype=float)
    steps = K.bit_length() - 1
    for _ in range(steps):
        P = P.dot(P)
    norm = spectral_norm(P, method=method)
    if norm == 0.0:
        return 0.0
    return float(norm ** (1.0 / K))


def eigenvalues_by_modulus(A):
    """Return the eigenvalues of A sorted by decreasing modulus."""
    values = scipy.linalg.eigvals(np.asarray(A, dtype=float))
    order = np.argsort(-np.abs(values), kind='stable')
    return values[order]
