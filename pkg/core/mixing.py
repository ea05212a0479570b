# -*- coding: utf-8 -*-
"""Mixing matrices and their certification.

This module builds the pull matrix R (row-stochastic) and the push matrix C
(column-stochastic), computes root eigenvectors, and certifies the
exponential decay ‖Aᵗ − 1πᵀ‖₂ ≤ αᵗ numerically.

Constructors:
- pull_matrix / push_matrix: uniform averaging over in/out-neighbors
- doubly_stochastic: Metropolis-Hastings weights on undirected graphs
- tree_01_matrices: 0/1 matrices for a spanning-tree pair

Certification:
- root_eigenvector: power iteration on Aᵀ with l1 renormalization
- certify_decay: K-step norm-root rate estimate plus horizon search
- validate_pair: all standing checks collected into a ValidationReport

Example:
    >>> from core.digraph import gen_ring
    >>> from core.mixing import MixingPair, pull_matrix, push_matrix, validate_pair
    >>> g = gen_ring(4, bidirectional=True)
    >>> pair = MixingPair(pull_matrix(g), push_matrix(g.reverse()))
    >>> validate_pair(pair).passed
    True

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function

import json
import logging
import os

import numpy as np

from .digraph import DirectedGraph, GraphError, common_roots, root_set
from .errors import (SimulationError, DimensionError, AssumptionViolationError,
                     NumericalError)
from .linalg import spectral_norm, power_norm_root, eigenvalues_by_modulus

logger = logging.getLogger(__name__)

STOCHASTIC_TOL = 1e-12
EIGEN_TOL = 1e-12
EIGEN_RESIDUAL_TOL = 1e-10
DEFAULT_T_CHECK = 2000
DEFAULT_DECAY_K = 64
MAX_ALPHA = 1.0 - 1e-9


# Custom Exceptions

class MixingError(SimulationError):
    """Base exception for mixing-matrix errors."""
    pass


class NotUndirectedError(MixingError):
    """Raised when a symmetric construction receives a directed edge set."""

    def __init__(self, missing_edges):
        self.missing_edges = sorted(missing_edges)
        super(NotUndirectedError, self).__init__(
            "Graph is not undirected: {} edge(s) lack a reverse, e.g. {}".format(
                len(self.missing_edges), self.missing_edges[:3]))


class StructureError(MixingError):
    """Raised when a graph pair does not have the required structure."""
    pass


class DecayUncertifiableError(MixingError):
    """Raised when no horizon m satisfies the decay bound up to T_check.

    Attributes:
        T_check (int): Checked horizon
        alpha (float): Decay rate that was tried
        rho (float): K-step norm-root rate estimate
    """

    def __init__(self, T_check, alpha, rho):
        self.T_check = T_check
        self.alpha = alpha
        self.rho = rho
        super(DecayUncertifiableError, self).__init__(
            "No horizon m <= {} satisfies ‖Aᵗ − 1πᵀ‖₂ <= alpha^t with alpha={:.12g} "
            "(estimated rate {:.12g})".format(T_check, alpha, rho))


class MixingPair(object):
    """Pull matrix R and push matrix C of one experiment.

    Attributes:
        R (numpy.ndarray): Row-stochastic pull matrix (read-only)
        C (numpy.ndarray): Column-stochastic push matrix (read-only)
        spanning_tree_mode (bool): True for the 0/1 spanning-tree construction
        name (str): Free-form identifier used in run metadata
    """

    def __init__(self, R, C, spanning_tree_mode=False, name=None):
        R = np.array(R, dtype=float)
        C = np.array(C, dtype=float)
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise DimensionError("R must be square", actual=R.shape)
        if C.shape != R.shape:
            raise DimensionError("C must match R", expected=R.shape, actual=C.shape)
        R.setflags(write=False)
        C.setflags(write=False)
        self.R = R
        self.C = C
        self.spanning_tree_mode = bool(spanning_tree_mode)
        self.name = name or 'pair'

    @property
    def n(self):
        return self.R.shape[0]

    def pull_graph(self):
        """Induced graph of R."""
        return DirectedGraph.from_matrix(self.R)

    def push_graph(self):
        """Induced graph of C."""
        return DirectedGraph.from_matrix(self.C)

    def row_residual(self):
        """‖R1 − 1‖∞"""
        return float(np.max(np.abs(self.R.sum(axis=1) - 1.0)))

    def column_residual(self):
        """‖Cᵀ1 − 1‖∞"""
        return float(np.max(np.abs(self.C.sum(axis=0) - 1.0)))

    def save_to_dir(self, directory):
        """Write R.csv, C.csv (row-major, %.17g) and pair.json."""
        if not os.path.exists(directory):
            os.makedirs(directory)
        save_matrix(os.path.join(directory, 'R.csv'), self.R)
        save_matrix(os.path.join(directory, 'C.csv'), self.C)
        meta = {'n': self.n, 'name': self.name, 'spanning_tree_mode': self.spanning_tree_mode}
        with open(os.path.join(directory, 'pair.json'), 'w') as f:
            json.dump(meta, f, indent=2, sort_keys=True)
        logger.info("Saved mixing pair '{}' to {}".format(self.name, directory))

    @classmethod
    def load_from_dir(cls, directory):
        R = load_matrix(os.path.join(directory, 'R.csv'))
        C = load_matrix(os.path.join(directory, 'C.csv'))
        meta = {}
        meta_path = os.path.join(directory, 'pair.json')
        if os.path.exists(meta_path):
            with open(meta_path, 'r') as f:
                meta = json.load(f)
        return cls(R, C, spanning_tree_mode=meta.get('spanning_tree_mode', False),
                   name=meta.get('name'))

    def __repr__(self):
        return "MixingPair(name='{}', n={}, spanning_tree_mode={})".format(
            self.name, self.n, self.spanning_tree_mode)


class RootEigenvector(object):
    """Unit-l1 nonnegative left eigenvector of a row-stochastic matrix.

    Attributes:
        pi (numpy.ndarray): The vector (read-only)
        associated_matrix (str): 'R' or 'C^T'
        iterations (int): Power-iteration steps used
    """

    def __init__(self, pi, associated_matrix='R', iterations=0):
        pi = np.array(pi, dtype=float)
        pi.setflags(write=False)
        self.pi = pi
        self.associated_matrix = associated_matrix
        self.iterations = iterations

    def residual(self, A):
        """‖πᵀA − πᵀ‖∞"""
        return float(np.max(np.abs(self.pi.dot(A) - self.pi)))

    def support(self):
        return frozenset(np.nonzero(self.pi)[0].tolist())

    def to_dict(self):
        return {'pi': self.pi.tolist(), 'associated_matrix': self.associated_matrix,
                'iterations': self.iterations}


class DecayCertificate(object):
    """Certified exponential decay of a row-stochastic matrix.

    For all t in [m, checked_horizon]: ‖(A − 1πᵀ)ᵗ‖₂ <= alphaᵗ.

    Attributes:
        m (int): First certified power
        alpha (float): Certified rate in (0, 1)
        checked_horizon (int): Last power checked
        rho (float): K-step norm-root rate estimate
        pi (numpy.ndarray): Root eigenvector used
        second_eigenvalue (float): Second largest eigenvalue modulus of A
        eigengap_rate (float): (1 + second_eigenvalue) / 2, the rate implied by the eigengap
    """

    def __init__(self, m, alpha, checked_horizon, rho, pi, second_eigenvalue=None,
                 eigengap_rate=None):
        self.m = int(m)
        self.alpha = float(alpha)
        self.checked_horizon = int(checked_horizon)
        self.rho = float(rho)
        self.pi = np.asarray(pi, dtype=float)
        self.second_eigenvalue = second_eigenvalue
        self.eigengap_rate = eigengap_rate

    def to_dict(self):
        return {
            'm': self.m,
            'alpha': self.alpha,
            'checked_horizon': self.checked_horizon,
            'rho': self.rho,
            'second_eigenvalue': self.second_eigenvalue,
            'eigengap_rate': self.eigengap_rate,
        }

    def __repr__(self):
        return "DecayCertificate(m={}, alpha={:.6g}, checked_horizon={})".format(
            self.m, self.alpha, self.checked_horizon)


class ValidationReport(object):
    """Outcome of validate_pair: one entry per check.

    Each check is a dict with 'name', 'passed', 'value' and 'detail'. The
    computed root eigenvectors and certificates are kept as attributes so
    callers can reuse them.
    """

    def __init__(self):
        self.checks = []
        self.pi_R = None
        self.pi_C = None
        self.cert_R = None
        self.cert_C = None

    def add(self, name, passed, value=None, detail=''):
        self.checks.append({'name': name, 'passed': bool(passed), 'value': value,
                            'detail': detail})
        level = logging.DEBUG if passed else logging.WARNING
        logger.log(level, "Check '{}': {} {}".format(name, 'pass' if passed else 'FAIL', detail))

    @property
    def passed(self):
        return all(check['passed'] for check in self.checks)

    def failed_checks(self):
        return [check['name'] for check in self.checks if not check['passed']]

    def get(self, name):
        for check in self.checks:
            if check['name'] == name:
                return check
        return None

    def to_json(self):
        return json.dumps(self.checks, indent=2, sort_keys=True)


def save_matrix(file_path, M):
    np.savetxt(file_path, np.atleast_2d(M), fmt='%.17g', delimiter=',')


def load_matrix(file_path):
    return np.loadtxt(file_path, delimiter=',', ndmin=2)


def pull_matrix(g):
    """Row-stochastic R with R_ij = 1/(1 + d_i^in) on in-edges and the diagonal."""
    R = np.zeros((g.n, g.n))
    for i in range(g.n):
        neighbors = list(g.in_neighbors(i))
        weight = 1.0 / (1.0 + len(neighbors))
        R[i, i] = weight
        R[i, neighbors] = weight
    return R


def push_matrix(g):
    """Column-stochastic C with C_ij = 1/(1 + d_j^out) on out-edges and the diagonal."""
    C = np.zeros((g.n, g.n))
    for j in range(g.n):
        neighbors = list(g.out_neighbors(j))
        weight = 1.0 / (1.0 + len(neighbors))
        C[j, j] = weight
        C[neighbors, j] = weight
    return C


def doubly_stochastic(g):
    """Metropolis-Hastings weights W_ij = 1/(1 + max(d_i, d_j)).

    The diagonal absorbs the remainder of each row, so W is symmetric and
    doubly stochastic.

    Raises:
        NotUndirectedError: If the edge set is not symmetric
    """
    missing = [(i, j) for j, i in g.edges if (i, j) not in g.edges]
    if missing:
        raise NotUndirectedError(missing)
    W = np.zeros((g.n, g.n))
    for j, i in g.edges:
        W[i, j] = 1.0 / (1.0 + max(g.in_degree(i), g.in_degree(j)))
    W[np.diag_indices(g.n)] = 1.0 - W.sum(axis=1)
    return W


def tree_01_matrices(pull_tree, push_tree, name='tree'):
    """0/1 mixing pair for a spanning-tree pair sharing a root.

    Every non-root node pulls the value of its parent (R_{i,parent} = 1) and
    routes its tracker mass to its parent (C_{parent,i} = 1); the root keeps
    itself in both.

    Args:
        pull_tree (DirectedGraph): Tree with edges parent -> child
        push_tree (DirectedGraph): Reverse of pull_tree

    Returns:
        MixingPair: Pair with spanning_tree_mode=True

    Raises:
        StructureError: If the inputs are not a matching spanning-tree pair
    """
    n = pull_tree.n
    if push_tree.n != n:
        raise StructureError("Tree pair sizes differ: {} vs {}".format(n, push_tree.n))
    if push_tree != pull_tree.reverse():
        raise StructureError("Push tree must be the reverse of the pull tree")
    if len(pull_tree) != n - 1:
        raise StructureError("A spanning tree on {} nodes needs {} edges, got {}".format(
            n, n - 1, len(pull_tree)))
    roots = [i for i in range(n) if pull_tree.in_degree(i) == 0]
    if len(roots) != 1 or any(pull_tree.in_degree(i) != 1 for i in range(n) if i != roots[0]):
        raise StructureError("Pull graph is not an arborescence (in-degrees must be 0 for "
                             "the root and 1 elsewhere)")
    root = roots[0]
    if root not in root_set(pull_tree):
        raise StructureError("Node {} does not reach every node".format(root))

    R = np.zeros((n, n))
    C = np.zeros((n, n))
    R[root, root] = 1.0
    C[root, root] = 1.0
    for i in range(n):
        if i == root:
            continue
        parent = pull_tree.in_neighbors(i)[0]
        R[i, parent] = 1.0
        C[parent, i] = 1.0
    return MixingPair(R, C, spanning_tree_mode=True, name=name)


def root_eigenvector(A, roots, associated_matrix='R', tol=EIGEN_TOL, max_iter=100000):
    """Root eigenvector of a row-stochastic matrix by power iteration on Aᵀ.

    Starting from the uniform vector, iterates v <- Aᵀv / ‖Aᵀv‖₁ until
    successive iterates differ by less than tol in l-infinity. Entries below
    1e-12 and entries outside the root set are then set to zero.

    Args:
        A (numpy.ndarray): Row-stochastic matrix
        roots (RootSet): Root set of the induced graph of A
        associated_matrix (str): Label stored on the result
        tol (float): Convergence tolerance
        max_iter (int): Iteration cap

    Returns:
        RootEigenvector: The unique root eigenvector

    Raises:
        AssumptionViolationError: If roots is empty (no spanning tree)
        NumericalError: If the iteration does not converge
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if not roots:
        raise AssumptionViolationError(
            'spanning tree', "induced graph of {} has no root".format(associated_matrix))

    v = np.full(n, 1.0 / n)
    for iteration in range(1, max_iter + 1):
        w = A.T.dot(v)
        w /= w.sum()
        if np.max(np.abs(w - v)) < tol:
            break
        v = w
    else:
        logger.error("Root eigenvector of {} did not converge".format(associated_matrix))
        raise NumericalError('root_eigenvector', max_iter)

    w[w < 1e-12] = 0.0
    outside = np.ones(n, dtype=bool)
    outside[list(roots)] = False
    removed = float(w[outside].sum())
    if removed > 1e-8:
        logger.warning("Removed mass {:.3g} outside the root set of {}".format(
            removed, associated_matrix))
    w[outside] = 0.0
    w /= w.sum()
    logger.debug("Root eigenvector of {} after {} iterations".format(associated_matrix, iteration))
    return RootEigenvector(w, associated_matrix=associated_matrix, iterations=iteration)


def second_eigenvalue_modulus(A):
    """Second largest eigenvalue modulus of A (0 for 1x1 matrices)."""
    values = eigenvalues_by_modulus(A)
    if len(values) < 2:
        return 0.0
    return float(np.abs(values[1]))


def certify_decay(A, pi, T_check=DEFAULT_T_CHECK, K=DEFAULT_DECAY_K, norm_method='auto'):
    """Certify ‖Aᵗ − 1πᵀ‖₂ <= alphaᵗ for all t in [m, T_check].

    The rate is estimated as rho = ‖(A − 1πᵀ)^K‖₂^(1/K) and padded to
    alpha = min(rho + 0.05 (1 − rho), 1 − 1e-9). Powers of A − 1πᵀ equal
    Aᵗ − 1πᵀ for t >= 1 and keep their accuracy far below machine epsilon.

    Args:
        A (numpy.ndarray): Row-stochastic matrix
        pi (RootEigenvector or array_like): Root eigenvector of A
        T_check (int): Last power to check
        K (int): Power used for the rate estimate (power of two)
        norm_method (str): Norm method passed to spectral_norm

    Returns:
        DecayCertificate: The certificate with the smallest valid m

    Raises:
        DecayUncertifiableError: If no m <= T_check works
    """
    A = np.asarray(A, dtype=float)
    pi_vec = np.asarray(getattr(pi, 'pi', pi), dtype=float)
    n = A.shape[0]
    M = A - np.outer(np.ones(n), pi_vec)

    rho = power_norm_root(M, K=K, method=norm_method)
    alpha = min(rho + 0.05 * (1.0 - rho), MAX_ALPHA)
    log_alpha = np.log(alpha)

    tiny = np.finfo(float).tiny
    ok = np.ones(T_check + 1, dtype=bool)
    P = M.copy()
    for t in range(1, T_check + 1):
        if t > 1:
            P = P.dot(M)
        norm = spectral_norm(P, method=norm_method)
        if norm < tiny:
            # Zero (or denormal) power: every later power is negligible
            break
        ok[t] = np.log(norm) <= t * log_alpha

    m = T_check + 1
    for t in range(T_check, 0, -1):
        if not ok[t]:
            break
        m = t
    if m > T_check:
        logger.error("Decay certification failed (rho={:.6g}, alpha={:.6g})".format(rho, alpha))
        raise DecayUncertifiableError(T_check, alpha, rho)

    lambda_2 = second_eigenvalue_modulus(A)
    certificate = DecayCertificate(m, alpha, T_check, rho, pi_vec,
                                   second_eigenvalue=lambda_2,
                                   eigengap_rate=(1.0 + lambda_2) / 2.0)
    logger.debug("Certified decay: {}".format(certificate))
    return certificate


def validate_pair(pair, T_check=DEFAULT_T_CHECK, K=DEFAULT_DECAY_K, norm_method='auto'):
    """Run every standing check on a mixing pair.

    Checks, in order: row/column stochasticity, common root, both root
    eigenvectors, both decay certificates and π_Rᵀπ_C > 0. Failures become
    report entries; nothing is raised.

    Args:
        pair (MixingPair): Pair to validate
        T_check (int): Horizon for the decay certificates

    Returns:
        ValidationReport: One entry per check
    """
    report = ValidationReport()
    R, C = pair.R, pair.C

    row_res = pair.row_residual()
    report.add('row_stochastic_R', bool(np.all(R >= 0)) and row_res <= STOCHASTIC_TOL,
               row_res, '‖R1 − 1‖∞')
    col_res = pair.column_residual()
    report.add('column_stochastic_C', bool(np.all(C >= 0)) and col_res <= STOCHASTIC_TOL,
               col_res, '‖Cᵀ1 − 1‖∞')

    pull_graph = pair.pull_graph()
    push_graph = pair.push_graph()
    shared = common_roots(pull_graph, push_graph)
    report.add('common_root', len(shared) > 0, sorted(shared),
               'R_R ∩ R_Cᵀ' if shared else 'pull and reversed push graphs share no root')

    for label, matrix, graph, attr in (('R', R, pull_graph, 'pi_R'),
                                       ('C', C.T, push_graph.reverse(), 'pi_C')):
        name = 'root_eigenvector_{}'.format(label)
        try:
            vector = root_eigenvector(matrix, root_set(graph),
                                      associated_matrix='R' if label == 'R' else 'C^T')
        except (AssumptionViolationError, NumericalError) as e:
            report.add(name, False, None, str(e))
            continue
        residual = vector.residual(matrix)
        report.add(name, residual <= EIGEN_RESIDUAL_TOL, residual, 'πᵀA − πᵀ residual')
        setattr(report, attr, vector)

    for label, matrix, attr, cert_attr in (('R', R, 'pi_R', 'cert_R'),
                                           ('C', C.T, 'pi_C', 'cert_C')):
        name = 'decay_{}'.format(label)
        vector = getattr(report, attr)
        if vector is None:
            report.add(name, False, None, 'skipped: no root eigenvector')
            continue
        try:
            certificate = certify_decay(matrix, vector, T_check=T_check, K=K,
                                        norm_method=norm_method)
        except DecayUncertifiableError as e:
            report.add(name, False, {'alpha': e.alpha, 'rho': e.rho}, str(e))
            continue
        report.add(name, True, certificate.to_dict(), 'm={} alpha={:.6g}'.format(
            certificate.m, certificate.alpha))
        setattr(report, cert_attr, certificate)

    if report.pi_R is not None and report.pi_C is not None:
        pi = float(report.pi_R.pi.dot(report.pi_C.pi))
        report.add('pi_positive', pi > 0.0, pi, 'π_Rᵀπ_C')
    else:
        report.add('pi_positive', False, None, 'skipped: missing root eigenvector')
    return report


def build_pair(scheme, pull_graph, push_graph=None, name=None):
    """Construct a MixingPair from graphs by scheme name.

    Args:
        scheme (str): 'push_pull', 'dsgt' or 'tree'
        pull_graph (DirectedGraph): Graph of the pull matrix
        push_graph (DirectedGraph, optional): Graph of the push matrix. For
            'push_pull' it defaults to the reverse of pull_graph, so the
            graph of Cᵀ equals the pull graph; for 'tree' it is required.

    Raises:
        MixingError: If the scheme is unknown
    """
    if scheme == 'push_pull':
        if push_graph is None:
            push_graph = pull_graph.reverse()
        return MixingPair(pull_matrix(pull_graph), push_matrix(push_graph),
                          name=name or 'push_pull')
    if scheme == 'dsgt':
        W = doubly_stochastic(pull_graph)
        return MixingPair(W, W, name=name or 'dsgt')
    if scheme == 'tree':
        if push_graph is None:
            raise StructureError("The tree scheme needs a pull and a push tree")
        return tree_01_matrices(pull_graph, push_graph, name=name or 'tree')
    raise MixingError("Unknown mixing scheme '{}'".format(scheme))


__all__ = [
    'MixingError', 'NotUndirectedError', 'StructureError', 'DecayUncertifiableError',
    'AssumptionViolationError', 'NumericalError', 'GraphError',
    'MixingPair', 'RootEigenvector', 'DecayCertificate', 'ValidationReport',
    'pull_matrix', 'push_matrix', 'doubly_stochastic', 'tree_01_matrices',
    'root_eigenvector', 'second_eigenvalue_modulus', 'certify_decay', 'validate_pair',
    'build_pair', 'save_matrix', 'load_matrix',
]
