# -*- coding: utf-8 -*-
"""Spectral series constants and the convergence-theory bundle.

With R̃ᵗ = (R − 1π_Rᵀ)ᵗ and C̃ᵗ = (C − π_C1ᵀ)ᵗ for t >= 1 and C̃⁰ = I − π_C1ᵀ,
the constants are

    M1 = ‖π_RᵀC‖² + Σ_{t>=1} ‖π_Rᵀ(C̃ᵗ⁺¹ − C̃ᵗ)‖²
    M2 = Σ_{t>=1} t ‖π_Rᵀ(C̃ᵗ⁺¹ − C̃ᵗ)‖
    N1 = Σ_{t>=1} ‖π_RᵀC̃ᵗ‖          N2 = Σ_{t>=0} ‖π_RᵀC̃ᵗ‖²
    N3 = Σ_{t>=1} ‖R̃ᵗπ_C‖           N4 = Σ_{t>=1} ‖R̃ᵗπ_C‖²
    N5 = Σ_{t>=1} ‖S_t‖              S_t = Σ_{k=1}^{t−1} R̃ᵏC̃ᵗ⁻ᵏ
    N6 = Σ_{t>=1} ‖S_t + R̃ᵗC̃⁰‖²
    N7 = Σ_{t>=1} ‖S_{t+1} − S_t‖²  N8 = Σ_{t>=1} ‖S_{t+1} − S_t‖

S_t obeys S_1 = 0, S_{t+1} = (S_t + R̃ᵗ) C̃, so each term costs one matrix
product. Summation stops once the decay certificates bound every remaining
tail below tol.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function

import json
import logging
import math

import numpy as np
import scipy.linalg

from .errors import SimulationError, AssumptionViolationError
from .linalg import spectral_norm

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_TERMS = 100000

# Universal constant of the convergence bound
C0 = 2e6

SERIES_NAMES = ('M1', 'M2', 'N1', 'N2', 'N3', 'N4', 'N5', 'N6', 'N7', 'N8')


# Custom Exceptions

class SeriesError(SimulationError):
    """Base exception for series computations."""
    pass


class TruncationError(SeriesError):
    """Raised when the tail bound stays above tol for max_terms terms.

    Attributes:
        max_terms (int): Term cap that was reached
        tail_bound (float): Tail bound at the cap
    """

    def __init__(self, max_terms, tail_bound):
        self.max_terms = max_terms
        self.tail_bound = tail_bound
        super(TruncationError, self).__init__(
            "Series tail bound {:.3g} still above tolerance after {} terms".format(
                tail_bound, max_terms))


class NotSymmetricError(SeriesError):
    """Raised when a closed form needs a symmetric matrix."""
    pass


def _opt(value):
    return None if value is None else float(value)


class SpectralReport(object):
    """Series constants of a certified mixing pair.

    Attributes:
        n (int): Node count
        pi_R, pi_C (numpy.ndarray): Root eigenvectors
        pi (float): π_Rᵀπ_C
        lam (float): ‖W − 11ᵀ/n‖₂ when R = C = W is doubly stochastic, else None
        lambda_min (float): Smallest eigenvalue of W when W is symmetric, else None
        M1, M2, M2_tilde, N1 ... N8 (float): Series constants
        spanning_tree_mode (bool): Copied from the pair; M2_tilde is 0 when set
        truncation_T (int): Last summed index
        tail_bound (float): Largest remaining tail bound at truncation
        case (str): 'doubly_stochastic', 'symmetric', 'psd' or 'general'
        upper_bounds (tuple): Names of constants that hold upper bounds
            instead of values
    """

    def __init__(self, n, pi_R, pi_C, constants, spanning_tree_mode=False, lam=None,
                 lambda_min=None, truncation_T=0, tail_bound=0.0, case='general',
                 upper_bounds=(), alpha=None):
        self.n = int(n)
        self.pi_R = np.asarray(pi_R, dtype=float)
        self.pi_C = np.asarray(pi_C, dtype=float)
        self.pi = float(self.pi_R.dot(self.pi_C))
        self.lam = _opt(lam)
        self.lambda_min = _opt(lambda_min)
        self.spanning_tree_mode = bool(spanning_tree_mode)
        for name in SERIES_NAMES:
            setattr(self, name, float(constants[name]))
        self.M2_tilde = 0.0 if self.spanning_tree_mode else self.M2
        self.truncation_T = int(truncation_T)
        self.tail_bound = float(tail_bound)
        self.case = case
        self.upper_bounds = tuple(upper_bounds)
        self.alpha = _opt(alpha)
        self.partial_sums = None

    def constants(self):
        """dict: name -> value for M1, M2, M2_tilde and N1..N8."""
        values = dict((name, getattr(self, name)) for name in SERIES_NAMES)
        values['M2_tilde'] = self.M2_tilde
        return values

    def to_dict(self):
        data = self.constants()
        data.update({
            'n': self.n,
            'pi_R': self.pi_R.tolist(),
            'pi_C': self.pi_C.tolist(),
            'pi': self.pi,
            'lambda': self.lam,
            'lambda_min': self.lambda_min,
            'spanning_tree_mode': self.spanning_tree_mode,
            'truncation_T': self.truncation_T,
            'tail_bound': self.tail_bound,
            'case': self.case,
            'upper_bounds': list(self.upper_bounds),
            'alpha': self.alpha,
        })
        return data

    @classmethod
    def from_dict(cls, data):
        return cls(data['n'], data['pi_R'], data['pi_C'], data,
                   spanning_tree_mode=data.get('spanning_tree_mode', False),
                   lam=data.get('lambda'), lambda_min=data.get('lambda_min'),
                   truncation_T=data.get('truncation_T', 0),
                   tail_bound=data.get('tail_bound', 0.0),
                   case=data.get('case', 'general'),
                   upper_bounds=data.get('upper_bounds', ()),
                   alpha=data.get('alpha'))

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def __repr__(self):
        return "SpectralReport(n={}, pi={:.6g}, case='{}')".format(self.n, self.pi, self.case)


class TheoryBundle(object):
    """Derived constants and the admissible stepsize."""

    FIELDS = ('P1', 'P2', 'P3', 'P4', 'P5', 'Q', 'C1', 'L', 'sigma2', 'Delta_f', 'F0',
              'gamma', 'T')

    def __init__(self, **values):
        missing = [name for name in self.FIELDS if name not in values]
        if missing:
            raise ValueError("Missing theory bundle fields: {}".format(', '.join(missing)))
        for name in self.FIELDS:
            setattr(self, name, values[name])
        self.T = int(self.T)

    @property
    def max_P23(self):
        return max(self.P2, self.P3)

    @property
    def max_P(self):
        return max(self.P1, self.P2, self.P3, self.P4)

    def to_dict(self):
        return dict((name, getattr(self, name)) for name in self.FIELDS)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _tail_geometric(r, c):
    """Σ_{t>=c} rᵗ"""
    return r ** c / (1.0 - r)


def _tail_linear(r, c):
    """Σ_{t>=c} t rᵗ"""
    return r ** c * (r / (1.0 - r) ** 2 + c / (1.0 - r))


def _tail_quadratic(r, c):
    """Σ_{t>=c} t² rᵗ"""
    return r ** c * (r * (1.0 + r) / (1.0 - r) ** 3 + 2.0 * c * r / (1.0 - r) ** 2
                     + c * c / (1.0 - r))


def _tail_bounds(T, a, B_R, B_C, pi_C_norm):
    """Bounds on every series remainder beyond index T."""
    c = T + 1
    a2 = a * a
    K = B_R * B_C
    return {
        'M1': 4.0 * B_C ** 2 * _tail_geometric(a2, c),
        'M2': 2.0 * B_C * _tail_linear(a, c),
        'N1': B_C * _tail_geometric(a, c),
        'N2': B_C ** 2 * _tail_geometric(a2, c),
        'N3': B_R * pi_C_norm * _tail_geometric(a, c),
        'N4': (B_R * pi_C_norm) ** 2 * _tail_geometric(a2, c),
        'N5': K * _tail_linear(a, c),
        'N6': K * K * _tail_quadratic(a2, c),
        'N7': 4.0 * K * K * _tail_quadratic(a2, c),
        'N8': 2.0 * K * _tail_linear(a, c),
    }


def _scaled(value, t, log_a):
    """value / aᵗ evaluated in log space."""
    if value == 0.0:
        return 0.0
    return math.exp(min(math.log(value) - t * log_a, 700.0))


def _is_doubly_stochastic(A, tol=1e-12):
    return (np.max(np.abs(A.sum(axis=0) - 1.0)) <= tol
            and np.max(np.abs(A.sum(axis=1) - 1.0)) <= tol)


def classify_pair(R, C):
    """Return (case, lam, lambda_min) for a mixing pair.

    R = C = W doubly stochastic is 'doubly_stochastic', 'symmetric' when W is
    symmetric and 'psd' when W is also positive semidefinite.
    """
    n = R.shape[0]
    if not (np.allclose(R, C, rtol=0.0, atol=1e-12) and _is_doubly_stochastic(R)):
        return 'general', None, None
    lam = spectral_norm(R - np.full((n, n), 1.0 / n))
    if np.max(np.abs(R - R.T)) > 1e-12:
        return 'doubly_stochastic', lam, None
    lambda_min = float(scipy.linalg.eigvalsh((R + R.T) / 2.0)[0])
    case = 'psd' if lambda_min >= -1e-12 else 'symmetric'
    return case, lam, lambda_min


def compute_constants(pair, cert_R, cert_C, tol=DEFAULT_TOL, max_terms=DEFAULT_MAX_TERMS,
                      norm_method='auto', keep_partial_sums=False):
    """Truncated evaluation of M1, M2 and N1..N8.

    Terms are added in a fixed order until t >= max(m_R, m_C) and every tail
    bound is below tol. With a = max(alpha_R, alpha_C), B_R = max_k ‖R̃ᵏ‖/aᵏ
    (k >= 1) and B_C = max_k ‖C̃ᵏ‖/aᵏ (k >= 0) over the computed terms, each
    term is bounded by a geometric or arithmetico-geometric sequence in a.

    Args:
        pair (MixingPair): Validated pair
        cert_R (DecayCertificate): Certificate of R (carries π_R)
        cert_C (DecayCertificate): Certificate of Cᵀ (carries π_C)
        tol (float): Tail tolerance
        max_terms (int): Hard cap on summed terms
        norm_method (str): Norm method for matrix terms
        keep_partial_sums (bool): Record the running sums on the report

    Returns:
        SpectralReport: The constants with truncation metadata

    Raises:
        TruncationError: If the cap is reached first
    """
    R = np.asarray(pair.R, dtype=float)
    C = np.asarray(pair.C, dtype=float)
    n = R.shape[0]
    pi_R = np.asarray(cert_R.pi, dtype=float)
    pi_C = np.asarray(cert_C.pi, dtype=float)
    ones = np.ones(n)

    R_dev = R - np.outer(ones, pi_R)
    C_dev = C - np.outer(pi_C, ones)
    C_proj = np.eye(n) - np.outer(pi_C, ones)

    a = max(cert_R.alpha, cert_C.alpha)
    m = max(cert_R.m, cert_C.m)
    pi_C_norm = float(np.sqrt(pi_C.dot(pi_C)))

    def norm(M):
        return spectral_norm(M, method=norm_method)

    sums = dict((name, 0.0) for name in SERIES_NAMES)
    partials = dict((name, []) for name in SERIES_NAMES) if keep_partial_sums else None

    # t = 0 terms
    head = pi_R.dot(C)
    sums['M1'] += head.dot(head)
    row = pi_R.dot(C_proj)
    sums['N2'] += row.dot(row)
    B_C = max(1.0, norm(C_proj))
    B_R = 1.0

    R_pow = R_dev.copy()          # R̃ᵗ
    C_pow = C_dev.copy()          # C̃ᵗ
    C_next = C_pow.dot(C_dev)     # C̃ᵗ⁺¹
    S = np.zeros((n, n))          # S_t
    log_a = math.log(a)

    T = 0
    tails = None
    for t in range(1, max_terms + 1):
        T = t
        S_next = (S + R_pow).dot(C_dev)

        row_diff = pi_R.dot(C_next - C_pow)
        diff_sq = row_diff.dot(row_diff)
        row = pi_R.dot(C_pow)
        col = R_pow.dot(pi_C)
        col_sq = col.dot(col)
        U_norm = norm(S + R_pow.dot(C_proj))
        V_norm = norm(S_next - S)

        sums['M1'] += diff_sq
        sums['M2'] += t * math.sqrt(diff_sq)
        sums['N1'] += math.sqrt(row.dot(row))
        sums['N2'] += row.dot(row)
        sums['N3'] += math.sqrt(col_sq)
        sums['N4'] += col_sq
        sums['N5'] += norm(S)
        sums['N6'] += U_norm ** 2
        sums['N7'] += V_norm ** 2
        sums['N8'] += V_norm
        if partials is not None:
            for name in SERIES_NAMES:
                partials[name].append(sums[name])

        B_R = max(B_R, _scaled(norm(R_pow), t, log_a))
        B_C = max(B_C, _scaled(norm(C_pow), t, log_a))

        if t >= m:
            tails = _tail_bounds(t, a, B_R, B_C, pi_C_norm)
            if max(tails.values()) < tol:
                break

        R_pow = R_pow.dot(R_dev)
        C_pow = C_next
        C_next = C_next.dot(C_dev)
        S = S_next
    else:
        worst = max(tails.values()) if tails else float('inf')
        logger.error("Series truncation failed after {} terms".format(max_terms))
        raise TruncationError(max_terms, worst)

    tail_bound = max(tails.values())
    case, lam, lambda_min = classify_pair(R, C)
    report = SpectralReport(n, pi_R, pi_C, sums, spanning_tree_mode=pair.spanning_tree_mode,
                            lam=lam, lambda_min=lambda_min, truncation_T=T,
                            tail_bound=tail_bound, case=case, alpha=a)
    report.partial_sums = partials
    logger.info("Series constants for '{}' truncated at T={} (tail bound {:.3g})".format(
        getattr(pair, 'name', 'pair'), T, tail_bound))
    return report


def closed_form_symmetric(W):
    """Exact constants for R = C = W symmetric and doubly stochastic.

    M1 = 1/n, M2 = N1..N4 = 0, N5 = λ²/(1−λ)², N6 = (λ²+λ⁴)/(1−λ²)³. N7 and
    N8 hold the upper bounds 10/(c(1−λ)) and 10/(√c(1−λ)) with
    c = 1 + min(λ_n, 0).

    Raises:
        NotSymmetricError: If W deviates from symmetry by more than 1e-12
        AssumptionViolationError: If W is not doubly stochastic or λ >= 1
    """
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    if np.max(np.abs(W - W.T)) > 1e-12:
        raise NotSymmetricError("W is not symmetric (max asymmetry {:.3g})".format(
            float(np.max(np.abs(W - W.T)))))
    if not _is_doubly_stochastic(W):
        raise AssumptionViolationError('doubly stochastic W')
    lam = spectral_norm(W - np.full((n, n), 1.0 / n), method='dense')
    if lam >= 1.0:
        raise AssumptionViolationError('lambda < 1', "lambda = {:.6g}".format(lam))
    lambda_min = float(scipy.linalg.eigvalsh(W)[0])
    c = 1.0 + min(lambda_min, 0.0)

    constants = dict((name, 0.0) for name in SERIES_NAMES)
    constants['M1'] = 1.0 / n
    constants['N5'] = lam ** 2 / (1.0 - lam) ** 2
    constants['N6'] = (lam ** 2 + lam ** 4) / (1.0 - lam ** 2) ** 3
    constants['N7'] = 10.0 / (c * (1.0 - lam)) if c > 0 else float('inf')
    constants['N8'] = 10.0 / (math.sqrt(c) * (1.0 - lam)) if c > 0 else float('inf')
    uniform = np.full(n, 1.0 / n)
    case = 'psd' if lambda_min >= -1e-12 else 'symmetric'
    return SpectralReport(n, uniform, uniform, constants, lam=lam, lambda_min=lambda_min,
                          case=case, upper_bounds=('N7', 'N8'))


def doubly_stochastic_bounds(W):
    """Constants for R = C = W doubly stochastic but not necessarily symmetric.

    Returns:
        dict: Exact 'M1', 'M2', 'N1'..'N4' and the upper bounds 'N5_max',
            'N6_max', 'N7_max', 'N8_max', plus 'lambda'

    Raises:
        AssumptionViolationError: If W is not doubly stochastic or λ >= 1
    """
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    if not _is_doubly_stochastic(W):
        raise AssumptionViolationError('doubly stochastic W')
    lam = spectral_norm(W - np.full((n, n), 1.0 / n), method='dense')
    if lam >= 1.0:
        raise AssumptionViolationError('lambda < 1', "lambda = {:.6g}".format(lam))
    return {
        'lambda': lam,
        'M1': 1.0 / n,
        'M2': 0.0, 'N1': 0.0, 'N2': 0.0, 'N3': 0.0, 'N4': 0.0,
        'N5_max': lam ** 2 / (1.0 - lam) ** 2,
        'N6_max': (lam ** 2 + lam ** 4) / (1.0 - lam ** 2) ** 3,
        'N7_max': 8.0 / (1.0 - lam ** 2) ** 3,
        'N8_max': 8.0 / (1.0 - lam) ** 2,
    }


def _q_value(report):
    return max(report.M1, report.M2_tilde, report.M1 * report.M2_tilde)


def speedup_ratio(report, n=None):
    """max{M1, M̃2, M1·M̃2} / (n π²)

    Raises:
        AssumptionViolationError: If π <= 0
    """
    n = report.n if n is None else n
    if report.pi <= 0.0:
        raise AssumptionViolationError('pi > 0', "pi = {:.3g}".format(report.pi))
    return _q_value(report) / (n * report.pi ** 2)


def _safe_ratio(numerator, denominator):
    if denominator == 0.0:
        return 0.0 if numerator == 0.0 else float('inf')
    return numerator / denominator


def theory_bundle(report, L, sigma2, Delta_f, F0, T):
    """Derived constants P1..P5, Q, C1 and the admissible stepsize.

    gamma is the smallest of
        (Δf / (√max{P2,P3} · max{N4,N7} · σ²L²))^(1/3),
        (Δf / (Q σ² L (T+1)))^(1/2),
        1 / (500 √max{P1..P4} L);
    a candidate with a zero denominator is +inf.

    Args:
        report (SpectralReport): Constants of the pair
        L (float): Smoothness constant
        sigma2 (float): Gradient-noise variance
        Delta_f (float): f(x⁰) − f*
        F0 (float): ‖∇F(x⁰)‖_F² / n
        T (int): Horizon

    Returns:
        TheoryBundle: The bundle
    """
    if T < 1:
        raise ValueError("Horizon T must be at least 1, got {}".format(T))
    n = report.n
    pi = report.pi
    N1, N2, N3, N4 = report.N1, report.N2, report.N3, report.N4
    N5, N6, N7, N8 = report.N5, report.N6, report.N7, report.N8
    M2t = report.M2_tilde
    root_n = math.sqrt(n)

    P1 = max(n * N1 ** 2, n * N3 ** 2, N8 ** 2, root_n * N1 * N5, n * pi * N5)
    P2 = max(n ** 2 * pi ** 2, n * N1 ** 2, n * N1 ** 2 * M2t, n ** 2 * pi ** 2 * M2t ** 2)
    P3 = max(n ** 2 * pi ** 2, N1 ** 4 / pi ** 2, N3 ** 4 / pi ** 2)
    P4 = math.sqrt(max(P2, P3)) * N5
    ratio = _safe_ratio(N6, N5)
    if math.isinf(ratio):
        logger.warning("N5 = 0 with N6 > 0: P5 is infinite")
    P5 = max(N2 / pi, N2 / (n * pi ** 2), ratio)
    Q = _q_value(report)
    C1 = P1

    candidates = [
        _safe_ratio(Delta_f, math.sqrt(max(P2, P3)) * max(N4, N7) * sigma2 * L ** 2) ** (1.0 / 3.0),
        _safe_ratio(Delta_f, Q * sigma2 * L * (T + 1)) ** 0.5,
        1.0 / (500.0 * math.sqrt(max(P1, P2, P3, P4)) * L),
    ]
    gamma = min(candidates)
    return TheoryBundle(P1=P1, P2=P2, P3=P3, P4=P4, P5=P5, Q=Q, C1=C1, L=float(L),
                        sigma2=float(sigma2), Delta_f=float(Delta_f), F0=float(F0),
                        gamma=gamma, T=T)


def bound_terms(bundle, report, n=None, T=None):
    """The five terms of the convergence bound, before the factor C0.

    The fourth term stems from a σ²γ⁴ contribution and is 0 when σ = 0.
    """
    n = report.n if n is None else n
    T = bundle.T if T is None else T
    pi = report.pi
    L, sigma2, Delta_f = bundle.L, bundle.sigma2, bundle.Delta_f
    sigma = math.sqrt(sigma2)
    root_P23 = math.sqrt(bundle.max_P23)
    N47 = max(report.N4, report.N7)

    first = math.sqrt(bundle.Q / (n * pi ** 2)) * math.sqrt(Delta_f * sigma2 * L / (n * (T + 1)))
    second = ((Delta_f ** 2 * root_P23 * N47 * L ** 2 * sigma2) ** (1.0 / 3.0)
              / (n * pi * (T + 1) ** (2.0 / 3.0)))
    third = math.sqrt(bundle.max_P) * L * Delta_f / (n * pi * (T + 1))
    if sigma == 0.0 or report.N5 == 0.0:
        fourth = 0.0
    else:
        fourth = (root_P23 * report.M1 * report.N5 ** 2 / (n * pi * bundle.Q ** 2)
                  * (Delta_f * L / (sigma * (T + 1))) ** 2)
    fifth = 0.0 if bundle.F0 == 0.0 else bundle.P5 * bundle.F0 / (n * pi * (T + 1))
    return [first, second, third, fourth, fifth]


def bound_rhs(bundle, report, n=None, T=None):
    """Right-hand side of the convergence bound with C0 = 2e6."""
    return C0 * sum(bound_terms(bundle, report, n=n, T=T))


def descent_rhs(bundle, report, n=None, T=None, gamma=None):
    """Explicit descent bound at a stepsize (the bundle's by default).

        10Δf/(γnπ(T+1)) + 100Qσ²Lγ/(nπ)
        + 80000 √max{P2,P3} max{N4,N7} σ²L²γ²/(nπ)
        + 200000 √max{P2,P3} M1 N5² σ²L⁴γ⁴/(nπ) + 30 P5 F0/(n²π(T+1))
    """
    n = report.n if n is None else n
    T = bundle.T if T is None else T
    gamma = bundle.gamma if gamma is None else gamma
    pi = report.pi
    L, sigma2 = bundle.L, bundle.sigma2
    root_P23 = math.sqrt(bundle.max_P23)
    n_pi = n * pi
    total = 10.0 * bundle.Delta_f / (gamma * n_pi * (T + 1))
    total += 100.0 * bundle.Q * sigma2 * L * gamma / n_pi
    total += 80000.0 * root_P23 * max(report.N4, report.N7) * sigma2 * L ** 2 * gamma ** 2 / n_pi
    total += 200000.0 * root_P23 * report.M1 * report.N5 ** 2 * sigma2 * L ** 4 * gamma ** 4 / n_pi
    if bundle.F0 != 0.0:
        total += 30.0 * bundle.P5 * bundle.F0 / (n * n_pi * (T + 1))
    return total


def transient_time(report, L, sigma2, Delta_f, F0, max_T=10 ** 15):
    """Smallest T at which the 1/√(nT) term dominates the other four.

    Returns:
        int or None: The transient time, None if it exceeds max_T or σ = 0
    """
    def dominated(T):
        bundle = theory_bundle(report, L, sigma2, Delta_f, F0, T)
        terms = bound_terms(bundle, report)
        return terms[0] >= sum(terms[1:])

    if sigma2 <= 0.0:
        return None
    high = 1
    while not dominated(high):
        high *= 2
        if high > max_T:
            logger.warning("Transient time exceeds {}".format(max_T))
            return None
    low = high // 2
    while high - low > 1:
        middle = (low + high) // 2
        if dominated(middle):
            high = middle
        else:
            low = middle
    return high
