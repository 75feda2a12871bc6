"""
Licensed to the Apache Software Foundation (ASF) under one
or more contributor license agreements.  See the NOTICE file
distributed with this work for additional information
regarding copyright ownership.  The ASF licenses this file
to you under the Apache License, Version 2.0 (the
"License"); you may not use this file except in compliance
with the License.  You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing,
software distributed under the License is distributed on an
"AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
KIND, either express or implied.  See the License for the
specific language governing permissions and limitations
under the License.
"""

"""
Maximum-entropy edge models for given degree sequences.

The general model makes every pair {i, j} an independent edge with
probability p_ij = r_i r_j / (1 + r_i r_j).  Internally everything is kept in
the log domain, theta = log r, so that p_ij = expit(theta_i + theta_j) and
log(1 + r_i r_j) = softplus(theta_i + theta_j).
"""
from collections import namedtuple
import logging
import math

import numpy as np
from scipy import linalg
from scipy.special import expit, gammaln, log_expit

from entropygraph.core import (
    BoundaryOptimum,
    DegreeSequence,
    DomainError,
    NonConvergence,
    OddM,
    SumMismatch,
    SolverSettings,
    check_erdos_gallai,
    graphs_abcs,
    memoized_property,
    publish,
    serialize_abcs,
)

logger = logging.getLogger(__name__)

P_MATRIX_MAX_N = 2000


def softplus(x):
    return np.logaddexp(0.0, x)


def _binary_entropy_from_logit(s):
    """H(expit(s)) in nats, stable for large |s|."""
    p = expit(s)
    return -(p * log_expit(s) + (1.0 - p) * log_expit(-s))


def binary_entropy(p):
    """H(p) = -p log p - (1-p) log(1-p) in nats, with H(0) = H(1) = 0."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        values = -(np.where(p > 0, p * np.log(p), 0.0) +
                   np.where(p < 1, (1 - p) * np.log1p(-p), 0.0))
    return values


def _row_blocks(n, chunk_rows):
    for start in range(0, n, chunk_rows):
        yield slice(start, min(start + chunk_rows, n))


def expected_degrees(theta, chunk_rows=256):
    """
    sum_{j != i} expit(theta_i + theta_j) for every i, in row blocks so that
    no n x n matrix is held at once.
    """
    n = len(theta)
    out = np.empty(n)
    for rows in _row_blocks(n, chunk_rows):
        block = expit(theta[rows, None] + theta[None, :])
        idx = np.arange(rows.start, rows.stop)
        block[idx - rows.start, idx] = 0.0
        out[rows] = block.sum(axis=1)
    return out


def _upper_block_sum(theta, func, chunk_rows=256):
    """sum over i < j of func(theta_i + theta_j), streaming by row blocks."""
    n = len(theta)
    total = 0.0
    for rows in _row_blocks(n, chunk_rows):
        block = func(theta[rows, None] + theta[None, :])
        row_idx = np.arange(rows.start, rows.stop)[:, None]
        col_idx = np.arange(n)[None, :]
        total += float(block[col_idx > row_idx].sum())
    return total


def log_partition(theta, chunk_rows=256):
    """sum_{i<j} log(1 + r_i r_j)"""
    return _upper_block_sum(np.asarray(theta, dtype=float), softplus, chunk_rows)


# -----------------------------------------------------------------------------
# General maximum-entropy model
# -----------------------------------------------------------------------------

class MaxEntropySolution(graphs_abcs.BernoulliModel, serialize_abcs.Serializable):
    """
    The fitted weights r for a sorted degree sequence.  Vertex i of the model
    is sorted position i of the degree sequence it was fitted to.

    p_ij is exposed through ``probability``, ``row`` and (for n up to 2000)
    ``p_matrix``; it is never stored.
    """

    def __init__(self, degrees, theta, degree_residuals, converged, iterations,
                 method, tol):
        self.degrees = np.asarray(degrees, dtype=np.int64)
        self.theta = np.asarray(theta, dtype=float)
        self.theta.flags.writeable = False
        self.degree_residuals = np.asarray(degree_residuals, dtype=float)
        self.converged = converged
        self.iterations = iterations
        self.method = method
        self.tol = tol

    @property
    def n(self):
        return len(self.theta)

    @memoized_property
    def r(self):
        r = np.exp(self.theta)
        r.flags.writeable = False
        return r

    @property
    def max_residual(self):
        return float(np.max(np.abs(self.degree_residuals))) if self.n else 0.0

    def row(self, i):
        p = expit(self.theta[i] + self.theta)
        p[i] = 0.0
        return p

    def probability(self, i, j):
        if i == j:
            raise ValueError('p(i, i) is undefined (i={0})'.format(i))
        return float(expit(self.theta[i] + self.theta[j]))

    def pair_probabilities(self):
        rows, cols = np.triu_indices(self.n, k=1)
        return expit(self.theta[rows] + self.theta[cols])

    def p_matrix(self):
        if self.n > P_MATRIX_MAX_N:
            msg = ('refusing to materialize a {0} x {0} probability matrix; '
                   'use row() or probability()'.format(self.n))
            raise ValueError(msg)
        p = expit(self.theta[:, None] + self.theta[None, :])
        np.fill_diagonal(p, 0.0)
        return p

    @memoized_property
    def log_partition(self):
        return log_partition(self.theta)

    @memoized_property
    def h1(self):
        return entropy_h1(self)

    def __getstate__(self):
        return {'r': self.r,
                'h1': self.h1,
                'residual': self.max_residual,
                'iterations': self.iterations,
                'converged': self.converged,
                'method': self.method}

    def __eq__(self, other):
        return (isinstance(other, MaxEntropySolution) and
                np.array_equal(self.theta, other.theta))

    __hash__ = None

    def __repr__(self):
        return ('MaxEntropySolution(n={0}, converged={1}, iterations={2}, '
                'method={3}, residual={4:.3g})'.format(
                    self.n, self.converged, self.iterations, self.method,
                    self.max_residual))


class MaxEntropySolver:
    """
    Fits r by the fixed point r_i <- d_i / sum_{j != i} r_j / (1 + r_i r_j),
    started at r_i = d_i / sqrt(M).  In the log domain one sweep reads
    theta <- theta + log(d) - log(expected degrees).

    When the max residual has not improved for ``stall_sweeps`` consecutive
    sweeps the solver falls back to damped Newton on the convex dual
    F(theta) = -sum d_i theta_i + sum_{i<j} softplus(theta_i + theta_j)
    with Armijo backtracking.  Above ``newton_max_n`` vertices the Hessian is
    not formed and the fixed-point direction is line-searched instead.
    """

    def __init__(self, settings=None, event_bus=None):
        self.solver_settings = SolverSettings(settings)
        self.event_bus = event_bus

    def solve(self, D, tol=None, max_iter=None):
        cfg = self.solver_settings
        tol = cfg.tol if tol is None else tol
        max_iter = cfg.max_iter if max_iter is None else max_iter

        report = check_erdos_gallai(D, strict=True)
        if not report.strict_pass:
            msg = ('{0} fails strict Erdos-Gallai at k={1}; the entropy optimum '
                   'is on the polytope boundary'.format(D, report.first_violation))
            logger.warning(msg)
            publish(self.event_bus, 'SOLVER.FAILED', n=D.n, reason='boundary')
            raise BoundaryOptimum(msg, report=report)

        d = D.degrees.astype(float)
        theta = np.log(d / math.sqrt(D.total))
        log_d = np.log(d)

        best = np.inf
        stalled = 0
        iterations = 0
        method = 'fixed_point'
        degrees = expected_degrees(theta, cfg.chunk_rows)
        residual = float(np.max(np.abs(degrees - d)))

        while iterations < max_iter and residual > tol:
            if stalled >= cfg.stall_sweeps:
                method = 'newton' if D.n <= cfg.newton_max_n else 'damped_fixed_point'
                msg = ('fixed point stalled at residual {0:.3g} after {1} sweeps; '
                       'switching to {2}'.format(residual, iterations, method))
                logger.info(msg)
                publish(self.event_bus, 'SOLVER.FALLBACK', n=D.n, sweeps=iterations,
                        residual=residual, method=method)
                break

            candidate = theta + (log_d - np.log(degrees))
            iterations += 1
            candidate_degrees = expected_degrees(candidate, cfg.chunk_rows)
            candidate_residual = float(np.max(np.abs(candidate_degrees - d)))
            if not np.isfinite(candidate_residual):
                # keep the last finite iterate for the fallback
                stalled = cfg.stall_sweeps
                continue
            theta, degrees, residual = candidate, candidate_degrees, candidate_residual
            if residual < best:
                best = residual
                stalled = 0
            else:
                stalled += 1
            logger.debug('sweep {0}: residual {1:.3g}'.format(iterations, residual))

        if residual > tol and iterations < max_iter:
            theta, degrees, iterations = self._line_search_descent(
                d, theta, degrees, iterations, tol, max_iter, newton=(method == 'newton'))
            residual = float(np.max(np.abs(degrees - d)))

        residuals = degrees - d
        if not residual <= tol:
            msg = ('solver did not reach tol={0:g} within {1} iterations '
                   '(residual {2:.3g})'.format(tol, max_iter, residual))
            logger.error(msg)
            publish(self.event_bus, 'SOLVER.FAILED', n=D.n, reason='max_iter',
                    residual=residual)
            raise NonConvergence(msg, residuals=residuals, iterations=iterations)

        publish(self.event_bus, 'SOLVER.CONVERGED', n=D.n, iterations=iterations,
                residual=residual, method=method)
        return MaxEntropySolution(D.degrees, theta, residuals, True, iterations, method, tol)

    def _dual_value(self, d, theta):
        return float(-d @ theta) + log_partition(theta, self.solver_settings.chunk_rows)

    def _newton_direction(self, theta, gradient):
        p = expit(theta[:, None] + theta[None, :])
        np.fill_diagonal(p, 0.0)
        weights = p * (1.0 - p)
        hessian = weights.copy()
        np.fill_diagonal(hessian, weights.sum(axis=1))
        try:
            return linalg.solve(hessian, -gradient, assume_a='pos')
        except (linalg.LinAlgError, ValueError):
            return linalg.lstsq(hessian, -gradient)[0]

    def _line_search_descent(self, d, theta, degrees, iterations, tol, max_iter,
                             newton=True):
        cfg = self.solver_settings
        log_d = np.log(d)
        value = self._dual_value(d, theta)

        while iterations < max_iter:
            gradient = degrees - d
            if np.max(np.abs(gradient)) <= tol:
                break
            if newton:
                direction = self._newton_direction(theta, gradient)
            else:
                direction = log_d - np.log(degrees)
            slope = float(gradient @ direction)
            if slope >= 0:
                # not a descent direction (numerical breakdown)
                direction = -gradient
                slope = float(gradient @ direction)

            step = 1.0
            while step >= cfg.min_step:
                candidate = theta + step * direction
                candidate_value = self._dual_value(d, candidate)
                if candidate_value <= value + cfg.armijo_c * step * slope:
                    break
                step *= cfg.backtrack
            else:
                logger.debug('line search exhausted at iteration {0}'.format(iterations))
                break

            theta, value = candidate, candidate_value
            degrees = expected_degrees(theta, cfg.chunk_rows)
            iterations += 1
            logger.debug('descent step {0}: t={1:.3g} residual {2:.3g}'.format(
                iterations, step, float(np.max(np.abs(degrees - d)))))

        return theta, degrees, iterations


def solve_max_entropy(D, tol=1e-10, max_iter=10000, settings=None, event_bus=None):
    """
    :type D: DegreeSequence
    :rtype: MaxEntropySolution
    :raises BoundaryOptimum: when D fails strict Erdos-Gallai
    :raises NonConvergence: after max_iter iterations
    """
    return MaxEntropySolver(settings, event_bus).solve(D, tol=tol, max_iter=max_iter)


def entropy_h1(solution):
    """sum_{i<j} H(p_ij) in nats, streamed over row blocks."""
    return _upper_block_sum(solution.theta, _binary_entropy_from_logit)


# -----------------------------------------------------------------------------
# Dual objectives
# -----------------------------------------------------------------------------

DualObjectives = namedtuple('DualObjectives', 'f g grad_f grad_g')


def dual_f(D, x):
    """
    F(x) = -sum d_i x_i + sum_{i<j} log(1 + e^{x_i + x_j}); minimized at
    x = log r.

    :returns: (value, gradient)
    """
    x = np.asarray(x, dtype=float)
    d = D.degrees.astype(float)
    value = float(-d @ x) + log_partition(x)
    gradient = expected_degrees(x) - d
    return value, gradient


def dual_g(D, r):
    """
    G(r) = -sum d_i log r_i + sum_{i<j} log(1 + r_i r_j) for positive r.

    :returns: (value, gradient)
    :raises DomainError: for non-positive r
    """
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError('G is defined for positive r only')
    value, grad_x = dual_f(D, np.log(r))
    return value, grad_x / r


def dual_objectives(D, r):
    """
    Both dual objectives at the positive weight vector r: F evaluated at
    x = log r with its gradient in x, and G at r with its gradient in r.

    :rtype: DualObjectives
    """
    g_value, grad_g = dual_g(D, r)
    f_value, grad_f = dual_f(D, np.log(np.asarray(r, dtype=float)))
    return DualObjectives(f_value, g_value, grad_f, grad_g)


# -----------------------------------------------------------------------------
# Graph probabilities
# -----------------------------------------------------------------------------

def _check_same_vertices(model_n, G):
    if G.n != model_n:
        msg = 'graph has {0} vertices, model has {1}'.format(G.n, model_n)
        raise ValueError(msg)


def log_prob_graph(solution, G):
    """
    log P(G~ = G) = sum_i d_i(G) log r_i - sum_{i<j} log(1 + r_i r_j)
    """
    _check_same_vertices(solution.n, G)
    return float(G.degrees @ solution.theta) - solution.log_partition


def log_prob_lower_bound(D):
    """
    M log(M / (n(n-1))), a lower bound for log_prob_graph over graphs with
    degree sequence exactly D whenever M <= n(n-1)/2.
    """
    n, total = D.n, D.total
    return total * math.log(total / (n * (n - 1)))


# -----------------------------------------------------------------------------
# Bipartite model
# -----------------------------------------------------------------------------

class BipartiteMaxEntropySolution(graphs_abcs.BernoulliModel, serialize_abcs.Serializable):
    """
    p_ij = r1_i r2_j / (1 + r1_i r2_j) between part A (vertices 0..n1-1) and
    part B (vertices n1..n1+n2-1); pairs within a part have probability 0.
    """

    support = 'bipartite'

    def __init__(self, theta1, theta2, row_residuals, col_residuals, converged,
                 iterations):
        self.theta1 = np.asarray(theta1, dtype=float)
        self.theta2 = np.asarray(theta2, dtype=float)
        self.row_residuals = np.asarray(row_residuals, dtype=float)
        self.col_residuals = np.asarray(col_residuals, dtype=float)
        self.converged = converged
        self.iterations = iterations

    @property
    def n1(self):
        return len(self.theta1)

    @property
    def n2(self):
        return len(self.theta2)

    @property
    def n(self):
        return self.n1 + self.n2

    @property
    def bipartite(self):
        return (self.n1, self.n2)

    @memoized_property
    def r1(self):
        return np.exp(self.theta1)

    @memoized_property
    def r2(self):
        return np.exp(self.theta2)

    @property
    def theta(self):
        return np.concatenate((self.theta1, self.theta2))

    @property
    def max_residual(self):
        return float(max(np.max(np.abs(self.row_residuals)),
                         np.max(np.abs(self.col_residuals))))

    def p_block(self):
        """The n1 x n2 matrix of crossing probabilities."""
        return expit(self.theta1[:, None] + self.theta2[None, :])

    def row(self, i):
        p = np.zeros(self.n)
        if i < self.n1:
            p[self.n1:] = expit(self.theta1[i] + self.theta2)
        else:
            p[:self.n1] = expit(self.theta2[i - self.n1] + self.theta1)
        return p

    def probability(self, i, j):
        if i == j:
            raise ValueError('p(i, i) is undefined (i={0})'.format(i))
        if (i < self.n1) == (j < self.n1):
            return 0.0
        if i > j:
            i, j = j, i
        return float(expit(self.theta1[i] + self.theta2[j - self.n1]))

    @memoized_property
    def h2(self):
        return float(_binary_entropy_from_logit(
            self.theta1[:, None] + self.theta2[None, :]).sum())

    @memoized_property
    def log_partition(self):
        return float(softplus(self.theta1[:, None] + self.theta2[None, :]).sum())

    def __getstate__(self):
        return {'r1': self.r1, 'r2': self.r2, 'h2': self.h2,
                'residual': self.max_residual, 'iterations': self.iterations,
                'converged': self.converged}

    __hash__ = None

    def __repr__(self):
        return ('BipartiteMaxEntropySolution(n1={0}, n2={1}, converged={2}, '
                'iterations={3})'.format(self.n1, self.n2, self.converged,
                                         self.iterations))


def solve_bipartite_max_entropy(D1, D2, tol=1e-10, max_iter=10000, settings=None,
                                event_bus=None):
    """
    Alternating fixed point r1_i <- d1_i / sum_j r2_j / (1 + r1_i r2_j), then
    the symmetric update for r2.  A margin equal to the opposite part size
    forces probabilities of 1 and has no interior optimum; it is reported as
    NonConvergence without iterating, as is divergence of the weights.

    :raises SumMismatch: when sum D1 != sum D2
    :raises NonConvergence: on divergence or after max_iter sweeps
    """
    cfg = SolverSettings(settings)
    if D1.total != D2.total:
        msg = 'bipartite margins differ: {0} != {1}'.format(D1.total, D2.total)
        raise SumMismatch(msg)

    d1 = D1.degrees.astype(float)
    d2 = D2.degrees.astype(float)
    n1, n2 = len(d1), len(d2)
    if d1.max() >= n2 or d2.max() >= n1:
        msg = ('a margin saturates its opposite part (max row {0} vs {1} columns, '
               'max column {2} vs {3} rows); the optimum is on the boundary'.format(
                   int(d1.max()), n2, int(d2.max()), n1))
        logger.warning(msg)
        publish(event_bus, 'SOLVER.FAILED', n=n1 + n2, reason='boundary')
        raise NonConvergence(msg, residuals=None, iterations=0)

    scale = math.sqrt(D1.total)
    theta1 = np.log(d1 / scale)
    theta2 = np.log(d2 / scale)
    log_bound = math.log(cfg.divergence_bound)

    def residuals(t1, t2):
        block = expit(t1[:, None] + t2[None, :])
        return block.sum(axis=1) - d1, block.sum(axis=0) - d2

    rows, cols = residuals(theta1, theta2)
    iterations = 0
    while iterations < max_iter:
        residual = max(np.max(np.abs(rows)), np.max(np.abs(cols)))
        if residual <= tol:
            break
        theta1 = theta1 + np.log(d1) - np.log(rows + d1)
        col_sums = expit(theta1[:, None] + theta2[None, :]).sum(axis=0)
        theta2 = theta2 + np.log(d2) - np.log(col_sums)
        iterations += 1
        rows, cols = residuals(theta1, theta2)
        if (not np.all(np.isfinite(theta1)) or not np.all(np.isfinite(theta2)) or
                np.max(np.abs(theta1)) > log_bound or np.max(np.abs(theta2)) > log_bound):
            msg = 'bipartite weights diverge after {0} sweeps'.format(iterations)
            logger.warning(msg)
            publish(event_bus, 'SOLVER.FAILED', n=n1 + n2, reason='divergence')
            raise NonConvergence(msg, residuals=(rows, cols), iterations=iterations)

    residual = max(np.max(np.abs(rows)), np.max(np.abs(cols)))
    if residual > tol:
        msg = ('bipartite solver did not reach tol={0:g} within {1} sweeps '
               '(residual {2:.3g})'.format(tol, max_iter, residual))
        logger.error(msg)
        publish(event_bus, 'SOLVER.FAILED', n=n1 + n2, reason='max_iter')
        raise NonConvergence(msg, residuals=(rows, cols), iterations=iterations)

    publish(event_bus, 'SOLVER.CONVERGED', n=n1 + n2, iterations=iterations,
            residual=float(residual), method='bipartite_fixed_point')
    return BipartiteMaxEntropySolution(theta1, theta2, rows, cols, True, iterations)


def log_prob_bipartite_graph(solution, G):
    """log-probability of a bipartite graph under the bipartite model"""
    _check_same_vertices(solution.n, G)
    return float(G.degrees @ solution.theta) - solution.log_partition


# -----------------------------------------------------------------------------
# q-model
# -----------------------------------------------------------------------------

QViolation = namedtuple('QViolation', 'vertex bound value limit')


class QModel(graphs_abcs.BernoulliModel):
    """
    The sparse surrogate q_ij = d_i d_j / (M + d_i d_j), i.e. r_i = d_i/sqrt(M).
    """

    def __init__(self, D):
        self.D = D
        self._d = D.degrees.astype(float)
        self._total = float(D.total)

    @property
    def n(self):
        return self.D.n

    def row(self, i):
        x = self._d[i] * self._d
        q = x / (self._total + x)
        q[i] = 0.0
        return q

    def probability(self, i, j):
        if i == j:
            raise ValueError('q(i, i) is undefined (i={0})'.format(i))
        x = self._d[i] * self._d[j]
        return float(x / (self._total + x))

    @memoized_property
    def q_degrees(self):
        return np.array([self.row(i).sum() for i in range(self.n)])

    @property
    def lower_bounds(self):
        """d_i (1 - 2 d_i d_n / M)"""
        return self._d * (1.0 - 2.0 * self._d * self._d[-1] / self._total)

    @property
    def loose_lower_bounds(self):
        """d_i (1 - 2 d_n^2 / M)"""
        return self._d * (1.0 - 2.0 * self._d[-1] ** 2 / self._total)

    @memoized_property
    def violations(self):
        slack = 1e-12 * np.maximum(self._d, 1.0)
        found = []
        for i, (loose, tight, value, d) in enumerate(zip(
                self.loose_lower_bounds, self.lower_bounds, self.q_degrees, self._d)):
            if loose > tight + slack[i]:
                found.append(QViolation(i, 'loose_lower', tight, loose))
            if tight > value + slack[i]:
                found.append(QViolation(i, 'lower', value, tight))
            if value > d + slack[i]:
                found.append(QViolation(i, 'upper', value, d))
        return tuple(found)

    def log_prob_graph(self, G):
        """
        sum_i d_i(G) log(d_i / sqrt(M)) - sum_{i<j} log(1 + d_i d_j / M)
        """
        _check_same_vertices(self.n, G)
        theta = np.log(self._d / math.sqrt(self._total))
        return float(G.degrees @ theta) - log_partition(theta)

    def log_ratio_bound(self, a):
        """2 log(n) sum_i d_q(i)^a"""
        return 2.0 * math.log(self.n) * float(np.sum(self.q_degrees ** a))

    def __repr__(self):
        return 'QModel(n={0}, total={1})'.format(self.n, int(self._total))


def q_model(D):
    """
    Builds the q-model for D.  Failures of the sandwich inequalities are
    logged and kept on ``violations``, never raised.
    """
    model = QModel(D)
    if model.violations:
        logger.warning('q-model sandwich violated at {0} vertices'.format(
            len(model.violations)))
    return model


# -----------------------------------------------------------------------------
# Regularity of r and the C(D) quantities
# -----------------------------------------------------------------------------

CheckResult = namedtuple('CheckResult', 'passed witness')


class RRegularityReport(namedtuple('RRegularityReport',
                                   'monotone product_bound ratio_bound tail_sum '
                                   'max_log_r_over_log_n')):
    __slots__ = ()

    @property
    def passed(self):
        return all(check.passed for check in self[:4])


def r_regularity_report(solution, D):
    """
    (a) r is non-decreasing; (b) r_1 r_n > 1/n; (c) r_{k+1}/r_k < n^4 whenever
    r_k >= 1; (d) r_k > n^2 implies sum_{i <= n-d_k-1} d_i <= M/2.  Each check
    carries the first witness (1-based k) that breaks it.  The empirical
    max |log r_i| / log n is recorded without any assertion.
    """
    r = solution.r
    n = D.n
    degrees = D.degrees

    witness = None
    for k in range(n - 1):
        if r[k + 1] < r[k] * (1.0 - 1e-9):
            witness = k + 1
            break
    monotone = CheckResult(witness is None, witness)

    product = float(r[0] * r[-1])
    product_bound = CheckResult(product > 1.0 / n, None if product > 1.0 / n else product)

    witness = None
    for k in range(n - 1):
        if r[k] >= 1.0 and not r[k + 1] / r[k] < n ** 4:
            witness = k + 1
            break
    ratio_bound = CheckResult(witness is None, witness)

    witness = None
    for k in range(n):
        if r[k] > n ** 2:
            upto = n - int(degrees[k]) - 1
            head = int(degrees[:max(upto, 0)].sum())
            if not 2 * head <= D.total:
                witness = k + 1
                break
    tail_sum = CheckResult(witness is None, witness)

    ratio = float(np.max(np.abs(solution.theta)) / math.log(n)) if n > 1 else 0.0
    return RRegularityReport(monotone, product_bound, ratio_bound, tail_sum, ratio)


def _check_a(a):
    if not 0.5 < a < 1.0:
        raise DomainError('need 1/2 < a < 1, got {0}'.format(a))


def c1_of_d(D, solution, a):
    """
    |log delta| * n * log(n)^(10/a1) with a1 = a - 1/2 and delta the smallest
    of min(p_ij, 1 - p_ij) over all pairs.  p_ij increases with
    theta_i + theta_j, so the extremes sit at the two smallest and the two
    largest weights.
    """
    _check_a(a)
    theta = np.sort(solution.theta)
    smallest = float(expit(theta[0] + theta[1]))
    largest = float(expit(theta[-1] + theta[-2]))
    delta = min(smallest, 1.0 - largest)
    a1 = a - 0.5
    return abs(math.log(delta)) * D.n * math.log(D.n) ** (10.0 / a1)


def c2_of_d(D, solution, a):
    """sum_i d_i^a |log r_i|"""
    return float(np.sum(D.degrees.astype(float) ** a * np.abs(solution.theta)))


def c2_upper_bound(D, a, nu):
    """4 log(n) n^(-nu) M (M/n)^(a - 1/2), valid for sequences of type (eps, nu)"""
    n, total = D.n, D.total
    return 4.0 * math.log(n) * n ** (-nu) * total * (total / n) ** (a - 0.5)


def mckay_log_count(D):
    """
    log of M! exp(-lam - lam^2) / ((M/2)! 2^(M/2) prod d_i!) with
    lam = (1/M) sum C(d_i, 2), evaluated with log-gamma.

    :raises OddM: when M is odd
    """
    total = D.total
    if total % 2:
        raise OddM('degree total {0} is odd'.format(total))
    d = D.degrees.astype(float)
    lam = float(np.sum(d * (d - 1) / 2.0)) / total
    half = total // 2
    return float(gammaln(total + 1) - lam - lam ** 2 - gammaln(half + 1) -
                 half * math.log(2.0) - np.sum(gammaln(d + 1)))
