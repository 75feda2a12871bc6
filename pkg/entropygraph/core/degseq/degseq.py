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
from collections import namedtuple
import heapq
import itertools
import logging
import math
import numbers
from pathlib import Path

import numpy as np

from entropygraph.core import (
    DomainError,
    Infeasible,
    InvalidDegreeSequence,
    NoFeasibleK,
    SimpleGraph,
    serialize_abcs,
)

logger = logging.getLogger(__name__)


class DegreeSequence(serialize_abcs.Serializable):
    """
    A degree sequence d_1 <= ... <= d_n of positive integers with total M.

    Input may arrive in any vertex order; the degrees are stored sorted and
    ``order`` remembers the permutation, ``order[pos]`` being the caller's
    vertex index of sorted position ``pos``.  All operations of this package
    address vertices by sorted position.
    """

    def __init__(self, degrees):
        values = []
        for value in degrees:
            if isinstance(value, bool) or not isinstance(value, numbers.Integral):
                if isinstance(value, numbers.Real) and float(value).is_integer():
                    value = int(value)
                else:
                    msg = 'degrees must be integers, got {0!r}'.format(value)
                    raise InvalidDegreeSequence(msg)
            values.append(int(value))

        if not values:
            raise InvalidDegreeSequence('a degree sequence needs at least one vertex')
        if min(values) < 1:
            msg = 'every degree must be at least 1, got {0}'.format(min(values))
            raise InvalidDegreeSequence(msg)

        original = np.asarray(values, dtype=np.int64)
        order = np.argsort(original, kind='stable')
        degrees = original[order]
        for array in (original, order, degrees):
            array.flags.writeable = False

        self.original_degrees = original
        self.order = order
        self.degrees = degrees
        self.n = len(values)
        self.total = int(degrees.sum())
        self._prefix = np.concatenate(([0], np.cumsum(degrees)))
        self._prefix.flags.writeable = False

    @classmethod
    def from_file(cls, path):
        """
        Plain text, one integer per line or a single comma-separated line;
        blank lines and lines starting with '#' are ignored.
        """
        values = []
        with Path(path).open() as stream:
            for lineno, raw in enumerate(stream, start=1):
                line = raw.strip()
                if not line or line.startswith('#'):
                    continue
                for token in line.split(','):
                    token = token.strip()
                    if not token:
                        continue
                    try:
                        values.append(int(token))
                    except ValueError:
                        msg = '{0}:{1}: not an integer: {2!r}'.format(path, lineno, token)
                        raise InvalidDegreeSequence(msg)
        return cls(values)

    @property
    def prefix(self):
        """prefix[i] = d_1 + ... + d_i (sorted order), prefix[0] = 0"""
        return self._prefix

    @property
    def max_degree(self):
        return int(self.degrees[-1])

    @property
    def m_even(self):
        return self.total % 2 == 0

    def sorted_position(self, vertex):
        """Sorted position of the caller's vertex index."""
        return int(np.flatnonzero(self.order == vertex)[0])

    def to_original(self, values):
        """Reorder a per-position array into the caller's vertex order."""
        values = np.asarray(values)
        out = np.empty_like(values)
        out[self.order] = values
        return out

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.degrees.tolist())

    def __getitem__(self, index):
        return int(self.degrees[index])

    def __eq__(self, other):
        return (isinstance(other, DegreeSequence) and
                np.array_equal(self.degrees, other.degrees))

    def __hash__(self):
        return hash(tuple(self.degrees.tolist()))

    def __getstate__(self):
        return {'degrees': self.degrees.tolist(), 'total': self.total}

    def __repr__(self):
        shown = self.degrees.tolist()
        if len(shown) > 12:
            shown = '{0}, ..., {1}'.format(str(shown[:6])[1:-1], str(shown[-3:])[1:-1])
        else:
            shown = str(shown)[1:-1]
        return 'DegreeSequence(n={0}, total={1}, degrees=[{2}])'.format(
            self.n, self.total, shown)


# -----------------------------------------------------------------------------
# Erdos-Gallai
# -----------------------------------------------------------------------------

class EGReport(namedtuple('EGReport', 'strict_pass nonstrict_pass margins m_even')):
    """
    margins[k-1] = (lhs, rhs) for k = 1..n where lhs is the sum of the k
    largest degrees and rhs = k(k-1) + sum over the remaining n-k of
    min(k, d_i).
    """
    __slots__ = ()

    @property
    def is_graphical(self):
        return self.nonstrict_pass and self.m_even

    @property
    def first_violation(self):
        """Smallest k (1-based) whose strict inequality fails, else None."""
        for k, (lhs, rhs) in enumerate(self.margins, start=1):
            if lhs >= rhs:
                return k
        return None


def _eg_margins(degrees):
    """
    Vectorized Erdos-Gallai sides for a non-decreasing integer array.
    Among the first n-k entries, those below k contribute themselves and the
    rest contribute k.
    """
    a = np.asarray(degrees, dtype=np.int64)
    n = len(a)
    prefix = np.concatenate(([0], np.cumsum(a)))
    ks = np.arange(1, n + 1, dtype=np.int64)
    below = np.searchsorted(a, ks, side='left')
    idx = np.minimum(below, n - ks)
    rhs = ks * (ks - 1) + prefix[idx] + ks * (n - ks - idx)
    lhs = prefix[n] - prefix[n - ks]
    return lhs, rhs


def check_erdos_gallai(D, strict=True):
    """
    Evaluates every Erdos-Gallai inequality of D.  Parity of M is reported on
    the report, never raised.

    :param strict: only affects the debug log; both verdicts are always
                   computed
    :rtype: EGReport
    """
    lhs, rhs = _eg_margins(D.degrees)
    strict_pass = bool(np.all(lhs < rhs))
    nonstrict_pass = bool(np.all(lhs <= rhs))
    margins = tuple(zip(lhs.tolist(), rhs.tolist()))
    report = EGReport(strict_pass, nonstrict_pass, margins, D.m_even)
    if not (strict_pass if strict else nonstrict_pass):
        logger.debug('{0} fails {1} Erdos-Gallai at k={2}'.format(
            D, 'strict' if strict else 'non-strict', report.first_violation))
    return report


def is_graphical_vector(values):
    """
    Graphicality of an arbitrary non-negative integer vector (zeros allowed,
    any order): even sum and every non-strict inequality.
    """
    a = np.sort(np.asarray(values, dtype=np.int64))
    if len(a) == 0:
        return True
    if a[0] < 0 or a.sum() % 2:
        return False
    lhs, rhs = _eg_margins(a)
    return bool(np.all(lhs <= rhs))


# -----------------------------------------------------------------------------
# S_k, ell(D) and the type classification
# -----------------------------------------------------------------------------

def s_k(D, k):
    """
    Sum of the d_k largest entries of D (k is 1-based).
    """
    if not 1 <= k <= D.n:
        raise IndexError('k={0} outside 1..{1}'.format(k, D.n))
    count = min(int(D.degrees[k - 1]), D.n)
    return int(D.total - D.prefix[D.n - count])


def _all_s_k(D):
    counts = np.minimum(D.degrees, D.n)
    return D.total - D.prefix[D.n - counts]


def ell(D):
    """
    :returns: the largest k in 1..n with S_k <= M/2
    :raises NoFeasibleK: when S_1 > M/2
    """
    feasible = np.flatnonzero(2 * _all_s_k(D) <= D.total)
    if len(feasible) == 0:
        s1 = s_k(D, 1)
        msg = 'no k satisfies S_k <= M/2 (S_1={0}, M/2={1})'.format(s1, D.total / 2)
        raise NoFeasibleK(msg, s1=s1, half_total=D.total / 2)
    return int(feasible[-1]) + 1


class TypeClassification(namedtuple('TypeClassification',
                                    'epsilon nu is_strict_graphic m_even m_large_enough '
                                    'nu_condition ell')):
    __slots__ = ()

    @property
    def type_epsilon(self):
        return self.is_strict_graphic and self.m_even and self.m_large_enough

    @property
    def type_epsilon_nu(self):
        return self.type_epsilon and self.nu_condition


def classify_type(D, epsilon, nu):
    """
    Evaluates every condition of a strict graphic sequence of type
    (epsilon, nu).

    ell(D) is only needed for the nu condition.  For a sequence that already
    fails strict Erdos-Gallai the verdict is false whatever ell does, so a
    NoFeasibleK there yields nu_condition=False; for strictly graphic input it
    propagates.
    """
    if epsilon <= 0 or nu <= 0:
        msg = 'epsilon and nu must be positive, got {0}, {1}'.format(epsilon, nu)
        raise DomainError(msg)

    n, total = D.n, D.total
    strict = check_erdos_gallai(D, strict=True).strict_pass
    m_large_enough = n ** (1.0 + epsilon) <= total

    try:
        ell_d = ell(D)
    except NoFeasibleK:
        if strict:
            raise
        ell_d = None

    if ell_d is None:
        nu_condition = False
    else:
        spread = int(D.degrees[-1]) - int(D.degrees[ell_d - 1]) + 1
        nu_condition = math.sqrt(n / total) * spread < n ** (-nu)

    return TypeClassification(epsilon, nu, strict, D.m_even, m_large_enough,
                              nu_condition, ell_d)


# -----------------------------------------------------------------------------
# Dense Erdos-Gallai condition of type (c1, c2, c3)
# -----------------------------------------------------------------------------

DenseEGReport = namedtuple('DenseEGReport',
                           'passes degree_bounds_pass infimum_pass infimum argmin_size')


def _min_set_size(n, c2):
    return max(1, math.ceil(c2 * n - 1e-9))


def _dense_value(sorted_degrees, members):
    """Unnormalized objective for the vertex set ``members``."""
    size = len(members)
    inside = set(members)
    outside = sum(min(int(d), size) for i, d in enumerate(sorted_degrees) if i not in inside)
    return outside + size * (size - 1) - sum(int(sorted_degrees[i]) for i in members)


def check_dense_eg(D, c1, c2, c3):
    """
    Condition 1 is checked directly.  For condition 2, the infimum over sets B
    with |B| >= c2*n is attained on B = the b largest degrees: that choice
    maximizes the sum over B while minimizing the sum of min(d_j, |B|)
    outside it.  The objective for top-b sets equals rhs - lhs of the b-th
    Erdos-Gallai margin.

    :rtype: DenseEGReport
    """
    if not (0 < c2 <= c1 < 1) or c3 <= 0:
        msg = 'need 0 < c2 <= c1 < 1 and c3 > 0, got ({0}, {1}, {2})'.format(c1, c2, c3)
        raise DomainError(msg)

    n = D.n
    degrees = D.degrees
    degree_bounds_pass = bool(np.all(c2 * (n - 1) <= degrees) and
                              np.all(degrees <= c1 * (n - 1)))

    lhs, rhs = _eg_margins(degrees)
    b_min = _min_set_size(n, c2)
    gaps = (rhs - lhs)[b_min - 1:]
    offset = int(np.argmin(gaps))
    infimum = float(gaps[offset]) / n ** 2
    infimum_pass = infimum >= c3

    return DenseEGReport(degree_bounds_pass and infimum_pass, degree_bounds_pass,
                         infimum_pass, infimum, b_min + offset)


def dense_eg_bruteforce(D, c2):
    """
    Infimum of the dense condition over ALL vertex subsets of admissible size.
    Exponential; an oracle for small n.
    """
    n = D.n
    best = None
    for size in range(_min_set_size(n, c2), n + 1):
        for members in itertools.combinations(range(n), size):
            value = _dense_value(D.degrees, members)
            if best is None or value < best:
                best = value
    return best / n ** 2


# -----------------------------------------------------------------------------
# Small-degree sets and Havel-Hakimi
# -----------------------------------------------------------------------------

def small_degree_set(D, alpha):
    """
    I_alpha = {i : d_i <= log(n)**alpha}, natural logarithm.

    :returns: sorted tuple of 0-based sorted positions
    """
    if alpha <= 0 or D.n < 2:
        msg = 'need alpha > 0 and n >= 2, got alpha={0}, n={1}'.format(alpha, D.n)
        raise DomainError(msg)
    threshold = math.log(D.n) ** alpha
    return tuple(np.flatnonzero(D.degrees <= threshold).tolist())


def havel_hakimi(D):
    """
    Builds a simple graph realizing D, or raises Infeasible.  Accepts a
    DegreeSequence (vertices are sorted positions) or any non-negative integer
    vector (vertices are vector positions).

    The vertex of largest residual degree is repeatedly joined to the
    vertices of next-largest residual degree; ties break on the lower index.
    """
    values = D.degrees if isinstance(D, DegreeSequence) else np.asarray(D, dtype=np.int64)
    n = len(values)
    if int(np.sum(values)) % 2:
        raise Infeasible('degree total {0} is odd'.format(int(np.sum(values))))

    heap = [(-int(d), v) for v, d in enumerate(values) if d > 0]
    heapq.heapify(heap)
    edges = []
    while heap:
        neg, v = heapq.heappop(heap)
        need = -neg
        if len(heap) < need:
            msg = 'vertex {0} needs {1} more neighbors, only {2} remain'.format(
                v, need, len(heap))
            raise Infeasible(msg)
        partners = [heapq.heappop(heap) for _ in range(need)]
        for neg_u, u in partners:
            edges.append((v, u))
            if neg_u + 1 < 0:
                heapq.heappush(heap, (neg_u + 1, u))

    return SimpleGraph(n, edges)
