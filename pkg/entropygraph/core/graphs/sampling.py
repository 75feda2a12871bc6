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
Random graphs: independent-edge laws, exact enumeration of small degree
classes and Markov chains that are uniform on the graphs with a given (or
almost given) degree sequence.

Every chain proposal here is symmetric and invalid proposals leave the state
unchanged, so the stationary law is uniform on the connected state space.
"""
from collections import namedtuple
from enum import Enum
import itertools
import logging
import math

import numpy as np

from entropygraph.core import (
    DegreeSequence,
    DomainError,
    Infeasible,
    NonConvergence,
    SamplerSettings,
    SimpleGraph,
    SizeGuard,
    SumMismatch,
    binomial_sigma,
    check_erdos_gallai,
    entropy_h1,
    graphs_abcs,
    havel_hakimi,
    is_graphical_vector,
    log_prob_graph,
    publish,
    serialize_abcs,
    solve_max_entropy,
    upper_pairs,
)

logger = logging.getLogger(__name__)


# -----------------------------------------------------------------------------
# Independent-edge laws
# -----------------------------------------------------------------------------

class MatrixBernoulliModel(graphs_abcs.BernoulliModel):
    """
    An explicit symmetric probability matrix.  With ``bipartite=(n1, n2)``
    only crossing pairs are supported.
    """

    def __init__(self, matrix, bipartite=None):
        matrix = np.array(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError('probability matrix must be square, got {0}'.format(matrix.shape))
        if not np.allclose(matrix, matrix.T):
            raise ValueError('probability matrix must be symmetric')
        off_diagonal = ~np.eye(len(matrix), dtype=bool)
        if np.any(matrix[off_diagonal] < 0) or np.any(matrix[off_diagonal] > 1):
            raise ValueError('probabilities must lie in [0, 1]')
        np.fill_diagonal(matrix, 0.0)
        if bipartite is not None:
            n1 = bipartite[0]
            matrix[:n1, :n1] = 0.0
            matrix[n1:, n1:] = 0.0
            self.support = 'bipartite'
        self.bipartite = bipartite
        self._matrix = matrix

    @property
    def n(self):
        return len(self._matrix)

    def row(self, i):
        return self._matrix[i].copy()

    def pair_probabilities(self):
        rows, cols = upper_pairs(self.n)
        return self._matrix[rows, cols]


class UniformBernoulliModel(graphs_abcs.BernoulliModel):
    """Every supported pair present with the same probability p."""

    def __init__(self, n, p, bipartite=None):
        if not 0 <= p <= 1:
            raise ValueError('p must lie in [0, 1], got {0}'.format(p))
        self._n = int(n)
        self.p = float(p)
        self.bipartite = bipartite
        if bipartite is not None:
            self.support = 'bipartite'

    @property
    def n(self):
        return self._n

    def row(self, i):
        row = np.full(self._n, self.p)
        if self.bipartite is not None:
            n1 = self.bipartite[0]
            if i < n1:
                row[:n1] = 0.0
            else:
                row[n1:] = 0.0
        row[i] = 0.0
        return row


def sample_bernoulli(model, rng):
    """
    One draw of the model: every supported pair independently.
    """
    p = model.pair_probabilities()
    mask = rng.random(len(p)) < p
    return SimpleGraph.from_edge_mask(model.n, mask, bipartite=getattr(model, 'bipartite', None))


def bernoulli_edge_indicators(model, count, rng, p=None):
    """
    ``count`` independent draws as a boolean (count, n(n-1)/2) array over
    the upper_pairs ordering.
    """
    p = model.pair_probabilities() if p is None else p
    return rng.random((int(count), len(p))) < p


def indicator_degrees(indicators, n):
    """Degree vectors of a batch of edge indicator rows."""
    rows, cols = upper_pairs(n)
    incidence = np.zeros((len(rows), n), dtype=np.int64)
    pairs = np.arange(len(rows))
    incidence[pairs, rows] = 1
    incidence[pairs, cols] = 1
    return np.asarray(indicators, dtype=np.int64) @ incidence


# -----------------------------------------------------------------------------
# Exact enumeration
# -----------------------------------------------------------------------------

def _degree_values(D):
    if isinstance(D, DegreeSequence):
        return [int(d) for d in D.degrees]
    return [int(d) for d in D]


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self):
        self.used += 1
        if self.used > self.limit:
            msg = 'enumeration exceeded its budget of {0} search nodes'.format(self.limit)
            raise SizeGuard(msg, estimate=self.used, budget=self.limit)


def _realizations(target, budget):
    """
    Every simple graph with degree vector ``target``: each vertex, in index
    order, picks its remaining neighbours among the later vertices.
    """
    n = len(target)
    residual = list(target)
    edges = []
    graphs = []

    def place(v):
        while v < n and residual[v] == 0:
            v += 1
        if v == n:
            graphs.append(SimpleGraph(n, edges))
            return
        need = residual[v]
        later = [w for w in range(v + 1, n) if residual[w] > 0]
        if len(later) < need:
            return
        residual[v] = 0
        for chosen in itertools.combinations(later, need):
            budget.spend()
            for w in chosen:
                residual[w] -= 1
                edges.append((v, w))
            place(v + 1)
            for w in chosen:
                residual[w] += 1
                edges.pop()
        residual[v] = need

    if sum(target) % 2 == 0:
        place(0)
    return graphs


def _check_enumerable(n, sampler_settings):
    if n > sampler_settings.enumeration_max_n:
        msg = 'exact enumeration is limited to n <= {0}, got n={1}'.format(
            sampler_settings.enumeration_max_n, n)
        raise SizeGuard(msg, estimate=n, budget=sampler_settings.enumeration_max_n)


def enumerate_gd(D, settings=None):
    """
    All simple graphs whose degree vector is exactly D, each once.  Vertex i
    carries D's i-th (sorted) degree.
    """
    sampler_settings = SamplerSettings(settings)
    target = _degree_values(D)
    _check_enumerable(len(target), sampler_settings)
    return _realizations(target, _Budget(sampler_settings.enumeration_budget))


def enumerate_bipartite(D1, D2, settings=None):
    """
    All bipartite graphs with row margins D1 (part A = 0..n1-1) and column
    margins D2 (part B = n1..n1+n2-1).
    """
    sampler_settings = SamplerSettings(settings)
    rows, cols = _degree_values(D1), _degree_values(D2)
    n1, n2 = len(rows), len(cols)
    _check_enumerable(n1 + n2, sampler_settings)
    if sum(rows) != sum(cols):
        msg = 'margin totals differ: {0} != {1}'.format(sum(rows), sum(cols))
        raise SumMismatch(msg)
    budget = _Budget(sampler_settings.enumeration_budget)
    residual = list(cols)
    edges = []
    graphs = []

    def place(i):
        if i == n1:
            if not any(residual):
                graphs.append(SimpleGraph(n1 + n2, edges, bipartite=(n1, n2)))
            return
        open_cols = [j for j in range(n2) if residual[j] > 0]
        for chosen in itertools.combinations(open_cols, rows[i]):
            budget.spend()
            for j in chosen:
                residual[j] -= 1
                edges.append((i, n1 + j))
            place(i + 1)
            for j in chosen:
                residual[j] += 1
                edges.pop()

    place(0)
    return graphs


def degree_box(D, a, slack=1.0):
    """
    Per-vertex integer degree ranges [lo_i, hi_i] with |x - d_i| < slack * d_i^a
    and 0 <= x <= n - 1.
    """
    values = _degree_values(D)
    n = len(values)
    boxes = []
    for d in values:
        radius = slack * d ** a
        lo = max(0, math.floor(d - radius))
        while abs(lo - d) >= radius:
            lo += 1
        hi = min(n - 1, math.ceil(d + radius))
        while hi >= lo and abs(hi - d) >= radius:
            hi -= 1
        boxes.append((lo, hi))
    return boxes


def enumerate_ga(D, a, settings=None):
    """
    All simple graphs in the almost-given class of D: every degree vector in
    the box, realized exhaustively.
    """
    sampler_settings = SamplerSettings(settings)
    values = _degree_values(D)
    _check_enumerable(len(values), sampler_settings)
    boxes = degree_box(values, a)
    budget = _Budget(sampler_settings.enumeration_budget)
    graphs = []
    for target in itertools.product(*(range(lo, hi + 1) for lo, hi in boxes)):
        budget.spend()
        if is_graphical_vector(target):
            graphs.extend(_realizations(list(target), budget))
    return graphs


def membership_ga(G, D, a, slack=1.0):
    """
    True iff |d_i(G) - d_i| < slack * d_i^a for every vertex (strict).
    """
    values = np.asarray(_degree_values(D), dtype=float)
    if G.n != len(values):
        msg = 'graph has {0} vertices, degree sequence has {1}'.format(G.n, len(values))
        raise ValueError(msg)
    return bool(np.all(np.abs(G.degrees - values) < slack * values ** a))


# -----------------------------------------------------------------------------
# Sampler configuration
# -----------------------------------------------------------------------------

class SamplerMethod(Enum):
    EXACT_ENUM = 'exact_enum'
    SWITCH_MCMC = 'switch_mcmc'
    TOGGLE_MCMC = 'toggle_mcmc'
    REJECTION = 'rejection'
    REWEIGHTED_REJECTION = 'reweighted_rejection'

    @property
    def is_chain(self):
        return self in (SamplerMethod.SWITCH_MCMC, SamplerMethod.TOGGLE_MCMC)


class SamplerConfig(serialize_abcs.Serializable):

    def __init__(self, seed, method, burn_in=1, thinning=1):
        self.seed = int(seed)
        self.method = SamplerMethod(method)
        self.burn_in = int(burn_in)
        self.thinning = int(thinning)
        if self.method.is_chain and (self.burn_in < 1 or self.thinning < 1):
            msg = 'burn_in and thinning must be >= 1, got {0} and {1}'.format(
                self.burn_in, self.thinning)
            raise ValueError(msg)

    @classmethod
    def for_size(cls, n, method, seed=None, settings=None):
        """Defaults: burn-in of 10 n^2 and thinning of n^2 proposed moves."""
        sampler_settings = SamplerSettings(settings)
        seed = sampler_settings.seed if seed is None else seed
        return cls(seed, method,
                   burn_in=max(1, sampler_settings.burn_in_factor * n * n),
                   thinning=max(1, sampler_settings.thinning_factor * n * n))

    def generator(self):
        return np.random.default_rng(self.seed)

    def __getstate__(self):
        return {'seed': self.seed,
                'method': self.method.value,
                'burn_in': self.burn_in,
                'thinning': self.thinning}

    def __repr__(self):
        return 'SamplerConfig(seed={0}, method={1}, burn_in={2}, thinning={3})'.format(
            self.seed, self.method.value, self.burn_in, self.thinning)


# -----------------------------------------------------------------------------
# Samplers
# -----------------------------------------------------------------------------

class _ChainStatistics:

    method = None

    def __init__(self, event_bus=None):
        self.event_bus = event_bus
        self.proposed = 0
        self.accepted = 0
        self.draws = 0

    @property
    def acceptance_rate(self):
        return self.accepted / self.proposed if self.proposed else 0.0

    def statistics(self):
        return {'proposed': self.proposed,
                'accepted': self.accepted,
                'draws': self.draws,
                'acceptance_rate': self.acceptance_rate}

    def on_finished(self, count):
        publish(self.event_bus, 'SAMPLER.FINISHED', method=self.method,
                count=count, **self.statistics())


class EnumerationSampler(_ChainStatistics, graphs_abcs.GraphSampler):
    """Uniform choice among an explicitly enumerated graph list."""

    def __init__(self, graphs, method=SamplerMethod.EXACT_ENUM, event_bus=None):
        super().__init__(event_bus)
        if not graphs:
            raise Infeasible('no graph realizes the requested degrees')
        self.graphs = list(graphs)
        self.method = SamplerMethod(method).value

    def draw(self, rng):
        self.draws += 1
        self.proposed += 1
        self.accepted += 1
        return self.graphs[int(rng.integers(len(self.graphs)))]


class _EdgeListChain(_ChainStatistics, graphs_abcs.GraphSampler):
    """
    A chain over edge sets kept as an indexable edge list plus a lookup set.
    Subclasses implement ``step``.
    """

    def __init__(self, graph, config, event_bus=None):
        super().__init__(event_bus)
        self.n = graph.n
        self.bipartite = graph.bipartite
        self.config = config
        self.method = config.method.value
        self._edges = list(graph.edges)
        self._position = {edge: i for i, edge in enumerate(self._edges)}
        self._burned = False

    def _has(self, u, v):
        return ((u, v) if u < v else (v, u)) in self._position

    def _add(self, u, v):
        edge = (u, v) if u < v else (v, u)
        self._position[edge] = len(self._edges)
        self._edges.append(edge)

    def _remove(self, u, v):
        edge = (u, v) if u < v else (v, u)
        index = self._position.pop(edge)
        last = self._edges.pop()
        if index < len(self._edges):
            self._edges[index] = last
            self._position[last] = index

    def _two_edges(self, rng):
        m = len(self._edges)
        i = int(rng.integers(m))
        j = int(rng.integers(m - 1))
        if j >= i:
            j += 1
        return self._edges[i], self._edges[j]

    def step(self, rng):
        raise NotImplementedError

    def run(self, steps, rng):
        for _ in range(steps):
            self.proposed += 1
            if self.step(rng):
                self.accepted += 1

    def graph(self):
        return SimpleGraph(self.n, self._edges, bipartite=self.bipartite)

    def draw(self, rng):
        if not self._burned:
            self.run(self.config.burn_in, rng)
            self._burned = True
        else:
            self.run(self.config.thinning, rng)
        self.draws += 1
        return self.graph()


class UniformDegreeSampler(_EdgeListChain):
    """
    The switch chain on graphs with degree sequence D, started from the
    Havel-Hakimi realization.  A move takes two edges on four distinct
    endpoints and replaces them with one of the other two perfect matchings
    of those endpoints, chosen by a fair coin.
    """

    def __init__(self, D, config, event_bus=None):
        if not check_erdos_gallai(D, strict=False).is_graphical:
            raise Infeasible('{0} is not graphical'.format(D))
        super().__init__(havel_hakimi(D), config, event_bus)

    def step(self, rng):
        return _switch(self, rng)


def _switch(chain, rng):
    if len(chain._edges) < 2:
        return False
    (a, b), (c, d) = chain._two_edges(rng)
    if len({a, b, c, d}) < 4:
        return False
    if rng.random() < 0.5:
        first, second = (a, d), (c, b)
    else:
        first, second = (a, c), (b, d)
    if chain._has(*first) or chain._has(*second):
        return False
    chain._remove(a, b)
    chain._remove(c, d)
    chain._add(*first)
    chain._add(*second)
    return True


class AlmostDegreeSampler(_EdgeListChain):
    """
    Uniform sampler on the almost-given class: graphs with
    |d_i(G) - d_i| < d_i^a at every vertex.

    Each step is, with equal probability, a toggle of one uniformly chosen
    vertex pair (accepted when the degrees stay in the box) or a switch move,
    which never changes degrees.  Switches keep the chain moving at
    degree-one vertices, whose box has no slack.
    """

    def __init__(self, D, a, config, settings=None, event_bus=None):
        if not 0.5 < a < 1:
            raise DomainError('a must lie in (1/2, 1), got {0}'.format(a))
        if not check_erdos_gallai(D, strict=False).is_graphical:
            raise Infeasible('{0} is not graphical'.format(D))
        super().__init__(havel_hakimi(D), config, event_bus)
        self.a = a
        boxes = degree_box(D, a)
        self._lo = [lo for lo, _ in boxes]
        self._hi = [hi for _, hi in boxes]
        self._degree = [int(d) for d in _degree_values(D)]

        ones = sum(1 for d in self._degree if d == 1)
        fraction = SamplerSettings(settings).degree_one_warning_fraction
        if self.n and ones / self.n > fraction:
            msg = ('{0} of {1} vertices have degree one; their boxes admit no '
                   'toggles'.format(ones, self.n))
            logger.warning(msg)

    def _toggle(self, rng):
        n = self.n
        if n < 2:
            return False
        u = int(rng.integers(n))
        v = int(rng.integers(n - 1))
        if v >= u:
            v += 1
        degree = self._degree
        if self._has(u, v):
            if degree[u] - 1 < self._lo[u] or degree[v] - 1 < self._lo[v]:
                return False
            self._remove(u, v)
            degree[u] -= 1
            degree[v] -= 1
        else:
            if degree[u] + 1 > self._hi[u] or degree[v] + 1 > self._hi[v]:
                return False
            self._add(u, v)
            degree[u] += 1
            degree[v] += 1
        return True

    def step(self, rng):
        if rng.random() < 0.5:
            return self._toggle(rng)
        return _switch(self, rng)


class BipartiteSwapSampler(_EdgeListChain):
    """
    Checkerboard swaps on bipartite graphs with margins (D1, D2): edges
    <i, j>, <i', j'> with <i, j'>, <i', j> absent become <i, j'>, <i', j>.
    Part A is 0..n1-1 in D1's order, part B is n1..n1+n2-1 in D2's order.
    """

    def __init__(self, D1, D2, config, event_bus=None):
        super().__init__(gale_ryser_realization(D1, D2), config, event_bus)

    def step(self, rng):
        if len(self._edges) < 2:
            return False
        (i, j), (k, l) = self._two_edges(rng)
        if i == k or j == l:
            return False
        if self._has(i, l) or self._has(k, j):
            return False
        self._remove(i, j)
        self._remove(k, l)
        self._add(i, l)
        self._add(k, j)
        return True


def gale_ryser_realization(D1, D2):
    """
    A bipartite graph with the given margins, or Infeasible.  Rows in order
    of decreasing degree take the columns of largest residual degree.
    """
    rows, cols = _degree_values(D1), _degree_values(D2)
    if sum(rows) != sum(cols):
        msg = 'margin totals differ: {0} != {1}'.format(sum(rows), sum(cols))
        raise SumMismatch(msg)
    n1, n2 = len(rows), len(cols)
    residual = list(cols)
    edges = []
    for i in sorted(range(n1), key=lambda x: (-rows[x], x)):
        ranked = sorted((j for j in range(n2) if residual[j] > 0),
                        key=lambda x: (-residual[x], x))
        if len(ranked) < rows[i]:
            msg = 'margins {0} and {1} fail the Gale-Ryser condition'.format(rows, cols)
            raise Infeasible(msg)
        for j in ranked[:rows[i]]:
            residual[j] -= 1
            edges.append((i, n1 + j))
    return SimpleGraph(n1 + n2, edges, bipartite=(n1, n2))


class ReweightedRejectionSampler(_ChainStatistics, graphs_abcs.GraphSampler):
    """
    Exact uniform draws from the almost-given class using the fitted
    independent law: a draw G in the class is kept with probability
    prod_i r_i^(d_i - d_i(G)) divided by the largest value of that product
    over the degree box, which cancels G's probability up to a constant.
    """

    method = SamplerMethod.REWEIGHTED_REJECTION.value

    def __init__(self, D, a, solution=None, settings=None, event_bus=None):
        super().__init__(event_bus)
        sampler_settings = SamplerSettings(settings)
        _check_enumerable(D.n, sampler_settings)
        self.D = D
        self.a = a
        self.solution = solution or solve_max_entropy(D)
        self.max_attempts = sampler_settings.rejection_max_attempts
        theta = self.solution.theta
        degrees = np.asarray(_degree_values(D), dtype=float)
        boxes = np.asarray(degree_box(D, a), dtype=float)
        self._theta = theta
        self._degrees = degrees
        self._log_ceiling = float(np.sum(np.maximum((degrees - boxes[:, 0]) * theta,
                                                    (degrees - boxes[:, 1]) * theta)))

    def draw(self, rng):
        for _ in range(self.max_attempts):
            self.proposed += 1
            graph = sample_bernoulli(self.solution, rng)
            if not membership_ga(graph, self.D, self.a):
                continue
            log_weight = float((self._degrees - graph.degrees) @ self._theta)
            if math.log(rng.random()) < log_weight - self._log_ceiling:
                self.accepted += 1
                self.draws += 1
                return graph
        msg = 'no draw accepted within {0} attempts'.format(self.max_attempts)
        raise NonConvergence(msg, iterations=self.max_attempts)


# -----------------------------------------------------------------------------
# Factories
# -----------------------------------------------------------------------------

def degree_sampler(D, config, settings=None, event_bus=None):
    """A sampler that is uniform on the graphs with degree sequence D."""
    if config.method is SamplerMethod.EXACT_ENUM:
        return EnumerationSampler(enumerate_gd(D, settings), config.method, event_bus)
    if config.method is SamplerMethod.SWITCH_MCMC:
        return UniformDegreeSampler(D, config, event_bus)
    msg = 'method {0} does not sample exact degree sequences'.format(config.method.value)
    raise ValueError(msg)


def almost_degree_sampler(D, a, config, settings=None, event_bus=None):
    """A sampler that is uniform on the almost-given class of D."""
    if config.method is SamplerMethod.TOGGLE_MCMC:
        return AlmostDegreeSampler(D, a, config, settings, event_bus)
    if config.method is SamplerMethod.REJECTION:
        return EnumerationSampler(enumerate_ga(D, a, settings), config.method, event_bus)
    if config.method is SamplerMethod.REWEIGHTED_REJECTION:
        return ReweightedRejectionSampler(D, a, settings=settings, event_bus=event_bus)
    msg = 'method {0} does not sample almost-given degrees'.format(config.method.value)
    raise ValueError(msg)


def _stream(config, rng):
    return config.generator() if rng is None else rng


def sample_uniform_gd(D, config, rng=None, settings=None):
    return degree_sampler(D, config, settings).draw(_stream(config, rng))


def sample_uniform_ga(D, a, config, rng=None, settings=None):
    return almost_degree_sampler(D, a, config, settings).draw(_stream(config, rng))


def sample_bipartite_uniform(D1, D2, config, rng=None):
    return BipartiteSwapSampler(D1, D2, config).draw(_stream(config, rng))


# -----------------------------------------------------------------------------
# Degree-class probability under the fitted law
# -----------------------------------------------------------------------------

IdentityReport = namedtuple('IdentityReport',
                            'graph_count h1 predicted direct empirical sigma n_samples passed')


def conditional_probability_identity_check(D, n_samples, rng, solution=None, sigma=3.0,
                                           batch_size=10000, settings=None):
    """
    Compares |G^D| * exp(-H1) with the frequency at which the fitted
    independent law lands exactly on degree sequence D.

    ``direct`` sums the fitted probabilities of the enumerated graphs; under
    the fitted law every graph with degrees D has probability exp(-H1).
    """
    graphs = enumerate_gd(D, settings)
    solution = solution or solve_max_entropy(D, settings=settings)
    h1 = entropy_h1(solution)
    predicted = len(graphs) * math.exp(-h1)
    direct = math.fsum(math.exp(log_prob_graph(solution, g)) for g in graphs)

    target = np.asarray(_degree_values(D))
    p = solution.pair_probabilities()
    hits = 0
    remaining = int(n_samples)
    while remaining > 0:
        size = min(batch_size, remaining)
        indicators = bernoulli_edge_indicators(solution, size, rng, p=p)
        degrees = indicator_degrees(indicators, solution.n)
        hits += int(np.sum(np.all(degrees == target, axis=1)))
        remaining -= size

    empirical = hits / n_samples
    spread = binomial_sigma(predicted, n_samples)
    passed = abs(empirical - predicted) <= sigma * spread + 1.0 / n_samples
    return IdentityReport(len(graphs), h1, predicted, direct, empirical, spread,
                          int(n_samples), passed)
