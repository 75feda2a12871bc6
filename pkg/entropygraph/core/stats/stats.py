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
Placed-tree probabilities under the random-graph laws, the 1/psi-weighted
discrepancy between two laws and the normalised tree totals.
"""
from collections import namedtuple
import logging
import math

import numpy as np

from entropygraph.core import (
    DomainError,
    OrderedTree,
    SizeGuard,
    StatsSettings,
    binomial_sigma,
    bipartite_admissible,
    enumerate_bipartite,
    enumerate_ga,
    enumerate_gd,
    iter_tree_images,
    log_psi,
    normalized_tree_total,
    sample_bernoulli,
    stats_abcs,
    tree_shapes,
    z_discrepancy,
)

logger = logging.getLogger(__name__)

MONTE_CARLO_NOTE = ('absolute differences of noisy estimates are biased upward; '
                    'treat monte_carlo values as upper estimates')


class TreeProbEstimate(namedtuple('TreeProbEstimate', 'value stderr n_samples exact')):
    __slots__ = ()

    def interval(self, sigma=3.0):
        """value +/- sigma * stderr clamped to [0, 1]"""
        return (max(0.0, self.value - sigma * self.stderr),
                min(1.0, self.value + sigma * self.stderr))


# -----------------------------------------------------------------------------
# Laws
# -----------------------------------------------------------------------------

class IndependentEdgeLaw(stats_abcs.TreeLaw):
    """Any BernoulliModel: a placed tree's probability is an edge product."""

    def __init__(self, model, name='tilde'):
        self.model = model
        self.name = name
        self._p = model.pair_probabilities()

    @property
    def n(self):
        return self.model.n

    def edge_set_probability(self, edges):
        n = self.n
        value = 1.0
        for u, v in edges:
            value *= self._p[u * n - u * (u + 1) // 2 + (v - u - 1)]
        return float(value), 0.0

    def sample_graphs(self, count, rng):
        return [sample_bernoulli(self.model, rng) for _ in range(count)]


class _GraphListLaw(stats_abcs.TreeLaw):

    def __init__(self, graphs, name):
        if not graphs:
            raise DomainError('a graph law needs at least one graph')
        self.graphs = list(graphs)
        self.name = name
        self._edge_sets = [g.edge_set for g in self.graphs]

    @property
    def n(self):
        return self.graphs[0].n

    def _frequency(self, edges):
        edges = frozenset(edges)
        hits = sum(1 for edge_set in self._edge_sets if edges <= edge_set)
        return hits / len(self._edge_sets)


class EnumeratedLaw(_GraphListLaw):
    """The uniform law on an explicitly enumerated graph class."""

    @classmethod
    def given_degrees(cls, D, settings=None):
        if isinstance(D, tuple):
            return cls(enumerate_bipartite(D[0], D[1], settings), 'uniform_bipartite')
        return cls(enumerate_gd(D, settings), 'uniform')

    @classmethod
    def almost_given_degrees(cls, D, a, settings=None):
        return cls(enumerate_ga(D, a, settings), 'almost_uniform')

    def edge_set_probability(self, edges):
        return self._frequency(edges), 0.0

    def sample_graphs(self, count, rng):
        picks = rng.integers(len(self.graphs), size=count)
        return [self.graphs[int(i)] for i in picks]


class SampledLaw(_GraphListLaw):
    """
    The empirical law of ``n_samples`` draws of a GraphSampler; probabilities
    carry a binomial standard error.
    """

    exact = False

    def __init__(self, sampler, n_samples, rng, name='sampled'):
        super().__init__(list(sampler.samples(n_samples, rng)), name)

    def edge_set_probability(self, edges):
        value = self._frequency(edges)
        return value, binomial_sigma(value, len(self.graphs))

    def sample_graphs(self, count, rng):
        return [self.graphs[i % len(self.graphs)] for i in range(count)]


# -----------------------------------------------------------------------------
# Placed-tree probabilities
# -----------------------------------------------------------------------------

def exact_tree_prob_tilde(model, ot):
    """Product of the model's edge probabilities over the placed edges."""
    value = 1.0
    for u, v in ot.image_edges:
        value *= model.probability(u, v)
    return TreeProbEstimate(value, 0.0, 0, True)


def estimate_tree_prob(sampler, ot, n_samples, rng, settings=None):
    """
    Frequency of the placed edges all being present among ``n_samples``
    draws of the sampler.
    """
    minimum = StatsSettings(settings).min_samples
    if n_samples < minimum:
        msg = 'need at least {0} samples, got {1}'.format(minimum, n_samples)
        raise DomainError(msg)
    edges = tuple(ot.image_edges)
    hits = 0
    for graph in sampler.samples(n_samples, rng):
        if all(graph.has_edge(u, v) for u, v in edges):
            hits += 1
    value = hits / n_samples
    return TreeProbEstimate(value, binomial_sigma(value, n_samples), n_samples, False)


def exact_tree_prob_uniform(D, ot, settings=None):
    """Fraction of the graphs with degree sequence D containing the tree."""
    law = EnumeratedLaw.given_degrees(D, settings)
    value, _ = law.edge_set_probability(ot.image_edges)
    return TreeProbEstimate(value, 0.0, len(law.graphs), True)


# -----------------------------------------------------------------------------
# Weighted L statistic
# -----------------------------------------------------------------------------

class LReport(namedtuple('LReport', 'which value mode components signed_total stderr '
                                    'placements exhausted note')):
    """
    ``components`` maps a tree shape (canonical form) to its share of
    ``value``; ``placements`` counts the placed trees evaluated.
    """
    __slots__ = ()


def reference_degrees(D):
    """
    :returns: (degree vector, total M, side function or None)
    """
    if isinstance(D, tuple):
        d1, d2 = (np.asarray(list(part), dtype=np.int64) for part in D)
        degrees = np.concatenate((d1, d2))
        n1 = len(d1)
        return degrees, int(degrees.sum()), (lambda v: 0 if v < n1 else 1)
    return D.degrees, D.total, None


def _image_count(n, k):
    return math.comb(n, k) * k ** (k - 2)


def weighted_l_statistic(D, k, law_pair, mode='exact_tiny', budget=None, rng=None,
                         which='L_a', settings=None, signed_graphs=20):
    """
    (1/M) * sum over placed k-trees of |p1 - p2| / psi(s, T, D).

    :param D: a DegreeSequence, or a (D1, D2) pair restricting the sum to
              placements whose edges all cross the two parts
    :param law_pair: two TreeLaw instances on the same vertex set
    :param mode: 'exact_tiny' (every placement) or 'monte_carlo' (``budget``
                 uniformly drawn placements per tree shape)
    """
    first, second = law_pair
    degrees, total, side = reference_degrees(D)
    n = len(degrees)
    if first.n != n or second.n != n:
        raise ValueError('laws and degree sequence disagree on the vertex count')
    stats_settings = StatsSettings(settings)
    budget = stats_settings.placement_budget if budget is None else int(budget)

    if mode == 'exact_tiny':
        return _exact_l(degrees, total, side, k, first, second, which, budget)
    if mode == 'monte_carlo':
        if rng is None:
            raise ValueError('monte_carlo mode needs a random generator')
        return _monte_carlo_l(degrees, total, side, k, first, second, which, budget,
                              rng, signed_graphs)
    raise ValueError('unknown mode {0!r}'.format(mode))


def _exact_l(degrees, total, side, k, first, second, which, budget):
    n = len(degrees)
    images = _image_count(n, k)
    if images > budget:
        msg = '{0} tree images exceed the exact budget of {1}'.format(images, budget)
        raise SizeGuard(msg, estimate=images, budget=budget)

    multiplicity = math.factorial(k)
    components = {}
    signed = []
    absolute = []
    variance = 0.0
    evaluated = 0
    for ot in iter_tree_images(k, n):
        if side is not None and not bipartite_admissible(ot, side):
            continue
        evaluated += 1
        p1, s1 = first.edge_set_probability(ot.image_edges)
        p2, s2 = second.edge_set_probability(ot.image_edges)
        if p1 == 0.0 and p2 == 0.0:
            continue
        weight = multiplicity * math.exp(-log_psi(ot, degrees)) / total
        gap = weight * abs(p1 - p2)
        absolute.append(gap)
        signed.append(weight * (p1 - p2))
        variance += (weight * weight) * (s1 * s1 + s2 * s2)
        form = ot.tree.canonical_form()
        components[form] = components.get(form, 0.0) + gap

    value = math.fsum(absolute)
    return LReport(which, value, 'exact_tiny', components, math.fsum(signed),
                   math.sqrt(variance), evaluated * multiplicity, False,
                   '' if first.exact and second.exact else MONTE_CARLO_NOTE)


def _random_placement(n, k, rng):
    """Sequential draw of k distinct vertices, redrawing repeats."""
    chosen = []
    while len(chosen) < k:
        v = int(rng.integers(n))
        if v not in chosen:
            chosen.append(v)
    return tuple(chosen)


def _monte_carlo_l(degrees, total, side, k, first, second, which, budget, rng,
                   signed_graphs):
    n = len(degrees)
    population = math.perm(n, k)
    components = {}
    value = 0.0
    variance = 0.0
    for tree, count in tree_shapes(k):
        gaps = np.zeros(budget)
        for index in range(budget):
            ot = OrderedTree(tree, _random_placement(n, k, rng))
            if side is not None and not bipartite_admissible(ot, side):
                continue
            p1, _ = first.edge_set_probability(ot.image_edges)
            p2, _ = second.edge_set_probability(ot.image_edges)
            if p1 != p2:
                gaps[index] = abs(p1 - p2) * math.exp(-log_psi(ot, degrees)) / total
        scale = count * population
        share = scale * float(gaps.mean())
        components[tree.canonical_form()] = share
        value += share
        if budget > 1:
            variance += (scale ** 2) * float(gaps.var(ddof=1)) / budget

    signed = (_mean_tree_total(first, k, degrees, total, signed_graphs, rng) -
              _mean_tree_total(second, k, degrees, total, signed_graphs, rng))
    exhausted = budget >= population
    return LReport(which, value, 'monte_carlo', components, signed, math.sqrt(variance),
                   budget * len(tree_shapes(k)), exhausted, MONTE_CARLO_NOTE)


def _mean_tree_total(law, k, degrees, total, count, rng):
    graphs = law.sample_graphs(count, rng)
    values = [normalized_tree_total(g, k, degrees_for_psi=degrees, total=total)
              if g.edge_count else 0.0 for g in graphs]
    return float(np.mean(values))


# -----------------------------------------------------------------------------
# Total sums
# -----------------------------------------------------------------------------

class TotalSumReport(namedtuple('TotalSumReport', 'k n total estimate stderr target '
                                                  'deviation z_mean band_lower band_upper '
                                                  'values')):
    """
    The sample mean of the reference-weighted tree totals against k^(k-2),
    with the band implied by the F bounds widened by the psi substitution
    error z_mean / M.
    """
    __slots__ = ()

    @property
    def within_upper(self):
        return self.estimate <= self.band_upper + 1e-9

    @property
    def within_band(self):
        return self.band_lower - 1e-9 <= self.estimate <= self.band_upper + 1e-9


def _z_total(graph, k, reference):
    return math.fsum(count * z_discrepancy(tree, graph, reference)
                     for tree, count in tree_shapes(k))


def total_sum_check(sampler, D, k, n_graphs, rng):
    """
    Averages normalized_tree_total with psi taken from the reference D over
    ``n_graphs`` draws of the sampler.
    """
    if not 2 <= k <= 6:
        raise SizeGuard('total sums need 2 <= k <= 6, got {0}'.format(k),
                        estimate=k, budget=6)
    degrees, total = D.degrees, D.total
    values = []
    z_values = []
    for graph in sampler.samples(n_graphs, rng):
        if graph.edge_count == 0:
            values.append(0.0)
            z_values.append(0.0)
            continue
        values.append(normalized_tree_total(graph, k, degrees_for_psi=degrees, total=total))
        z_values.append(_z_total(graph, k, degrees) if k > 2 else 0.0)

    values = np.asarray(values)
    estimate = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
    target = float(k ** (k - 2))
    z_mean = float(np.mean(z_values))
    lower = target * (1.0 - D.n * k * (k - 1) / (2.0 * total)) - z_mean / total
    upper = target + z_mean / total
    return TotalSumReport(k, D.n, total, estimate, stderr, target, abs(estimate - target),
                          z_mean, lower, upper, tuple(values.tolist()))


def exact_tree_total(model, D, k, budget=None, settings=None):
    """
    (1/M) * sum over placed k-trees of p(s, T) / psi(s, T, D) for an
    independent-edge model, by enumerating every tree image.
    """
    budget = StatsSettings(settings).placement_budget if budget is None else budget
    degrees, total, side = reference_degrees(D)
    n = len(degrees)
    images = _image_count(n, k)
    if images > budget:
        msg = '{0} tree images exceed the budget of {1}'.format(images, budget)
        raise SizeGuard(msg, estimate=images, budget=budget)
    law = IndependentEdgeLaw(model)
    terms = []
    for ot in iter_tree_images(k, n):
        if side is not None and not bipartite_admissible(ot, side):
            continue
        p, _ = law.edge_set_probability(ot.image_edges)
        if p:
            terms.append(p * math.exp(-log_psi(ot, degrees)))
    return math.factorial(k) * math.fsum(terms) / total
