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
Lower-tail concentration for weighted sums of monotone edge-indicator
products, S = sum_alpha 1_alpha / omega_alpha, over independent-edge laws,
and the Monte-Carlo checks built on it.
"""
from collections import namedtuple
import logging
import math

import numpy as np
from scipy.special import xlogy

from entropygraph.core import (
    DomainError,
    EmptyFamily,
    SizeGuard,
    StatsSettings,
    bernoulli_edge_indicators,
    binomial_sigma,
    bipartite_admissible,
    build_crossing_tree,
    graphs_abcs,
    indicator_degrees,
    iter_tree_images,
    log_psi,
    pair_position,
    reference_degrees,
    small_degree_set,
    solve_max_entropy,
)

logger = logging.getLogger(__name__)


class ConcentrationFamily:
    """
    Members alpha, each an edge subset Q(alpha) with weight omega_alpha > 0
    and a multiplicity counting identical copies (ordered trees sharing one
    image), over the edges of an independent-edge model.
    """

    def __init__(self, model, members, weights, multiplicity=None):
        if not isinstance(model, graphs_abcs.BernoulliModel):
            msg = 'concentration families need an independent-edge model, got {0!r}'.format(
                model)
            raise TypeError(msg)
        members = [tuple(sorted({pair_position(u, v, model.n) for u, v in member}))
                   for member in members]
        if not members:
            raise EmptyFamily('the family has no members')
        if any(len(member) == 0 for member in members):
            raise EmptyFamily('every member needs at least one edge')
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (len(members),) or np.any(weights <= 0):
            raise DomainError('weights must be positive, one per member')
        if multiplicity is None:
            multiplicity = np.ones(len(members))
        multiplicity = np.asarray(multiplicity, dtype=float)

        self.model = model
        self.members = members
        self.weights = weights
        self.multiplicity = multiplicity

    def __len__(self):
        return len(self.members)

    def coefficients(self):
        """multiplicity / omega per member"""
        return self.multiplicity / self.weights

    def member_probabilities(self, p=None):
        p = self.model.pair_probabilities() if p is None else p
        return np.array([float(np.prod(p[list(member)])) for member in self.members])

    def evaluate(self, indicators):
        """
        S for each row of a (draws, pairs) boolean indicator batch.
        """
        coefficients = self.coefficients()
        total = np.zeros(len(indicators))
        by_size = {}
        for index, member in enumerate(self.members):
            by_size.setdefault(len(member), []).append(index)
        for indices in by_size.values():
            table = np.array([self.members[i] for i in indices])
            present = np.all(indicators[:, table], axis=2)
            total += present @ coefficients[indices]
        return total

    def __repr__(self):
        return 'ConcentrationFamily(members={0}, model={1!r})'.format(len(self), self.model)


def edge_family(model, weight=1.0):
    """Every supported pair as a singleton member: S counts edges / weight."""
    p = model.pair_probabilities()
    n = model.n
    rows, cols = np.triu_indices(n, k=1)
    support = np.flatnonzero(p > 0) if model.support == 'bipartite' else np.arange(len(p))
    members = [((int(rows[i]), int(cols[i])),) for i in support]
    return ConcentrationFamily(model, members, np.full(len(members), float(weight)))


def tree_family(model, D, k, budget=None, settings=None):
    """
    All placed k-trees with omega = M * psi(s, T, D).  Each tree image is one
    member standing for its k! ordered trees; images the model cannot
    produce are left out.
    """
    budget = StatsSettings(settings).placement_budget if budget is None else budget
    n = model.n
    images = math.comb(n, k) * k ** (k - 2)
    if images > budget:
        msg = '{0} tree images exceed the family budget of {1}'.format(images, budget)
        raise SizeGuard(msg, estimate=images, budget=budget)
    degrees, total, side = reference_degrees(D)
    if side is None and model.support == 'bipartite':
        n1 = model.bipartite[0]
        side = (lambda v: 0 if v < n1 else 1)
    p = model.pair_probabilities()
    members = []
    weights = []
    for ot in iter_tree_images(k, n):
        if side is not None and not bipartite_admissible(ot, side):
            continue
        if any(p[pair_position(u, v, n)] == 0 for u, v in ot.image_edges):
            continue
        members.append(ot.image_edges)
        weights.append(total * math.exp(log_psi(ot, degrees)))
    multiplicity = np.full(len(members), float(math.factorial(k)))
    return ConcentrationFamily(model, members, weights, multiplicity)


# -----------------------------------------------------------------------------
# lambda, delta_1, delta_2 and the bounds
# -----------------------------------------------------------------------------

JansonParameters = namedtuple('JansonParameters', 'lam delta1 delta2')


def janson_parameters(fam, model=None):
    """
    lam = E[S]; delta1 = (1/lam) sum m p / omega^2; delta2 = (1/lam) times
    the sum over ordered pairs alpha != beta sharing an edge of
    E[1_alpha 1_beta] / (omega_alpha omega_beta), the joint expectation being
    the product over the union of both edge sets.
    """
    model = fam.model if model is None else model
    p = model.pair_probabilities()
    p_alpha = fam.member_probabilities(p)
    coefficients = fam.coefficients()
    lam = float(np.sum(coefficients * p_alpha))
    if lam <= 0:
        raise EmptyFamily('the family has zero mean under {0!r}'.format(model))
    delta1 = float(np.sum(fam.multiplicity * p_alpha / fam.weights ** 2)) / lam

    index = {}
    for alpha, member in enumerate(fam.members):
        for pair in member:
            index.setdefault(pair, []).append(alpha)

    overlap = 0.0
    for alpha, member in enumerate(fam.members):
        m_alpha = fam.multiplicity[alpha]
        inv_alpha = 1.0 / fam.weights[alpha]
        # copies of alpha itself overlap in every edge
        overlap += m_alpha * (m_alpha - 1) * p_alpha[alpha] * inv_alpha * inv_alpha
        partners = {beta for pair in member for beta in index[pair]}
        partners.discard(alpha)
        own = set(member)
        for beta in sorted(partners):
            union = own.union(fam.members[beta])
            joint = float(np.prod(p[list(union)]))
            overlap += m_alpha * fam.multiplicity[beta] * joint * inv_alpha / fam.weights[beta]
    return JansonParameters(lam, delta1, overlap / lam)


def _check_janson(lam, delta1, delta2):
    if lam <= 0 or delta1 + delta2 <= 0:
        msg = 'need lam > 0 and delta1 + delta2 > 0, got {0}, {1}, {2}'.format(
            lam, delta1, delta2)
        raise DomainError(msg)


def janson_bound(lam, delta1, delta2, epsilon):
    """
    P(S <= (1 - eps) lam) <= exp(-lam / (delta1 + delta2) * phi(eps)) with
    phi(eps) = eps + (1 - eps) log(1 - eps) and phi(1) = 1.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError('epsilon must lie in [0, 1], got {0}'.format(epsilon))
    _check_janson(lam, delta1, delta2)
    phi = epsilon + float(xlogy(1.0 - epsilon, 1.0 - epsilon))
    return math.exp(-lam / (delta1 + delta2) * phi)


def janson_mgf_bound(lam, delta1, delta2, t):
    """E[exp(-tS)] <= exp(-lam / delta * (1 - exp(-delta t))), delta = delta1 + delta2"""
    if t < 0:
        raise DomainError('t must be non-negative, got {0}'.format(t))
    _check_janson(lam, delta1, delta2)
    delta = delta1 + delta2
    return math.exp(lam / delta * math.expm1(-delta * t))


def chernoff_bound(mu, delta):
    """exp(-mu delta^2 / (2 + delta)), used for both binomial tails"""
    if mu < 0 or delta <= 0:
        raise DomainError('need mu >= 0 and delta > 0, got {0}, {1}'.format(mu, delta))
    return math.exp(-mu * delta * delta / (2.0 + delta))


# -----------------------------------------------------------------------------
# Monte-Carlo checks
# -----------------------------------------------------------------------------

LowerTailEstimate = namedtuple('LowerTailEstimate', 'lam delta1 delta2 epsilon bound empirical '
                                                    'stderr reps passed')

MGFEstimate = namedtuple('MGFEstimate', 't empirical bound stderr reps passed')


def _draw_sums(fam, model, reps, rng, batch_size):
    p = model.pair_probabilities()
    sums = []
    remaining = reps
    while remaining > 0:
        size = min(batch_size, remaining)
        indicators = bernoulli_edge_indicators(model, size, rng, p=p)
        sums.append(fam.evaluate(indicators))
        remaining -= size
    return np.concatenate(sums)


def empirical_lower_tail(fam, model, epsilon, reps, rng, settings=None):
    """
    Empirical P(S <= (1 - eps) lam) over ``reps`` draws of the model
    against the bound; the check passes when the frequency stays within
    sigma binomial standard errors (plus one draw) of the bound.
    """
    stats_settings = StatsSettings(settings)
    if reps < stats_settings.min_reps:
        msg = 'need at least {0} repetitions, got {1}'.format(stats_settings.min_reps, reps)
        raise DomainError(msg)
    params = janson_parameters(fam, model)
    bound = janson_bound(params.lam, params.delta1, params.delta2, epsilon)
    sums = _draw_sums(fam, model, reps, rng, stats_settings.batch_size)
    empirical = float(np.mean(sums <= (1.0 - epsilon) * params.lam))
    stderr = binomial_sigma(bound, reps) + 1.0 / reps
    passed = empirical <= bound + stats_settings.sigma * stderr
    return LowerTailEstimate(params.lam, params.delta1, params.delta2, epsilon, bound,
                             empirical, stderr, reps, passed)


def empirical_mgf(fam, model, t, reps, rng, settings=None):
    """Empirical E[exp(-tS)] against janson_mgf_bound."""
    stats_settings = StatsSettings(settings)
    params = janson_parameters(fam, model)
    bound = janson_mgf_bound(params.lam, params.delta1, params.delta2, t)
    values = np.exp(-t * _draw_sums(fam, model, reps, rng, stats_settings.batch_size))
    empirical = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    passed = empirical <= bound + stats_settings.sigma * stderr
    return MGFEstimate(t, empirical, bound, stderr, reps, passed)


class DeltaBoundsReport(namedtuple('DeltaBoundsReport', 'k total lam delta1 delta2 '
                                                        'delta1_bound delta2_bound constant')):
    __slots__ = ()

    @property
    def delta1_passed(self):
        return self.delta1 <= self.delta1_bound * (1.0 + 1e-12)

    @property
    def delta2_passed(self):
        return self.delta2 <= self.delta2_bound

    @property
    def passed(self):
        return self.delta1_passed and self.delta2_passed


def wedge_overcount_constant(k):
    """2^(2(k-1)(2k-3)) * ((2k-2)!)^2 * (k-1)"""
    return 2 ** (2 * (k - 1) * (2 * k - 3)) * math.factorial(2 * k - 2) ** 2 * (k - 1)


def delta_bounds_check(D, solution, k, settings=None):
    """
    Exact delta1 and delta2 of the full placed k-tree family with
    omega = M * psi against 1/M and C_k/M.
    """
    if k > 4:
        raise SizeGuard('delta bounds are checked for k <= 4, got {0}'.format(k),
                        estimate=k, budget=4)
    fam = tree_family(solution, D, k, settings=settings)
    params = janson_parameters(fam)
    constant = wedge_overcount_constant(k)
    total = reference_degrees(D)[1]
    return DeltaBoundsReport(k, total, params.lam, params.delta1, params.delta2,
                             1.0 / total, constant / total, constant)


# -----------------------------------------------------------------------------
# Lower-bound pipeline
# -----------------------------------------------------------------------------

class PipelineReport(namedtuple('PipelineReport',
                                'n a alpha A J crossing_edges reps membership_frequency '
                                'membership_stderr e_frequencies e_bounds f_frequencies '
                                'f_bounds events_frequency d_to_a sigma')):
    """
    ``e_*`` are indexed by J, ``f_*`` by B minus J (both as listed in the
    ``J`` field and its complement).  ``d_to_a`` holds D(j, A) for j in A.
    """
    __slots__ = ()

    def _meets(self, frequencies, bounds):
        clipped = np.clip(bounds, 0.0, 1.0)
        slack = self.sigma * np.sqrt(clipped * (1 - clipped) / self.reps) + 1.0 / self.reps
        return bool(np.all(frequencies >= bounds - slack))

    @property
    def e_passed(self):
        return self._meets(self.e_frequencies, self.e_bounds)

    @property
    def f_passed(self):
        return self._meets(self.f_frequencies, self.f_bounds)

    @property
    def d_to_a_passed(self):
        return bool(np.all(self.d_to_a < 0.25))

    @property
    def target_met(self):
        """The large-n claim: membership frequency at least 1/2."""
        return self.membership_frequency >= 0.5


def lower_bound_pipeline(D, a, reps, rng, solution=None, alpha=None, settings=None):
    """
    Joins the rounded crossing graph between the small-degree set A and its
    complement B with independent draws on the pairs inside B, and reports
    how often the union lands in the almost-given class (slack 2 d_i^a),
    together with the per-vertex events behind that claim.

    :param alpha: small-degree threshold exponent; defaults to 10 / (a - 1/2)
    """
    if not 0.5 < a < 1:
        raise DomainError('a must lie in (1/2, 1), got {0}'.format(a))
    stats_settings = StatsSettings(settings)
    if solution is None:
        solution = solve_max_entropy(D, settings=settings)
    a1 = a - 0.5
    alpha = 10.0 / a1 if alpha is None else alpha
    n = D.n
    A = small_degree_set(D, alpha)
    in_a = np.zeros(n, dtype=bool)
    in_a[list(A)] = True
    B = np.flatnonzero(~in_a)

    crossing = build_crossing_tree(solution, A, settings) if len(A) else None
    crossing_degrees = (crossing.graph.degrees if crossing is not None
                        else np.zeros(n, dtype=np.int64))

    p = solution.pair_probabilities().copy()
    rows, cols = np.triu_indices(n, k=1)
    p[in_a[rows] | in_a[cols]] = 0.0

    d_to_b = np.array([float(solution.row(j)[B].sum()) for j in range(n)])
    d_to_a = np.array([float(solution.row(j)[list(A)].sum()) for j in A])
    log_n = math.log(n)
    in_j = (~in_a) & (d_to_b >= log_n ** (1.0 / a1))
    J = np.flatnonzero(in_j)
    not_j = np.flatnonzero((~in_a) & ~in_j)

    degrees = D.degrees.astype(float)
    slack = 2.0 * degrees ** a
    inside = 0
    e_hits = np.zeros(len(J))
    f_hits = np.zeros(len(not_j))
    events = 0
    remaining = reps
    while remaining > 0:
        size = min(stats_settings.batch_size, remaining)
        indicators = bernoulli_edge_indicators(solution, size, rng, p=p)
        within_b = indicator_degrees(indicators, n)
        total = within_b + crossing_degrees
        inside += int(np.sum(np.all(np.abs(total - degrees) < slack, axis=1)))
        e_ok = np.abs(within_b[:, J] - d_to_b[J]) <= d_to_b[J] ** a
        f_ok = within_b[:, not_j] <= (2.0 * log_n ** 2 + 1.0) * d_to_b[not_j]
        e_hits += e_ok.sum(axis=0)
        f_hits += f_ok.sum(axis=0)
        events += int(np.sum(np.all(e_ok, axis=1) & np.all(f_ok, axis=1)))
        remaining -= size

    frequency = inside / reps
    e_bounds = 1.0 - 2.0 * np.exp(-(d_to_b[J] ** (2 * a1)) / 3.0)
    f_bounds = 1.0 - np.exp(-(log_n ** 2) * d_to_b[not_j])
    report = PipelineReport(n, a, alpha, tuple(A), tuple(J.tolist()),
                            crossing.graph.edge_count if crossing is not None else 0,
                            reps, frequency, binomial_sigma(frequency, reps),
                            e_hits / reps, e_bounds, f_hits / reps, f_bounds,
                            events / reps, d_to_a, stats_settings.sigma)
    if not report.target_met:
        logger.info('membership frequency {0:.3f} below 1/2 at n={1}; the claim is '
                    'asymptotic'.format(frequency, n))
    return report
