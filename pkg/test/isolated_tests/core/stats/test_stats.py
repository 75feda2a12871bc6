"""
Worked values on the four-cycle degrees (2, 2, 2, 2): the fitted law puts
2/3 on every pair, and the three 4-cycles each hold a given edge with
frequency 2/3 and a given 2-path with frequency 1/3.
"""
import math

import pytest

from entropygraph.core import (
    DegreeSequence,
    DomainError,
    EnumeratedLaw,
    EnumerationSampler,
    IndependentEdgeLaw,
    OrderedTree,
    SampledLaw,
    SizeGuard,
    TreeProbEstimate,
    enumerate_gd,
    estimate_tree_prob,
    exact_tree_prob_tilde,
    exact_tree_prob_uniform,
    exact_tree_total,
    reference_degrees,
    solve_bipartite_max_entropy,
    total_sum_check,
    weighted_l_statistic,
)


@pytest.fixture(scope='function')
def cycle_sampler(cycle_degrees):
    return EnumerationSampler(enumerate_gd(cycle_degrees))


@pytest.fixture(scope='function')
def placed_path(path3):
    return OrderedTree(path3, (0, 1, 2))

# -----------------------------------------------------------------------------
# Placed-tree probabilities
# -----------------------------------------------------------------------------


def test_tree_prob_interval_is_clamped():
    assert TreeProbEstimate(0.1, 0.1, 10, False).interval() == pytest.approx((0.0, 0.4))
    assert TreeProbEstimate(0.95, 0.1, 10, False).interval(sigma=1.0) == pytest.approx((0.85, 1.0))


def test_exact_tree_probabilities(cycle_solution, cycle_degrees, placed_path):
    tilde = exact_tree_prob_tilde(cycle_solution, placed_path)
    assert tilde.exact
    assert math.isclose(tilde.value, 4 / 9, rel_tol=1e-8)

    uniform = exact_tree_prob_uniform(cycle_degrees, placed_path)
    assert uniform == TreeProbEstimate(1 / 3, 0.0, 3, True)


def test_estimate_tree_prob(cycle_sampler, placed_path, rng):
    estimate = estimate_tree_prob(cycle_sampler, placed_path, 3000, rng)
    assert not estimate.exact
    assert estimate.n_samples == 3000
    assert abs(estimate.value - 1 / 3) <= 4 * estimate.stderr


def test_estimate_tree_prob_needs_samples(cycle_sampler, placed_path, rng):
    with pytest.raises(DomainError):
        estimate_tree_prob(cycle_sampler, placed_path, 10, rng)

# -----------------------------------------------------------------------------
# Laws
# -----------------------------------------------------------------------------


def test_enumerated_law_names(cycle_degrees):
    assert EnumeratedLaw.given_degrees(cycle_degrees).name == 'uniform'
    bipartite = EnumeratedLaw.given_degrees((DegreeSequence([1, 1]), DegreeSequence([1, 1])))
    assert bipartite.name == 'uniform_bipartite'
    assert len(bipartite.graphs) == 2
    assert EnumeratedLaw.almost_given_degrees(cycle_degrees, 0.75).name == 'almost_uniform'


def test_empty_law_is_rejected():
    with pytest.raises(DomainError):
        EnumeratedLaw([], 'uniform')


def test_sampled_law_carries_errors(cycle_sampler, rng):
    law = SampledLaw(cycle_sampler, 300, rng)
    assert not law.exact
    value, stderr = law.edge_set_probability([(0, 1)])
    assert 0 < value < 1
    assert stderr > 0


def test_reference_degrees_of_a_pair():
    degrees, total, side = reference_degrees((DegreeSequence([1, 2]), DegreeSequence([1, 2])))
    assert degrees.tolist() == [1, 2, 1, 2]
    assert total == 6
    assert (side(1), side(2)) == (0, 1)

# -----------------------------------------------------------------------------
# Weighted L statistic
# -----------------------------------------------------------------------------


def test_l_of_a_law_with_itself_is_zero(cycle_degrees, tilde_law):
    report = weighted_l_statistic(cycle_degrees, 3, (tilde_law, tilde_law))
    assert report.value == 0.0
    assert report.placements == 72
    assert report.mode == 'exact_tiny'
    assert report.note == ''


def test_l_g_vanishes_on_edges(cycle_degrees, tilde_law, uniform_law):
    report = weighted_l_statistic(cycle_degrees, 2, (tilde_law, uniform_law), which='L_g')
    assert report.which == 'L_g'
    assert report.value < 1e-8


def test_l_g_on_paths(cycle_degrees, tilde_law, uniform_law):
    """
    12 path images, each weighted 3! / (psi M) = 3/8 with gap 4/9 - 1/3
    """
    report = weighted_l_statistic(cycle_degrees, 3, (tilde_law, uniform_law))
    assert math.isclose(report.value, 0.5, rel_tol=1e-8)
    assert math.isclose(report.signed_total, 0.5, rel_tol=1e-8)
    assert len(report.components) == 1
    assert math.isclose(sum(report.components.values()), report.value)


def test_monte_carlo_l_on_paths(cycle_degrees, tilde_law, uniform_law, rng):
    report = weighted_l_statistic(cycle_degrees, 3, (tilde_law, uniform_law),
                                  mode='monte_carlo', budget=30, rng=rng, signed_graphs=5)
    assert report.mode == 'monte_carlo'
    assert report.exhausted
    assert math.isclose(report.value, 0.5, rel_tol=1e-8)
    assert report.stderr < 1e-8
    assert report.note


def test_l_b_vanishes_on_the_square():
    D1, D2 = DegreeSequence([1, 1]), DegreeSequence([1, 1])
    tilde = IndependentEdgeLaw(solve_bipartite_max_entropy(D1, D2))
    uniform = EnumeratedLaw.given_degrees((D1, D2))
    report = weighted_l_statistic((D1, D2), 2, (tilde, uniform), which='L_b')
    assert report.placements == 4 * 2
    assert report.value < 1e-8


def test_l_statistic_arguments(cycle_degrees, tilde_law, mixed_degrees):
    with pytest.raises(ValueError):
        weighted_l_statistic(mixed_degrees, 2, (tilde_law, tilde_law))
    with pytest.raises(ValueError):
        weighted_l_statistic(cycle_degrees, 2, (tilde_law, tilde_law), mode='guess')
    with pytest.raises(ValueError):
        weighted_l_statistic(cycle_degrees, 2, (tilde_law, tilde_law), mode='monte_carlo')
    with pytest.raises(SizeGuard):
        weighted_l_statistic(cycle_degrees, 3, (tilde_law, tilde_law), budget=5)

# -----------------------------------------------------------------------------
# Totals
# -----------------------------------------------------------------------------


def test_total_sum_at_k2_is_one(cycle_sampler, cycle_degrees, rng):
    report = total_sum_check(cycle_sampler, cycle_degrees, 2, 10, rng)
    assert report.estimate == 1.0
    assert report.target == 1.0
    assert report.deviation == 0.0
    assert report.band_lower == 0.5
    assert report.within_band


def test_total_sum_at_k3(cycle_sampler, cycle_degrees, rng):
    report = total_sum_check(cycle_sampler, cycle_degrees, 3, 5, rng)
    assert report.estimate == 1.5
    assert report.target == 3.0
    assert report.z_mean == 0.0
    assert report.within_upper
    assert report.within_band


@pytest.mark.parametrize('k', [1, 7])
def test_total_sum_size_guard(cycle_sampler, cycle_degrees, rng, k):
    with pytest.raises(SizeGuard):
        total_sum_check(cycle_sampler, cycle_degrees, k, 5, rng)


def test_exact_tree_total(cycle_solution, cycle_degrees):
    assert math.isclose(exact_tree_total(cycle_solution, cycle_degrees, 2), 1.0, rel_tol=1e-8)
    assert math.isclose(exact_tree_total(cycle_solution, cycle_degrees, 3), 2.0, rel_tol=1e-8)
    with pytest.raises(SizeGuard):
        exact_tree_total(cycle_solution, cycle_degrees, 3, budget=1)
