import math

import numpy as np
import pytest

from entropygraph.core import (
    BoundaryOptimum,
    DegreeSequence,
    DomainError,
    MaxEntropySolution,
    MaxEntropySolver,
    NonConvergence,
    OddM,
    QModel,
    SimpleGraph,
    SumMismatch,
    c1_of_d,
    c2_of_d,
    c2_upper_bound,
    dual_f,
    dual_g,
    dual_objectives,
    entropy_h1,
    enumerate_gd,
    havel_hakimi,
    log_prob_bipartite_graph,
    log_prob_graph,
    log_prob_lower_bound,
    mckay_log_count,
    q_model,
    r_regularity_report,
    solve_bipartite_max_entropy,
    solve_max_entropy,
)
from entropygraph.core.entropy.entropy import binary_entropy


class SolverOverrides:
    def __init__(self, **solver_config):
        self.SOLVER_CONFIG = solver_config


def test_regular_sequence_gives_uniform_probabilities(cycle_solution):
    assert np.allclose(cycle_solution.pair_probabilities(), 2 / 3, atol=1e-10)
    assert np.allclose(cycle_solution.r, math.sqrt(2), atol=1e-9)
    assert cycle_solution.converged and cycle_solution.max_residual <= 1e-10


def test_fitted_degrees_match(mixed_degrees):
    solution = solve_max_entropy(mixed_degrees)
    assert np.allclose(solution.p_matrix().sum(axis=1), mixed_degrees.degrees, atol=1e-9)
    assert np.all(np.diff(solution.r) >= 0)


def test_row_and_probability_agree(cubic_solution):
    row = cubic_solution.row(2)
    assert row[2] == 0.0
    assert math.isclose(row[5], cubic_solution.probability(2, 5))
    with pytest.raises(ValueError):
        cubic_solution.probability(3, 3)


def test_h1_equals_sum_of_binary_entropies(cycle_solution):
    expected = 6 * float(binary_entropy(2 / 3))
    assert math.isclose(cycle_solution.h1, expected, rel_tol=1e-9)
    assert math.isclose(entropy_h1(cycle_solution), expected, rel_tol=1e-9)


def test_every_graph_with_the_degrees_has_probability_exp_minus_h1(cycle_degrees,
                                                                     cycle_solution):
    for graph in enumerate_gd(cycle_degrees):
        assert math.isclose(-log_prob_graph(cycle_solution, graph), cycle_solution.h1,
                            rel_tol=1e-9)


def test_log_prob_graph_vertex_mismatch(cycle_solution):
    with pytest.raises(ValueError):
        log_prob_graph(cycle_solution, SimpleGraph(5))


def test_log_prob_lower_bound(cubic_degrees, cubic_solution):
    log_p = log_prob_graph(cubic_solution, havel_hakimi(cubic_degrees))
    assert log_prob_lower_bound(cubic_degrees) <= log_p


def test_boundary_sequence_raises(mock_pubsub):
    D = DegreeSequence([3, 3, 3, 3])
    with pytest.raises(BoundaryOptimum) as exc_info:
        MaxEntropySolver(event_bus=mock_pubsub).solve(D)
    assert exc_info.value.report.first_violation == 1
    assert mock_pubsub.topics() == ['SOLVER.FAILED']


def test_iteration_budget_raises_with_residuals(mixed_degrees):
    with pytest.raises(NonConvergence) as exc_info:
        solve_max_entropy(mixed_degrees, max_iter=1)
    assert exc_info.value.iterations == 1
    assert len(exc_info.value.residuals) == mixed_degrees.n


def test_stalled_fixed_point_falls_back_to_newton(mixed_degrees, mock_pubsub):
    solver = MaxEntropySolver(SolverOverrides(stall_sweeps=0), event_bus=mock_pubsub)
    solution = solver.solve(mixed_degrees)
    assert solution.method == 'newton'
    assert mock_pubsub.topics() == ['SOLVER.FALLBACK', 'SOLVER.CONVERGED']
    assert np.allclose(solution.r, solve_max_entropy(mixed_degrees).r, rtol=1e-6)


def test_large_solver_uses_damped_fixed_point(mixed_degrees):
    solver = MaxEntropySolver(SolverOverrides(stall_sweeps=0, newton={'max_n': 2}))
    assert solver.solve(mixed_degrees).method == 'damped_fixed_point'


def test_p_matrix_refuses_huge_models():
    solution = MaxEntropySolution(np.ones(2001), np.zeros(2001), np.zeros(2001), True, 0,
                                  'fixed_point', 1e-10)
    with pytest.raises(ValueError):
        solution.p_matrix()


def test_solution_state(cycle_solution):
    state = cycle_solution.__getstate__()
    assert set(state) == {'r', 'h1', 'residual', 'iterations', 'converged', 'method'}


# -----------------------------------------------------------------------------
# Dual objectives
# -----------------------------------------------------------------------------

def test_dual_gradients_vanish_at_the_optimum(mixed_degrees):
    solution = solve_max_entropy(mixed_degrees)
    _, grad_f = dual_f(mixed_degrees, solution.theta)
    _, grad_g = dual_g(mixed_degrees, solution.r)
    assert np.max(np.abs(grad_f)) <= 1e-9
    assert np.max(np.abs(grad_g)) <= 1e-8


def test_dual_value_is_h1(mixed_degrees):
    solution = solve_max_entropy(mixed_degrees)
    value, _ = dual_g(mixed_degrees, solution.r)
    assert math.isclose(value, solution.h1, rel_tol=1e-9)


def test_dual_f_gradient_by_central_differences(mixed_degrees, rng):
    x = rng.normal(scale=0.5, size=mixed_degrees.n)
    _, gradient = dual_f(mixed_degrees, x)
    h = 1e-6
    for i in range(mixed_degrees.n):
        step = np.zeros_like(x)
        step[i] = h
        numeric = (dual_f(mixed_degrees, x + step)[0] -
                   dual_f(mixed_degrees, x - step)[0]) / (2 * h)
        assert abs(numeric - gradient[i]) <= 1e-5 * max(1.0, abs(gradient[i]))


def test_dual_g_requires_positive_r(cycle_degrees):
    with pytest.raises(DomainError):
        dual_g(cycle_degrees, [1.0, 0.0, 1.0, 1.0])


def test_dual_objectives_agree(cycle_degrees):
    objectives = dual_objectives(cycle_degrees, np.full(4, 1.3))
    assert math.isclose(objectives.f, objectives.g)
    assert np.allclose(objectives.grad_g * 1.3, objectives.grad_f)


# -----------------------------------------------------------------------------
# q-model, regularity and counts
# -----------------------------------------------------------------------------

def test_q_model_sandwich(mixed_degrees):
    model = q_model(mixed_degrees)
    assert model.violations == ()
    assert np.all(model.lower_bounds <= model.q_degrees + 1e-12)
    assert np.all(model.q_degrees <= mixed_degrees.degrees)


def test_q_model_probability(cycle_degrees):
    model = QModel(cycle_degrees)
    assert math.isclose(model.probability(0, 1), 4 / 12)
    assert math.isclose(model.log_prob_graph(havel_hakimi(cycle_degrees)),
                        4 * 2 * math.log(1 / math.sqrt(2)) - 6 * math.log(1.5))
    assert model.log_ratio_bound(0.75) > 0


def test_r_regularity_report_passes(cubic_degrees, cubic_solution):
    report = r_regularity_report(cubic_solution, cubic_degrees)
    assert report.passed
    assert report.monotone.witness is None
    assert report.max_log_r_over_log_n >= 0


def test_c_quantities(cubic_degrees, cubic_solution):
    a = 0.75
    assert c1_of_d(cubic_degrees, cubic_solution, a) > 0
    expected = 8 * 3 ** a * abs(math.log(cubic_solution.r[0]))
    assert math.isclose(c2_of_d(cubic_degrees, cubic_solution, a), expected)
    assert math.isclose(c2_upper_bound(cubic_degrees, a, 0.1),
                        4 * math.log(8) * 8 ** -0.1 * 24 * 3 ** 0.25)
    with pytest.raises(DomainError):
        c1_of_d(cubic_degrees, cubic_solution, 0.5)


def test_mckay_count_for_perfect_matchings(matching_degrees):
    assert math.isclose(math.exp(mckay_log_count(matching_degrees)), 3.0, rel_tol=1e-12)


def test_mckay_count_needs_even_total():
    with pytest.raises(OddM):
        mckay_log_count(DegreeSequence([1, 1, 1]))


# -----------------------------------------------------------------------------
# Bipartite model
# -----------------------------------------------------------------------------

def test_bipartite_symmetric_margins_give_one_half():
    solution = solve_bipartite_max_entropy(DegreeSequence([1, 1]), DegreeSequence([1, 1]),
                                           tol=1e-14)
    assert abs(solution.probability(0, 2) - 0.5) <= 1e-12
    assert solution.probability(0, 1) == 0.0
    assert solution.bipartite == (2, 2)


def test_bipartite_margins_are_met():
    D1, D2 = DegreeSequence([1, 2, 2, 2]), DegreeSequence([2, 2, 3])
    solution = solve_bipartite_max_entropy(D1, D2)
    block = solution.p_block()
    assert np.allclose(block.sum(axis=1), D1.degrees, atol=1e-9)
    assert np.allclose(block.sum(axis=0), D2.degrees, atol=1e-9)
    assert solution.row(0)[:4].tolist() == [0.0] * 4


def test_bipartite_log_prob_is_minus_h2():
    D1, D2 = DegreeSequence([1, 1]), DegreeSequence([1, 1])
    solution = solve_bipartite_max_entropy(D1, D2)
    graph = SimpleGraph(4, [(0, 2), (1, 3)], bipartite=(2, 2))
    assert math.isclose(-log_prob_bipartite_graph(solution, graph), solution.h2)
    assert math.isclose(solution.h2, 4 * math.log(2))


def test_bipartite_sum_mismatch():
    with pytest.raises(SumMismatch):
        solve_bipartite_max_entropy(DegreeSequence([1, 1]), DegreeSequence([1]))


def test_bipartite_saturated_margin(mock_pubsub):
    with pytest.raises(NonConvergence):
        solve_bipartite_max_entropy(DegreeSequence([2]), DegreeSequence([1, 1]),
                                    event_bus=mock_pubsub)
    assert mock_pubsub.topics() == ['SOLVER.FAILED']
