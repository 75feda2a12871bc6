import itertools
import math

import networkx as nx
import pytest

from entropygraph.core import (
    DisjointImages,
    DomainError,
    EmbeddingCounter,
    LabeledTree,
    MalformedCode,
    OrderedTree,
    PrueferCode,
    SimpleGraph,
    SizeGuard,
    bipartite_admissible,
    enumerate_trees,
    iter_placements,
    iter_tree_images,
    log_psi,
    normalized_tree_total,
    pruefer_decode,
    pruefer_encode,
    psi,
    psi_exact,
    psi_invariance_check,
    tree_shapes,
    wedge_sum,
    weighted_embedding_sum,
    z_discrepancy,
)

# -----------------------------------------------------------------------------
# Labeled trees
# -----------------------------------------------------------------------------


def test_labeled_tree_degree_vector(path3, star4):
    assert path3.b == (1, 2, 1)
    assert star4.b == (3, 1, 1, 1)
    assert path3.edges == ((0, 1), (1, 2))


@pytest.mark.parametrize('k, edges', [(1, []),
                                      (3, [(0, 1)]),
                                      (4, [(0, 1), (1, 2), (0, 2)]),
                                      (3, [(0, 3), (1, 2)])])
def test_labeled_tree_rejects_non_trees(k, edges):
    with pytest.raises(ValueError):
        LabeledTree(k, edges)


def test_bfs_order_parents(star4):
    order, parent = star4.bfs_order(0)
    assert order == (0, 1, 2, 3)
    assert parent == (None, 0, 0, 0)


def test_canonical_form_is_isomorphism_invariant(path3):
    for pi in itertools.permutations(range(3)):
        assert path3.relabel(pi).canonical_form() == path3.canonical_form()


def test_relabel_rejects_non_permutation(path3):
    with pytest.raises(ValueError):
        path3.relabel((0, 0, 1))


@pytest.mark.parametrize('k, count', [(2, 1), (3, 3), (4, 16), (5, 125)])
def test_cayley_counts(k, count):
    trees = enumerate_trees(k)
    assert len(trees) == count
    assert len(set(trees)) == count


def test_enumerate_trees_guards():
    with pytest.raises(SizeGuard):
        enumerate_trees(10)
    with pytest.raises(DomainError):
        enumerate_trees(1)


def test_tree_shapes_partition_the_trees():
    shapes = tree_shapes(5)
    assert sorted(count for _, count in shapes) == [5, 60, 60]
    assert sum(count for _, count in tree_shapes(4)) == 16

# -----------------------------------------------------------------------------
# Pruefer codes
# -----------------------------------------------------------------------------


def test_pruefer_star(star4):
    assert pruefer_encode(star4) == PrueferCode((0, 0), 4)
    assert pruefer_decode((0, 0)) == star4


def test_pruefer_round_trip_on_every_tree():
    for tree in enumerate_trees(5):
        assert pruefer_decode(pruefer_encode(tree)) == tree


def test_pruefer_round_trip_on_random_codes(rng):
    for _ in range(200):
        k = int(rng.integers(3, 10))
        code = PrueferCode(rng.integers(k, size=k - 2), k)
        assert pruefer_encode(pruefer_decode(code)) == code


@pytest.mark.parametrize('entries, k', [((4,), 3), ((0,), 4)])
def test_malformed_codes(entries, k):
    with pytest.raises(MalformedCode):
        PrueferCode(entries, k)

# -----------------------------------------------------------------------------
# Placements and the B-function
# -----------------------------------------------------------------------------


def test_ordered_tree_validation(path3):
    with pytest.raises(ValueError):
        OrderedTree(path3, (0, 0, 1))
    with pytest.raises(ValueError):
        OrderedTree(path3, (0, 1))
    with pytest.raises(ValueError):
        OrderedTree(path3, (0, 1, 5), n=5)


def test_ordered_tree_relabel_keeps_image(worked_path):
    relabeled = worked_path.relabel((2, 0, 1))
    assert relabeled.image_edges == worked_path.image_edges
    assert relabeled.image_edges == frozenset({(6, 7), (4, 6)})


def test_psi_on_the_worked_path(worked_path):
    """
    only the centre (host vertex 6, degree 4) has b > 1
    """
    degrees = [3, 1, 2, 1, 3, 3, 4, 3]
    assert psi_exact(worked_path, degrees) == 4
    assert psi(worked_path, degrees) == 4.0
    assert math.isclose(log_psi(worked_path, degrees), math.log(4))


def test_psi_switches_to_log_space(worked_path):
    degrees = [3, 1, 2, 1, 3, 3, 4, 3]
    assert math.isclose(psi(worked_path, degrees, log_space_threshold=0.0), 4.0)


def test_psi_is_invariant_under_relabeling(worked_path):
    degrees = [3, 1, 2, 1, 3, 3, 4, 3]
    for pi in itertools.permutations(range(3)):
        assert psi_invariance_check(worked_path, pi, degrees)


def _random_placed_tree(rng, trees_by_k, k, n):
    trees = trees_by_k[k]
    tree = trees[int(rng.integers(len(trees)))]
    return OrderedTree(tree, [int(x) for x in rng.permutation(n)[:k]])


def test_psi_invariance_on_random_relabelings(rng):
    trees_by_k = {k: enumerate_trees(k) for k in range(2, 7)}
    n = 9
    for _ in range(1000):
        k = int(rng.integers(2, 7))
        ot = _random_placed_tree(rng, trees_by_k, k, n)
        degrees = [int(x) for x in rng.integers(1, 9, size=n)]
        pi = [int(x) for x in rng.permutation(k)]
        assert psi_invariance_check(ot, pi, degrees)


def test_psi_overflow_raises_size_guard():
    def star(k):
        return OrderedTree(LabeledTree(k, [(0, v) for v in range(1, k)]), range(k))

    degrees = [10 ** 6] + [1] * 59
    with pytest.raises(SizeGuard) as exc_info:
        psi(star(60), degrees)
    assert exc_info.value.estimate == pytest.approx(59 * math.log(10 ** 6))
    assert math.isclose(log_psi(star(60), degrees), 59 * math.log(10 ** 6))
    assert math.isclose(psi(star(50), degrees), 10.0 ** 294, rel_tol=1e-9)


def test_psi_accepts_graphs(square, path3):
    assert psi_exact(OrderedTree(path3, (0, 1, 2)), square) == 2


def test_iter_placements_and_images():
    assert len(list(iter_placements(2, 3))) == 6
    images = list(iter_tree_images(3, 4))
    assert len(images) == math.comb(4, 3) * 3
    assert len({ot.image_edges for ot in images}) == len(images)


def test_bipartite_admissible(path3):
    graph = SimpleGraph(4, [(0, 2), (1, 2)], bipartite=(2, 2))
    assert bipartite_admissible(OrderedTree(path3, (0, 2, 1)), graph)
    assert not bipartite_admissible(OrderedTree(path3, (0, 1, 2)), graph)
    assert bipartite_admissible(OrderedTree(path3, (0, 2, 1)), [0, 0, 1, 1])

# -----------------------------------------------------------------------------
# Wedge sum
# -----------------------------------------------------------------------------


def test_wedge_of_overlapping_paths(path3):
    merged = wedge_sum(OrderedTree(path3, (0, 1, 2)), OrderedTree(path3, (1, 2, 3)))
    assert merged.placement == (0, 1, 2, 3)
    assert merged.image_edges == frozenset({(0, 1), (1, 2), (2, 3)})


def test_wedge_breaks_the_cycle(path3):
    a = OrderedTree(path3, (0, 1, 2))
    b = OrderedTree(LabeledTree(4, [(0, 1), (1, 2), (2, 3)]), (1, 2, 3, 0))
    merged = wedge_sum(a, b)
    assert merged.k == 4
    assert merged.image_edges == frozenset({(0, 1), (1, 2), (2, 3)})


def test_wedge_is_a_submultiplicative_tree(rng):
    trees_by_k = {k: enumerate_trees(k) for k in range(2, 6)}
    n, checked = 7, 0
    while checked < 300:
        a = _random_placed_tree(rng, trees_by_k, int(rng.integers(2, 6)), n)
        b = _random_placed_tree(rng, trees_by_k, int(rng.integers(2, 6)), n)
        if not a.image_edges & b.image_edges:
            continue
        degrees = [int(x) for x in rng.integers(1, 7, size=n)]
        merged = wedge_sum(a, b)
        assert nx.is_tree(merged.tree.to_networkx())
        assert merged.image_vertices == a.image_vertices | b.image_vertices
        assert psi_exact(merged, degrees) <= psi_exact(a, degrees) * psi_exact(b, degrees)
        checked += 1


def test_wedge_needs_a_common_edge(path3):
    with pytest.raises(DisjointImages):
        wedge_sum(OrderedTree(path3, (0, 1, 2)), OrderedTree(path3, (3, 4, 5)))

# -----------------------------------------------------------------------------
# Embedding sums
# -----------------------------------------------------------------------------


def test_placements_of_a_path_in_a_triangle(path3, triangle):
    placements = list(EmbeddingCounter().placements(path3, triangle))
    assert len(placements) == 6
    assert weighted_embedding_sum(path3, triangle) == 3.0


def test_single_edge_sum_is_twice_the_edge_count(petersen):
    assert weighted_embedding_sum(LabeledTree(2, [(0, 1)]), petersen) == 30.0


def test_f_bounds_on_petersen(petersen):
    total = 2 * petersen.edge_count
    for k in (3, 4):
        lower = total - petersen.n * k * (k - 1) / 2.0
        for tree in enumerate_trees(k):
            value = weighted_embedding_sum(tree, petersen)
            assert lower - 1e-9 <= value <= total + 1e-9


def test_embedding_budget_guard(star4, petersen):
    with pytest.raises(SizeGuard) as exc_info:
        EmbeddingCounter(budget=10).weighted_sum(star4, petersen, petersen.degrees)
    assert exc_info.value.estimate == 10 * 3 ** 3


def test_normalized_tree_total(petersen):
    assert normalized_tree_total(petersen, 2) == 1.0
    assert normalized_tree_total(petersen, 3) <= 3.0 + 1e-12
    with pytest.raises(SizeGuard):
        normalized_tree_total(petersen, 7)
    with pytest.raises(DomainError):
        normalized_tree_total(SimpleGraph(3), 2)


def test_z_discrepancy_vanishes_on_own_degrees(path3, square):
    assert z_discrepancy(path3, square, square.degrees) == 0.0
    assert z_discrepancy(path3, square, [1, 1, 1, 1]) == 8 * (1.0 - 0.5)
