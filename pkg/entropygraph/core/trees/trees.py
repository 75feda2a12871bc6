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
Labeled trees, placements into a host vertex set, the B-function and the
weighted embedding sums built on it.

Tree vertices are 0..k-1.  A placement ``s`` is a tuple of k distinct host
vertices with ``s[u]`` the image of tree vertex u.
"""
from collections import deque
import functools
import heapq
import itertools
import logging
import math
import sys

import networkx as nx
import numpy as np

from entropygraph.core import (
    DegreeSequence,
    DisjointImages,
    DomainError,
    EntropyGraphException,
    MalformedCode,
    SimpleGraph,
    SizeGuard,
    TreeSettings,
)

logger = logging.getLogger(__name__)

LOG_SPACE_THRESHOLD = 500.0
# log of the largest finite float
LOG_FLOAT_MAX = math.log(sys.float_info.max)
MAX_TOTAL_K = 6


class LabeledTree:
    """
    A tree on vertices 0..k-1, stored as its sorted edge tuple together with
    the degree vector ``b``.
    """

    def __init__(self, k, edges):
        k = int(k)
        if k < 2:
            raise ValueError('a tree needs at least two vertices, got k={0}'.format(k))

        normalized = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v or not (0 <= u < k and 0 <= v < k):
                raise ValueError('invalid tree edge ({0}, {1}) for k={2}'.format(u, v, k))
            normalized.add((u, v) if u < v else (v, u))

        if len(normalized) != k - 1:
            msg = 'a tree on {0} vertices has {1} edges, got {2}'.format(
                k, k - 1, len(normalized))
            raise ValueError(msg)

        adjacency = [[] for _ in range(k)]
        for u, v in normalized:
            adjacency[u].append(v)
            adjacency[v].append(u)

        self.k = k
        self.edges = tuple(sorted(normalized))
        self._adjacency = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
        self.b = tuple(len(nbrs) for nbrs in self._adjacency)

        order, _ = self.bfs_order()
        if len(order) != k:
            raise ValueError('edges {0} do not connect {1} vertices'.format(self.edges, k))

    def neighbors(self, u):
        return self._adjacency[u]

    def bfs_order(self, root=0):
        """
        :returns: (order, parent) where every vertex after the first in
                  ``order`` is adjacent to an earlier one, ``parent[root]``
                  being None
        """
        parent = [None] * self.k
        seen = [False] * self.k
        seen[root] = True
        order = []
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in self._adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    parent[v] = u
                    queue.append(v)
        return tuple(order), tuple(parent)

    def relabel(self, pi):
        """
        The tree pi(T): vertex u becomes pi[u].
        """
        pi = _check_permutation(pi, self.k)
        return LabeledTree(self.k, ((pi[u], pi[v]) for u, v in self.edges))

    def _centers(self):
        degree = list(self.b)
        removed = [False] * self.k
        leaves = [u for u in range(self.k) if degree[u] <= 1]
        remaining = self.k
        while remaining > 2:
            next_leaves = []
            for leaf in leaves:
                removed[leaf] = True
                remaining -= 1
                for v in self._adjacency[leaf]:
                    if not removed[v]:
                        degree[v] -= 1
                        if degree[v] == 1:
                            next_leaves.append(v)
            leaves = next_leaves
        return [u for u in range(self.k) if not removed[u]]

    def _rooted_code(self, root):
        def encode(u, parent):
            children = sorted(encode(v, u) for v in self._adjacency[u] if v != parent)
            return '(' + ''.join(children) + ')'
        return encode(root, None)

    def canonical_form(self):
        """
        Isomorphism-invariant string: the smallest AHU code over the tree's
        centres.
        """
        return min(self._rooted_code(c) for c in self._centers())

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.k))
        graph.add_edges_from(self.edges)
        return graph

    def __eq__(self, other):
        return isinstance(other, LabeledTree) and (self.k, self.edges) == (other.k, other.edges)

    def __hash__(self):
        return hash((self.k, self.edges))

    def __repr__(self):
        return 'LabeledTree(k={0}, edges={1})'.format(self.k, list(self.edges))


def _check_permutation(pi, k):
    pi = tuple(int(x) for x in pi)
    if sorted(pi) != list(range(k)):
        raise ValueError('{0} is not a permutation of 0..{1}'.format(pi, k - 1))
    return pi


class OrderedTree:
    """
    A pair (s, T): a labeled tree together with an injective placement of its
    vertices into a host vertex set.
    """

    def __init__(self, tree, placement, n=None):
        placement = tuple(int(x) for x in placement)
        if len(placement) != tree.k:
            msg = 'placement of length {0} for a tree on {1} vertices'.format(
                len(placement), tree.k)
            raise ValueError(msg)
        if len(set(placement)) != tree.k:
            raise ValueError('placement {0} is not injective'.format(placement))
        if min(placement) < 0 or (n is not None and max(placement) >= n):
            raise ValueError('placement {0} leaves the vertex range'.format(placement))
        self.tree = tree
        self.placement = placement

    @property
    def k(self):
        return self.tree.k

    @property
    def image_vertices(self):
        return frozenset(self.placement)

    @property
    def image_edges(self):
        s = self.placement
        return frozenset((min(s[u], s[v]), max(s[u], s[v])) for u, v in self.tree.edges)

    def relabel(self, pi):
        """
        (s o pi^-1, pi(T)): same image, tree vertex u renamed pi[u].
        """
        pi = _check_permutation(pi, self.k)
        placement = [0] * self.k
        for u, target in enumerate(pi):
            placement[target] = self.placement[u]
        return OrderedTree(self.tree.relabel(pi), placement)

    def image_graph(self):
        graph = nx.Graph()
        graph.add_nodes_from(self.placement)
        graph.add_edges_from(self.image_edges)
        return graph

    def __eq__(self, other):
        return (isinstance(other, OrderedTree) and self.tree == other.tree and
                self.placement == other.placement)

    def __hash__(self):
        return hash((self.tree, self.placement))

    def __repr__(self):
        return 'OrderedTree(tree={0}, placement={1})'.format(self.tree, self.placement)


# -----------------------------------------------------------------------------
# Pruefer codec
# -----------------------------------------------------------------------------

class PrueferCode:
    """
    k - 2 entries in 0..k-1 (the 1-based codes of the literature shifted
    down by one).
    """

    def __init__(self, entries, k=None):
        entries = tuple(int(x) for x in entries)
        k = len(entries) + 2 if k is None else int(k)
        if k < 2 or len(entries) != k - 2:
            msg = 'a code for k={0} needs {1} entries, got {2}'.format(k, k - 2, len(entries))
            raise MalformedCode(msg)
        bad = [x for x in entries if not 0 <= x < k]
        if bad:
            msg = 'code entries {0} lie outside 0..{1}'.format(bad, k - 1)
            raise MalformedCode(msg)
        self.entries = entries
        self.k = k

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, PrueferCode) and (self.k, self.entries) == (other.k, other.entries)

    def __hash__(self):
        return hash((self.k, self.entries))

    def __repr__(self):
        return 'PrueferCode(k={0}, entries={1})'.format(self.k, self.entries)


def pruefer_encode(tree):
    degree = list(tree.b)
    leaves = [u for u in range(tree.k) if degree[u] == 1]
    heapq.heapify(leaves)
    removed = [False] * tree.k
    entries = []
    for _ in range(tree.k - 2):
        leaf = heapq.heappop(leaves)
        removed[leaf] = True
        neighbor = next(v for v in tree.neighbors(leaf) if not removed[v])
        entries.append(neighbor)
        degree[neighbor] -= 1
        if degree[neighbor] == 1:
            heapq.heappush(leaves, neighbor)
    return PrueferCode(entries, tree.k)


def pruefer_decode(code):
    if not isinstance(code, PrueferCode):
        code = PrueferCode(code)
    k = code.k
    degree = [1] * k
    for x in code:
        degree[x] += 1
    leaves = [u for u in range(k) if degree[u] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in code:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    # exactly two leaves remain
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return LabeledTree(k, edges)


@functools.lru_cache(maxsize=None)
def _trees_of_size(k):
    if k == 2:
        return (LabeledTree(2, [(0, 1)]),)
    return tuple(pruefer_decode(PrueferCode(entries, k))
                 for entries in itertools.product(range(k), repeat=k - 2))


def enumerate_trees(k, max_k=None):
    """
    All k^(k-2) labeled trees on 0..k-1, one per Pruefer code in
    lexicographic code order.
    """
    k = int(k)
    if max_k is None:
        max_k = TreeSettings().max_enumeration_k
    if k < 2:
        raise DomainError('trees need k >= 2, got {0}'.format(k))
    if k > max_k:
        msg = 'refusing to enumerate {0} trees on k={1} > {2} vertices'.format(
            k ** (k - 2), k, max_k)
        raise SizeGuard(msg, estimate=k ** (k - 2), budget=max_k ** (max_k - 2))
    return list(_trees_of_size(k))


@functools.lru_cache(maxsize=None)
def tree_shapes(k):
    """
    Isomorphism classes of labeled k-trees.

    :returns: tuple of (representative, multiplicity) ordered by canonical form
    """
    shapes = {}
    for tree in enumerate_trees(k):
        form = tree.canonical_form()
        if form in shapes:
            shapes[form][1] += 1
        else:
            shapes[form] = [tree, 1]
    return tuple((shapes[form][0], shapes[form][1]) for form in sorted(shapes))


# -----------------------------------------------------------------------------
# B-function
# -----------------------------------------------------------------------------

def _degree_vector(degrees):
    if isinstance(degrees, (SimpleGraph, DegreeSequence)):
        return degrees.degrees
    return np.asarray(degrees)


def psi_exact(ot, degrees):
    """
    prod_u d_{s(u)}^(b_u - 1) as an exact integer.
    """
    d = _degree_vector(degrees)
    return math.prod(int(d[x]) ** (b - 1) for x, b in zip(ot.placement, ot.tree.b))


def log_psi(ot, degrees):
    d = _degree_vector(degrees)
    return math.fsum((b - 1) * math.log(d[x]) for x, b in zip(ot.placement, ot.tree.b) if b > 1)


def psi(ot, degrees, log_space_threshold=LOG_SPACE_THRESHOLD):
    """
    The B-function of a placed tree against a degree vector (a
    DegreeSequence, a SimpleGraph or any integer array indexed by host
    vertex).

    :raises SizeGuard: when psi overflows a float; use log_psi there
    """
    d = _degree_vector(degrees)
    d_max = max(int(d[x]) for x in ot.placement)
    if d_max > 1 and ot.k * math.log(d_max) > log_space_threshold:
        value = log_psi(ot, d)
        if value >= LOG_FLOAT_MAX:
            msg = 'log psi of {0} is {1:.1f}, beyond float range'.format(ot, value)
            logger.error(msg)
            raise SizeGuard(msg, estimate=value, budget=LOG_FLOAT_MAX)
        return float(np.exp(value))
    return float(psi_exact(ot, d))


def psi_invariance_check(ot, pi, degrees):
    return psi_exact(ot.relabel(pi), degrees) == psi_exact(ot, degrees)


# -----------------------------------------------------------------------------
# Wedge sum
# -----------------------------------------------------------------------------

def _path_to_edge(graph, v, edge):
    to_first = nx.shortest_path(graph, v, edge[0])
    to_second = nx.shortest_path(graph, v, edge[1])
    return to_first if len(to_first) <= len(to_second) else to_second


def _normalize(u, v):
    return (u, v) if u < v else (v, u)


def wedge_sum(a, b):
    """
    Merge two placed trees whose images share an edge into one placed tree
    spanning the union of their images.

    The smallest common edge e is fixed.  Every shared vertex not touching a
    common edge drops the first edge of its path to e inside b's image; any
    cycle left over is broken by deleting the smallest edge of b's image not
    in a's that still lies on a cycle.  The result is placed on the union's
    vertices in ascending order.
    """
    edges_a, edges_b = a.image_edges, b.image_edges
    common = edges_a & edges_b
    if not common:
        msg = 'images of {0} and {1} share no edge'.format(a, b)
        raise DisjointImages(msg)

    anchor = min(common)
    vertices = a.image_vertices | b.image_vertices
    union = nx.Graph()
    union.add_nodes_from(vertices)
    union.add_edges_from(edges_a | edges_b)

    image_b = b.image_graph()
    on_common = {x for edge in common for x in edge}
    for v in sorted(a.image_vertices & b.image_vertices):
        if v in on_common:
            continue
        path = _path_to_edge(image_b, v, anchor)
        first = _normalize(path[0], path[1])
        if union.has_edge(*first):
            union.remove_edge(*first)

    removable = edges_b - edges_a
    while union.number_of_edges() > union.number_of_nodes() - 1:
        bridges = {_normalize(u, v) for u, v in nx.bridges(union)}
        candidates = sorted(e for e in removable if union.has_edge(*e) and e not in bridges)
        if not candidates:
            break
        union.remove_edge(*candidates[0])

    if not nx.is_tree(union):
        msg = 'wedge of {0} and {1} did not produce a tree'.format(a, b)
        raise EntropyGraphException(msg)

    placement = tuple(sorted(vertices))
    position = {x: i for i, x in enumerate(placement)}
    tree = LabeledTree(len(placement),
                       ((position[u], position[v]) for u, v in union.edges()))
    return OrderedTree(tree, placement)


# -----------------------------------------------------------------------------
# Embedding sums
# -----------------------------------------------------------------------------

def _factor_table(tree, degrees):
    """
    factors[u][x] = d_x^-(b_u - 1) as plain float lists for the inner loops.
    """
    d = np.asarray(_degree_vector(degrees), dtype=float)
    table = []
    with np.errstate(divide='ignore'):
        for b in tree.b:
            if b == 1:
                table.append([1.0] * len(d))
            else:
                table.append(np.power(d, -(b - 1)).tolist())
    return table


class EmbeddingCounter:
    """
    Depth-first enumeration of the injective placements of a tree whose
    edges all land on edges of a host graph.

    Tree vertices are visited in BFS order from vertex 0, so every new vertex
    is chosen among the host neighbours of its already placed parent.  The
    work is bounded up front by n * max_degree^(k-1); a tree/graph pair above
    the budget raises SizeGuard before any work is done.
    """

    def __init__(self, settings=None, budget=None):
        self.budget = TreeSettings(settings).embedding_budget if budget is None else budget

    def estimate(self, tree, graph):
        d_max = int(graph.degrees.max()) if graph.n else 0
        return graph.n * d_max ** (tree.k - 1)

    def _guard(self, tree, graph):
        estimate = self.estimate(tree, graph)
        if estimate > self.budget:
            msg = ('embedding {0} into {1} may take {2} extensions, over the budget '
                   'of {3}'.format(tree, graph, estimate, self.budget))
            logger.warning(msg)
            raise SizeGuard(msg, estimate=estimate, budget=self.budget)

    @staticmethod
    def _plan(tree):
        order, parent = tree.bfs_order(0)
        depth_of = {u: i for i, u in enumerate(order)}
        parent_depth = [None] + [depth_of[parent[u]] for u in order[1:]]
        return order, parent_depth

    def placements(self, tree, graph):
        """
        Yields every valid placement as a tuple indexed by tree vertex.
        """
        self._guard(tree, graph)
        order, parent_depth = self._plan(tree)
        k = tree.k
        adjacency = [graph.neighbors(x) for x in range(graph.n)]
        placed = [0] * k
        used = [False] * graph.n

        def extend(depth):
            if depth == k:
                placement = [0] * k
                for i, u in enumerate(order):
                    placement[u] = placed[i]
                yield tuple(placement)
                return
            for x in adjacency[placed[parent_depth[depth]]]:
                if used[x]:
                    continue
                used[x] = True
                placed[depth] = x
                yield from extend(depth + 1)
                used[x] = False

        for root in range(graph.n):
            if not adjacency[root]:
                continue
            used[root] = True
            placed[0] = root
            yield from extend(1)
            used[root] = False

    def weighted_sum(self, tree, graph, degrees):
        """
        Sum over valid placements of 1 / psi(s, T, degrees).
        """
        self._guard(tree, graph)
        order, parent_depth = self._plan(tree)
        table = _factor_table(tree, degrees)
        factors = [table[u] for u in order]
        last = tree.k - 1
        adjacency = [graph.neighbors(x) for x in range(graph.n)]
        placed = [0] * tree.k
        used = [False] * graph.n

        def extend(depth):
            candidates = adjacency[placed[parent_depth[depth]]]
            factor = factors[depth]
            total = 0.0
            if depth == last:
                for x in candidates:
                    if not used[x]:
                        total += factor[x]
                return total
            for x in candidates:
                if used[x]:
                    continue
                used[x] = True
                placed[depth] = x
                total += factor[x] * extend(depth + 1)
                used[x] = False
            return total

        total = 0.0
        for root in range(graph.n):
            if not adjacency[root]:
                continue
            used[root] = True
            placed[0] = root
            total += factors[0][root] * extend(1)
            used[root] = False
        return total


def weighted_embedding_sum(tree, graph, degrees_for_psi=None, counter=None):
    """
    F(T, G): the 1/psi-weighted count of placements of T into G.  The
    B-function uses G's own degrees unless a reference vector is given.
    """
    counter = counter or EmbeddingCounter()
    degrees = graph.degrees if degrees_for_psi is None else degrees_for_psi
    return counter.weighted_sum(tree, graph, degrees)


def z_discrepancy(tree, graph, reference, counter=None):
    """
    Sum over placements of |1/psi(s, T, reference) - 1/psi(s, T, D(G))|.
    """
    counter = counter or EmbeddingCounter()
    ref_table = _factor_table(tree, reference)
    own_table = _factor_table(tree, graph.degrees)
    total = 0.0
    for placement in counter.placements(tree, graph):
        ref_weight = 1.0
        own_weight = 1.0
        for u, x in enumerate(placement):
            ref_weight *= ref_table[u][x]
            own_weight *= own_table[u][x]
        total += abs(ref_weight - own_weight)
    return total


def normalized_tree_total(graph, k, degrees_for_psi=None, total=None, counter=None):
    """
    (1/M) * sum over all labeled k-trees of F(T, G).  Isomorphic trees share
    their F value, so one representative per shape is embedded.

    :param total: the normaliser M; defaults to 2|E(G)|
    """
    k = int(k)
    if k > MAX_TOTAL_K:
        msg = 'tree totals are limited to k <= {0}, got {1}'.format(MAX_TOTAL_K, k)
        raise SizeGuard(msg, estimate=k ** (k - 2), budget=MAX_TOTAL_K ** (MAX_TOTAL_K - 2))
    if k < 2:
        raise DomainError('trees need k >= 2, got {0}'.format(k))
    total = 2 * graph.edge_count if total is None else total
    if total <= 0:
        raise DomainError('normalised totals need at least one edge')
    counter = counter or EmbeddingCounter()
    value = math.fsum(count * weighted_embedding_sum(rep, graph, degrees_for_psi, counter)
                      for rep, count in tree_shapes(k))
    return value / total


def _side_lookup(part_of):
    if isinstance(part_of, SimpleGraph):
        return part_of.part_of
    if callable(part_of):
        return part_of
    return part_of.__getitem__


def bipartite_admissible(ot, part_of):
    """
    True when every placed edge joins the two sides.

    :param part_of: a bipartite SimpleGraph, a callable or a sequence
                    mapping host vertex -> side label
    """
    side = _side_lookup(part_of)
    for x, y in ot.image_edges:
        side_x, side_y = side(x), side(y)
        if side_x is None or side_y is None:
            raise ValueError('vertex without a side in {0}'.format(ot))
        if side_x == side_y:
            return False
    return True


def iter_placements(k, n):
    """All injective maps 0..k-1 -> 0..n-1."""
    return itertools.permutations(range(n), k)


def iter_tree_images(k, n):
    """
    Every tree on k distinct vertices of 0..n-1, each exactly once, as an
    OrderedTree placed on its sorted vertex subset.  Each image stands for
    k! ordered trees.
    """
    trees = enumerate_trees(k)
    for subset in itertools.combinations(range(n), k):
        for tree in trees:
            yield OrderedTree(tree, subset, n)
