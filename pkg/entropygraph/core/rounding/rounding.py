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
Rounding of fractional bipartite edge weights to a 0-1 graph whose degrees
are the fractional degrees rounded down or up by one.

An edge is live while 0 < w < 1 and dead once its weight is snapped to 0 or
1.  Cycles of live edges are cancelled first, with alternating +c/-c steps
that leave every fractional degree unchanged; the remaining live forest is
then consumed one maximal path at a time.
"""
from collections import namedtuple
import logging
import math

import numpy as np

from entropygraph.core import (
    GuaranteeViolation,
    RoundingSettings,
    SimpleGraph,
    WeightOutOfRange,
    publish,
    read_weighted_bipartite,
    serialize_abcs,
)

logger = logging.getLogger(__name__)

CONSERVATION_TOL = 1e-9


class WeightedBipartiteGraph:
    """
    Weights on the pairs between part A and part B = the other vertices.
    Unlisted pairs weigh 0.
    """

    def __init__(self, n, part_a, weights):
        """
        :param n: vertex count
        :param part_a: vertices of part A
        :param weights: iterable of (i, j, w) or a mapping (i, j) -> w with
                        one endpoint in each part
        """
        self.n = int(n)
        self.part_a = frozenset(int(v) for v in part_a)
        if any(not 0 <= v < self.n for v in self.part_a):
            raise ValueError('part A {0} leaves 0..{1}'.format(sorted(self.part_a), self.n - 1))

        if hasattr(weights, 'items'):
            weights = ((i, j, w) for (i, j), w in weights.items())

        self.weights = {}
        for i, j, w in weights:
            i, j, w = int(i), int(j), float(w)
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError('pair ({0}, {1}) leaves 0..{2}'.format(i, j, self.n - 1))
            if (i in self.part_a) == (j in self.part_a):
                raise ValueError('pair ({0}, {1}) does not cross the parts'.format(i, j))
            if not 0.0 <= w <= 1.0 or math.isnan(w):
                msg = 'weight {0} of pair ({1}, {2}) lies outside [0, 1]'.format(w, i, j)
                raise WeightOutOfRange(msg)
            edge = (i, j) if i < j else (j, i)
            if edge in self.weights:
                raise ValueError('pair {0} listed twice'.format(edge))
            self.weights[edge] = w

    @classmethod
    def from_file(cls, path):
        n1, n2, triples = read_weighted_bipartite(path)
        return cls(n1 + n2, range(n1), triples)

    @property
    def part_b(self):
        return frozenset(range(self.n)) - self.part_a

    @property
    def bipartite(self):
        """(n1, n2) when part A is the prefix 0..n1-1, else None."""
        n1 = len(self.part_a)
        if self.part_a == frozenset(range(n1)):
            return (n1, self.n - n1)
        return None

    def fractional_degrees(self):
        degrees = np.zeros(self.n)
        for (i, j), w in self.weights.items():
            degrees[i] += w
            degrees[j] += w
        return degrees

    def __repr__(self):
        return 'WeightedBipartiteGraph(n={0}, part_a={1}, pairs={2})'.format(
            self.n, sorted(self.part_a), len(self.weights))


class Augmentation(namedtuple('Augmentation', 'kind vertices c killed')):
    """
    One +c/-c step along ``vertices`` (a closed cycle or an open path); the
    first edge gains c.  ``killed`` lists the edges that died.
    """
    __slots__ = ()


class RoundingResult(serialize_abcs.Serializable):

    def __init__(self, graph, trace, initial_degrees, snap_tol):
        self.graph = graph
        self.trace = trace
        self.initial_degrees = initial_degrees
        self.snap_tol = snap_tol

    def degree_bounds(self):
        """Per vertex (floor(D), floor(D) + 1) of the initial fractional degree."""
        floors = np.floor(self.initial_degrees + self.snap_tol).astype(np.int64)
        return floors, floors + 1

    def guarantee_holds(self):
        lo, hi = self.degree_bounds()
        degrees = self.graph.degrees
        return bool(np.all((degrees >= lo) & (degrees <= hi)))

    def __getstate__(self):
        return {'edges': [[u + 1, v + 1] for u, v in self.graph.edges],
                'trace': [{'kind': step.kind,
                           'vertices': [v + 1 for v in step.vertices],
                           'c': step.c,
                           'killed': [[u + 1, v + 1] for u, v in step.killed]}
                          for step in self.trace]}


class _LiveWeights:
    """Weights plus an adjacency view restricted to live edges."""

    def __init__(self, weights, n, snap_tol):
        self.snap_tol = snap_tol
        self.w = {}
        self.live = [set() for _ in range(n)]
        for edge, value in weights.items():
            value = self._snap(value)
            self.w[edge] = value
            if 0.0 < value < 1.0:
                self.live[edge[0]].add(edge[1])
                self.live[edge[1]].add(edge[0])

    def _snap(self, value):
        if value <= self.snap_tol:
            return 0.0
        if value >= 1.0 - self.snap_tol:
            return 1.0
        return value

    def augment(self, walk, closed):
        """
        Alternate +c/-c along the edges of ``walk`` with the largest c that
        keeps every weight in [0, 1].

        :returns: (c, killed edges)
        """
        steps = list(zip(walk, walk[1:] + walk[:1] if closed else walk[1:]))
        edges = [(u, v) if u < v else (v, u) for u, v in steps]
        signs = [1 if index % 2 == 0 else -1 for index in range(len(edges))]
        c = min((1.0 - self.w[e]) if s > 0 else self.w[e] for e, s in zip(edges, signs))

        killed = []
        for edge, sign in zip(edges, signs):
            value = self._snap(self.w[edge] + sign * c)
            self.w[edge] = value
            if value in (0.0, 1.0):
                killed.append(edge)
                self.live[edge[0]].discard(edge[1])
                self.live[edge[1]].discard(edge[0])
        return c, killed

    def degrees(self):
        degrees = np.zeros(len(self.live))
        for (i, j), value in self.w.items():
            degrees[i] += value
            degrees[j] += value
        return degrees

    def find_cycle(self):
        """
        The first live cycle met by a DFS from the smallest vertex with
        ascending neighbour order, as a vertex list, or None.
        """
        n = len(self.live)
        visited = [False] * n
        for start in range(n):
            if visited[start] or not self.live[start]:
                continue
            on_stack = {start: 0}
            stack = [start]
            iterators = [iter(sorted(self.live[start]))]
            parents = [None]
            visited[start] = True
            while stack:
                v = stack[-1]
                advanced = False
                for u in iterators[-1]:
                    if u == parents[-1]:
                        continue
                    if u in on_stack:
                        return stack[on_stack[u]:]
                    if not visited[u]:
                        visited[u] = True
                        on_stack[u] = len(stack)
                        stack.append(u)
                        iterators.append(iter(sorted(self.live[u])))
                        parents.append(v)
                        advanced = True
                        break
                if not advanced:
                    del on_stack[stack.pop()]
                    iterators.pop()
                    parents.pop()
        return None

    def maximal_path(self):
        """
        A leaf-to-leaf path of the live forest starting at its smallest leaf
        and always stepping to the smallest new neighbour, or None.
        """
        leaves = [v for v, nbrs in enumerate(self.live) if len(nbrs) == 1]
        if not leaves:
            return None
        path = [leaves[0]]
        previous = None
        while True:
            ahead = sorted(u for u in self.live[path[-1]] if u != previous)
            if not ahead:
                return path
            previous = path[-1]
            path.append(ahead[0])


def round_to_integral(W, settings=None, event_bus=None):
    """
    :type W: WeightedBipartiteGraph
    :rtype: RoundingResult
    """
    snap_tol = RoundingSettings(settings).snap_tol
    state = _LiveWeights(W.weights, W.n, snap_tol)
    trace = []

    # cycle steps conserve every fractional degree; each snap may move it by snap_tol
    start_degrees = state.degrees()
    snaps = 0
    while True:
        cycle = state.find_cycle()
        if cycle is None:
            break
        c, killed = state.augment(cycle, closed=True)
        trace.append(Augmentation('cycle', tuple(cycle), c, tuple(killed)))
        snaps += len(killed)
        drift = float(np.max(np.abs(state.degrees() - start_degrees)))
        if drift > CONSERVATION_TOL + snaps * snap_tol:
            msg = 'cycle {0} moved a fractional degree by {1:.3g}'.format(cycle, drift)
            logger.error(msg)
            raise GuaranteeViolation(msg)

    while True:
        path = state.maximal_path()
        if path is None:
            break
        c, killed = state.augment(path, closed=False)
        trace.append(Augmentation('path', tuple(path), c, tuple(killed)))

    edges = [edge for edge, value in state.w.items() if value == 1.0]
    graph = SimpleGraph(W.n, edges, bipartite=W.bipartite)
    result = RoundingResult(graph, tuple(trace), W.fractional_degrees(), snap_tol)

    if not result.guarantee_holds():
        msg = 'rounded degrees leave the floor/floor+1 window for {0}'.format(W)
        logger.error(msg)
        raise GuaranteeViolation(msg)

    publish(event_bus, 'ROUNDING.FINISHED', augmentations=len(trace),
            edge_count=graph.edge_count,
            cycles=sum(1 for step in trace if step.kind == 'cycle'))
    return result


def build_crossing_tree(solution, A, settings=None, event_bus=None):
    """
    Rounds the fitted crossing probabilities between A and its complement.

    :returns: RoundingResult whose graph has edges only between A and B
    """
    A = sorted(int(v) for v in A)
    n = solution.n
    B = np.setdiff1d(np.arange(n), A)
    weights = {}
    for i in A:
        row = solution.row(i)
        for j in B.tolist():
            weights[(i, j)] = float(row[j])
    W = WeightedBipartiteGraph(n, A, weights)
    return round_to_integral(W, settings, event_bus)
