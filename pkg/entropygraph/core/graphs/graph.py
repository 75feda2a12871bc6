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
import bisect
import logging
from pathlib import Path

import networkx as nx
import numpy as np

from entropygraph.core.utils.utils import (
    memoized_property,
    upper_pairs,
)

logger = logging.getLogger(__name__)


class SimpleGraph:
    """
    An undirected graph without loops or multiple edges on vertices 0..n-1.

    Adjacency is stored as per-vertex sorted neighbor tuples, so membership
    queries cost O(log d).  Instances are immutable; all derived views are
    computed once on demand.

    A bipartite graph records ``bipartite = (n1, n2)``: vertices 0..n1-1 are
    part A and n1..n1+n2-1 are part B.
    """

    def __init__(self, n, edges=(), bipartite=None):
        """
        :param n: vertex count
        :param edges: iterable of (u, v) vertex pairs, 0-based
        :param bipartite: optional (n1, n2) with n1 + n2 == n
        """
        n = int(n)
        if n < 0:
            raise ValueError('vertex count must be non-negative, got {0}'.format(n))
        if bipartite is not None:
            n1, n2 = (int(x) for x in bipartite)
            if n1 < 0 or n2 < 0 or n1 + n2 != n:
                msg = 'bipartition {0} does not cover {1} vertices'.format(bipartite, n)
                raise ValueError(msg)
            bipartite = (n1, n2)

        neighbors = [set() for _ in range(n)]
        edge_set = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError('self-loop at vertex {0}'.format(u))
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError('edge ({0}, {1}) outside 0..{2}'.format(u, v, n - 1))
            edge = (u, v) if u < v else (v, u)
            if edge in edge_set:
                raise ValueError('repeated edge {0}'.format(edge))
            if bipartite is not None and (edge[0] < bipartite[0]) == (edge[1] < bipartite[0]):
                raise ValueError('edge {0} does not cross the bipartition'.format(edge))
            edge_set.add(edge)
            neighbors[u].add(v)
            neighbors[v].add(u)

        self.n = n
        self.bipartite = bipartite
        self._adjacency = tuple(tuple(sorted(nbrs)) for nbrs in neighbors)
        self._edges = tuple(sorted(edge_set))

    @classmethod
    def from_edge_mask(cls, n, mask, bipartite=None):
        """
        Build from a boolean array over the upper_pairs ordering.
        """
        rows, cols = upper_pairs(n)
        mask = np.asarray(mask, dtype=bool)
        return cls(n, zip(rows[mask].tolist(), cols[mask].tolist()), bipartite=bipartite)

    @classmethod
    def from_networkx(cls, graph, bipartite=None):
        mapping = {v: i for i, v in enumerate(sorted(graph.nodes()))}
        edges = ((mapping[u], mapping[v]) for u, v in graph.edges())
        return cls(len(mapping), edges, bipartite=bipartite)

    @property
    def edges(self):
        """Sorted tuple of (u, v) with u < v."""
        return self._edges

    @property
    def edge_count(self):
        return len(self._edges)

    @memoized_property
    def edge_set(self):
        return frozenset(self._edges)

    @memoized_property
    def degrees(self):
        degrees = np.fromiter((len(nbrs) for nbrs in self._adjacency),
                              dtype=np.int64, count=self.n)
        degrees.flags.writeable = False
        return degrees

    def degree(self, v):
        return len(self._adjacency[v])

    def neighbors(self, v):
        return self._adjacency[v]

    def has_edge(self, u, v):
        nbrs = self._adjacency[u]
        pos = bisect.bisect_left(nbrs, v)
        return pos < len(nbrs) and nbrs[pos] == v

    def edge_mask(self):
        """Boolean array over the upper_pairs ordering."""
        n = self.n
        mask = np.zeros(n * (n - 1) // 2, dtype=bool)
        for u, v in self._edges:
            mask[u * n - u * (u + 1) // 2 + (v - u - 1)] = True
        return mask

    def part_of(self, v):
        """0 for part A, 1 for part B; None when the graph is not bipartite."""
        if self.bipartite is None:
            return None
        return 0 if v < self.bipartite[0] else 1

    def union(self, other):
        """Edge union of two graphs on the same vertex set."""
        if other.n != self.n:
            msg = 'cannot unite graphs on {0} and {1} vertices'.format(self.n, other.n)
            raise ValueError(msg)
        return SimpleGraph(self.n, self.edge_set | other.edge_set)

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self._edges)
        return graph

    def __eq__(self, other):
        return (isinstance(other, SimpleGraph) and self.n == other.n and
                self._edges == other._edges)

    def __hash__(self):
        return hash((self.n, self._edges))

    def __repr__(self):
        return ('SimpleGraph(n={0}, edge_count={1}{2})'.
                format(self.n, self.edge_count,
                       ', bipartite={0}'.format(self.bipartite) if self.bipartite else ''))


# -----------------------------------------------------------------------------
# Edge-list files: one "u v" pair per line, 1-indexed, '#' comments.
# Optional headers: "#vertices N" and "#bipartite n1 n2".
# -----------------------------------------------------------------------------

def _parse_header(line, headers):
    parts = line[1:].split()
    if parts and parts[0] in ('vertices', 'bipartite'):
        try:
            headers[parts[0]] = tuple(int(x) for x in parts[1:])
        except ValueError:
            raise ValueError('malformed header line: {0!r}'.format(line))


def _read_rows(path):
    headers = {}
    rows = []
    with Path(path).open() as stream:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith('#'):
                _parse_header(line, headers)
                continue
            rows.append((lineno, line.replace(',', ' ').split()))
    return headers, rows


def _resolve_size(headers, max_vertex):
    bipartite = headers.get('bipartite')
    if bipartite is not None and len(bipartite) != 2:
        raise ValueError('#bipartite header needs two sizes')
    vertices = headers.get('vertices')
    if bipartite is not None:
        n = sum(bipartite)
    elif vertices:
        n = vertices[0]
    else:
        n = max_vertex
    return n, bipartite


def read_edge_list(path):
    """
    :returns: SimpleGraph with 0-based vertices
    """
    headers, rows = _read_rows(path)
    edges = []
    for lineno, fields in rows:
        if len(fields) < 2:
            raise ValueError('line {0}: expected "u v"'.format(lineno))
        u, v = int(fields[0]), int(fields[1])
        if u < 1 or v < 1:
            raise ValueError('line {0}: vertices are 1-indexed'.format(lineno))
        edges.append((u - 1, v - 1))
    max_vertex = max((max(e) + 1 for e in edges), default=0)
    n, bipartite = _resolve_size(headers, max_vertex)
    return SimpleGraph(n, edges, bipartite=bipartite)


def read_weighted_bipartite(path):
    """
    Weighted bipartite file: header "#bipartite n1 n2" then "i j w" lines
    with i in 1..n1 (part A) and j in n1+1..n1+n2 (part B).

    :returns: (n1, n2, list of (i, j, w) with 0-based global vertex ids)
    """
    headers, rows = _read_rows(path)
    if 'bipartite' not in headers:
        raise ValueError('{0}: missing "#bipartite n1 n2" header'.format(path))
    n1, n2 = headers['bipartite']
    triples = []
    for lineno, fields in rows:
        if len(fields) != 3:
            raise ValueError('line {0}: expected "i j w"'.format(lineno))
        i, j, w = int(fields[0]) - 1, int(fields[1]) - 1, float(fields[2])
        if not (0 <= i < n1 and n1 <= j < n1 + n2):
            msg = 'line {0}: pair ({1}, {2}) does not cross the bipartition'.format(
                lineno, i + 1, j + 1)
            raise ValueError(msg)
        triples.append((i, j, w))
    return n1, n2, triples


def format_edge_list(graph):
    lines = ['#vertices {0}'.format(graph.n)]
    if graph.bipartite is not None:
        lines.append('#bipartite {0} {1}'.format(*graph.bipartite))
    lines.extend('{0} {1}'.format(u + 1, v + 1) for u, v in graph.edges)
    return '\n'.join(lines) + '\n'


def write_edge_list(graph, path):
    Path(path).write_text(format_edge_list(graph))
    return path
