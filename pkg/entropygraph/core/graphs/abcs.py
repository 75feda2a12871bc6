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

from abc import ABCMeta, abstractmethod

import numpy as np


class BernoulliModel(metaclass=ABCMeta):
    """
    An independent-edge random graph law.  Every supported vertex pair {i, j}
    is present independently with probability p(i, j) = p(j, i); p(i, i) is
    never queried.

    Supports are either 'full' (every pair) or 'bipartite', in which case
    vertices 0..n1-1 form part A, the rest part B, and only crossing pairs
    carry probability.  Implementations include the fitted maximum-entropy
    solutions, the q-model and explicit matrices.
    """

    support = 'full'

    @property
    @abstractmethod
    def n(self):
        pass

    @abstractmethod
    def row(self, i):
        """
        Probabilities p(i, j) for every j as a float array of length n, with
        zeros at j == i and at unsupported pairs.
        """
        pass

    def probability(self, i, j):
        if i == j:
            msg = 'p(i, i) is undefined (i={0})'.format(i)
            raise ValueError(msg)
        return float(self.row(i)[j])

    def pair_probabilities(self):
        """Probabilities of all pairs i < j in upper_pairs order."""
        n = self.n
        if n < 2:
            return np.zeros(0)
        return np.concatenate([self.row(i)[i + 1:] for i in range(n - 1)])


class GraphSampler(metaclass=ABCMeta):
    """
    Anything that produces random SimpleGraphs.  Markov-chain samplers keep
    their chain state between draws.
    """

    @abstractmethod
    def draw(self, rng):
        pass

    def samples(self, count, rng):
        for _ in range(count):
            yield self.draw(rng)
        self.on_finished(count)

    def on_finished(self, count):
        """Called once a ``samples`` stream is exhausted."""
        pass
