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


class EntropyGraphException(Exception):
    """
    The master root exception that all other exceptions are sub-classed from
    """
    pass


# ---------------------------------------------------------------------------
# ---- Degree Sequence Exceptions
# ---------------------------------------------------------------------------

class DegreeSequenceException(EntropyGraphException):
    """
    A sub-root exception type
    """
    pass


class InvalidDegreeSequence(DegreeSequenceException, ValueError):
    """
    Raises when a degree sequence is empty, contains non-integers or contains
    degrees below the permitted minimum
    """
    pass


class NoFeasibleK(DegreeSequenceException):
    """
    Raises when no index k satisfies S_k <= M/2, which happens when even the
    largest degree alone exceeds half the total
    """
    def __init__(self, msg=None, s1=None, half_total=None):
        super().__init__(msg)
        self.s1 = s1
        self.half_total = half_total


class Infeasible(DegreeSequenceException):
    """
    Raises when a degree sequence (or a pair of bipartite margins) cannot be
    realized by any simple graph
    """
    pass


class OddM(DegreeSequenceException):
    """
    Raises when an operation requires an even degree total
    """
    pass


class SumMismatch(DegreeSequenceException):
    """
    Raises when the two sides of a bipartite margin pair have different totals
    """
    pass


# ---------------------------------------------------------------------------
# ---- Solver Exceptions
# ---------------------------------------------------------------------------

class SolverException(EntropyGraphException):
    """
    A sub-root exception type
    """
    pass


class BoundaryOptimum(SolverException):
    """
    Raises when the entropy optimum lies on the boundary of the polytope, so
    that no finite weights exist (strict Erdos-Gallai fails)
    """
    def __init__(self, msg=None, report=None):
        super().__init__(msg)
        self.report = report


class NonConvergence(SolverException):
    """
    Raises when an iterative solver exhausts its iteration budget or diverges.
    The final residuals are attached so callers can inspect how close it got.
    """
    def __init__(self, msg=None, residuals=None, iterations=None):
        super().__init__(msg)
        self.residuals = residuals
        self.iterations = iterations


# ---------------------------------------------------------------------------
# ---- Enumeration Exceptions
# ---------------------------------------------------------------------------

class SizeGuard(EntropyGraphException):
    """
    Raises when an exhaustive enumeration would exceed its configured budget
    """
    def __init__(self, msg=None, estimate=None, budget=None):
        super().__init__(msg)
        self.estimate = estimate
        self.budget = budget


# ---------------------------------------------------------------------------
# ---- Structural Exceptions
# ---------------------------------------------------------------------------

class WeightOutOfRange(EntropyGraphException, ValueError):
    pass


class DisjointImages(EntropyGraphException):
    """
    Raises when two placed trees share no edge and cannot be wedged
    """
    pass


class EmptyFamily(EntropyGraphException):
    """
    Raises when a concentration family has no members or zero mean
    """
    pass


class MalformedCode(EntropyGraphException, ValueError):
    pass


class DomainError(EntropyGraphException, ValueError):
    """
    Raises when a numeric argument lies outside the domain of a formula
    """
    pass


class GuaranteeViolation(EntropyGraphException):
    """
    Raises when a construction finishes without the property it promises,
    such as rounded degrees outside their floor/floor+1 window
    """
    pass
