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
from entropygraph.core.conf.settings import section


class SolverSettings:
    """
    SolverSettings is a settings proxy.  It is new for each new solver
    instance, reading SOLVER_CONFIG from the settings object provided.
    """
    def __init__(self, settings=None):
        solver_config = section(settings, 'SOLVER_CONFIG')
        newton_config = solver_config.get('newton') or {}
        bipartite_config = solver_config.get('bipartite') or {}

        self.tol = float(solver_config.get('tol', 1e-10))
        self.max_iter = int(solver_config.get('max_iter', 10000))
        self.stall_sweeps = int(solver_config.get('stall_sweeps', 10))
        self.chunk_rows = int(solver_config.get('chunk_rows', 256))

        self.newton_max_n = int(newton_config.get('max_n', 3000))
        self.armijo_c = float(newton_config.get('armijo_c', 1e-4))
        self.backtrack = float(newton_config.get('backtrack', 0.5))
        self.min_step = float(newton_config.get('min_step', 1e-12))

        self.divergence_bound = float(bipartite_config.get('divergence_bound', 1e12))

    def __repr__(self):
        return ("SolverSettings(tol={0}, max_iter={1}, stall_sweeps={2}, "
                "newton_max_n={3})".format(self.tol, self.max_iter,
                                           self.stall_sweeps, self.newton_max_n))
