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


class StatsSettings:
    """
    StatsSettings is a settings proxy for STATS_CONFIG: the sigma multiple
    used by every Monte-Carlo verdict, the minimum sample sizes and the
    batching of indicator draws.
    """
    def __init__(self, settings=None):
        stats_config = section(settings, 'STATS_CONFIG')
        self.sigma = float(stats_config.get('sigma', 3.0))
        self.min_samples = int(stats_config.get('min_samples', 100))
        self.min_reps = int(stats_config.get('min_reps', 10000))
        self.batch_size = int(stats_config.get('batch_size', 10000))
        self.placement_budget = int(float(stats_config.get('placement_budget', 1e5)))

    def __repr__(self):
        return ("StatsSettings(sigma={0}, min_samples={1}, min_reps={2}, "
                "batch_size={3}, placement_budget={4})".format(
                    self.sigma, self.min_samples, self.min_reps,
                    self.batch_size, self.placement_budget))
