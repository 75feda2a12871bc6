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


class SamplerSettings:
    """
    SamplerSettings is a settings proxy for SAMPLER_CONFIG.  Burn-in and
    thinning are expressed as multiples of n^2 proposed moves.
    """
    def __init__(self, settings=None):
        sampler_config = section(settings, 'SAMPLER_CONFIG')
        enumeration_config = sampler_config.get('enumeration') or {}
        rejection_config = sampler_config.get('rejection') or {}

        self.seed = int(sampler_config.get('seed', 20160601))
        self.burn_in_factor = int(sampler_config.get('burn_in_factor', 10))
        self.thinning_factor = int(sampler_config.get('thinning_factor', 1))
        self.degree_one_warning_fraction = float(
            sampler_config.get('degree_one_warning_fraction', 0.25))

        self.enumeration_max_n = int(enumeration_config.get('max_n', 10))
        self.enumeration_budget = int(float(enumeration_config.get('budget', 1e7)))
        self.rejection_max_attempts = int(float(rejection_config.get('max_attempts', 1e6)))

    def __repr__(self):
        return ("SamplerSettings(seed={0}, burn_in_factor={1}, thinning_factor={2}, "
                "enumeration_max_n={3})".format(self.seed, self.burn_in_factor,
                                                self.thinning_factor,
                                                self.enumeration_max_n))
