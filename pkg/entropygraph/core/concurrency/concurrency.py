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
from concurrent.futures import ThreadPoolExecutor
import logging
import os

import numpy as np

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = 'ENTROPYGRAPH_THREADS'


def worker_count(env_var=THREADS_ENV_VAR, requested=None):
    """
    Number of worker threads: ``requested`` if given, else the value of the
    environment variable, else the machine's parallelism.  Always >= 1.
    """
    if requested is None:
        raw = os.environ.get(env_var)
        if raw:
            try:
                requested = int(raw)
            except ValueError:
                msg = 'ignoring non-integer {0}={1!r}'.format(env_var, raw)
                logger.warning(msg)
    if requested is None:
        requested = os.cpu_count() or 1
    return max(1, int(requested))


def spawn_generators(seed, count):
    """
    ``count`` independent numpy Generators derived from one seed.  Replica i
    always receives the same stream for the same seed.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


class ReplicaExecutor:
    """
    Runs independent replicas of a randomized task, each with its own
    generator, and returns the results in replica order so that aggregation
    does not depend on scheduling.
    """

    def __init__(self, workers=None, env_var=THREADS_ENV_VAR):
        self.workers = worker_count(env_var, workers)

    def map(self, func, seed, replicas, *args, **kwargs):
        """
        :param func: called as func(rng, replica_index, *args, **kwargs)
        :param seed: master seed
        :param replicas: number of replicas
        :returns: list of results ordered by replica index
        """
        rngs = spawn_generators(seed, replicas)
        if self.workers == 1 or replicas <= 1:
            return [func(rng, index, *args, **kwargs) for index, rng in enumerate(rngs)]

        with ThreadPoolExecutor(max_workers=min(self.workers, replicas)) as pool:
            futures = [pool.submit(func, rng, index, *args, **kwargs)
                       for index, rng in enumerate(rngs)]
            return [future.result() for future in futures]

    def run_all(self, tasks):
        """
        Run heterogeneous zero-argument callables concurrently.

        :returns: list of results in the order of ``tasks``
        """
        if self.workers == 1 or len(tasks) <= 1:
            return [task() for task in tasks]

        with ThreadPoolExecutor(max_workers=min(self.workers, len(tasks))) as pool:
            futures = [pool.submit(task) for task in tasks]
            return [future.result() for future in futures]

    def __repr__(self):
        return 'ReplicaExecutor(workers={0})'.format(self.workers)
