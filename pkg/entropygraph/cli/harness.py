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
The experiment harness: one ExperimentConfig in, artifacts plus a
manifest.json out.  Identical configs (seed included) write identical
CSV and JSON artifacts; only the manifest's wall time differs.
"""
import csv
import hashlib
import io
import logging
import math
from pathlib import Path
import sys
import time

import numpy as np
import pkg_resources

from entropygraph.core import (
    BipartiteSwapSampler,
    BoundaryOptimum,
    DegreeSequence,
    DomainError,
    EntropyGraphException,
    EnumeratedLaw,
    GuaranteeViolation,
    Infeasible,
    IndependentEdgeLaw,
    NonConvergence,
    SampledLaw,
    SamplerConfig,
    SamplerMethod,
    SerializationManager,
    SizeGuard,
    UniformBernoulliModel,
    WeightedBipartiteGraph,
    almost_degree_sampler,
    check_erdos_gallai,
    classify_type,
    degree_sampler,
    edge_family,
    empirical_lower_tail,
    enumerate_trees,
    format_edge_list,
    janson_parameters,
    lower_bound_pipeline,
    q_model,
    read_edge_list,
    round_to_integral,
    serialize_abcs,
    settings_default,
    solve_bipartite_max_entropy,
    solve_max_entropy,
    tree_family,
    weighted_embedding_sum,
    weighted_l_statistic,
)
from entropygraph.cli.harness_settings import HarnessSettings
from entropygraph.cli.reproduce import run_acceptance_checks

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SIZE_GUARD = 2
EXIT_NUMERICAL = 3

DEFAULT_SEED = 20160601


def library_version():
    try:
        return pkg_resources.get_distribution('entropygraph').version
    except pkg_resources.DistributionNotFound:
        return 'unknown'


def exit_code(exc):
    """Maps a failure onto the harness exit codes."""
    if isinstance(exc, SizeGuard):
        return EXIT_SIZE_GUARD
    if isinstance(exc, (NonConvergence, Infeasible, BoundaryOptimum, GuaranteeViolation)):
        return EXIT_NUMERICAL
    return EXIT_VALIDATION


def sha256_file(path):
    digest = hashlib.sha256()
    with Path(path).open('rb') as stream:
        for chunk in iter(lambda: stream.read(8192), b''):
            digest.update(chunk)
    return digest.hexdigest()


class ExperimentConfig(serialize_abcs.Serializable):
    """
    ``inputs`` maps input names (degrees, degrees2, graph, weights) to
    paths; ``params`` holds the numeric parameters.  Every default a task
    falls back to is written back into ``params`` so the manifest records
    it.
    """

    TASKS = ('solve', 'check', 'trees', 'sample', 'stats', 'concentrate', 'round',
             'pipeline', 'reproduce')

    def __init__(self, task, out_dir, inputs=None, params=None, seed=None,
                 output_format=None, action=None):
        if task not in self.TASKS:
            msg = 'unknown task {0!r}; expected one of {1}'.format(task, ', '.join(self.TASKS))
            raise DomainError(msg)
        self.task = task
        self.action = action
        self.out_dir = Path(out_dir)
        self.inputs = {key: value for key, value in (inputs or {}).items()
                       if value is not None}
        self.params = {key: value for key, value in (params or {}).items()
                       if value is not None}
        self.seed = DEFAULT_SEED if seed is None else int(seed)
        self.output_format = output_format

    def param(self, name, default=None):
        if self.params.get(name) is None:
            self.params[name] = default
        return self.params[name]

    def input_path(self, name):
        try:
            path = Path(self.inputs[name])
        except KeyError:
            msg = 'task {0} needs the --{1} input'.format(self.task, name)
            raise DomainError(msg)
        if not path.exists():
            raise OSError('could not locate: {0}'.format(path))
        return path

    def generator(self):
        return np.random.default_rng(self.seed)

    def __getstate__(self):
        return {'task': self.task,
                'action': self.action,
                'out_dir': str(self.out_dir),
                'inputs': {key: str(value) for key, value in self.inputs.items()},
                'params': self.params,
                'seed': self.seed,
                'output_format': self.output_format}

    def __repr__(self):
        return 'ExperimentConfig(task={0}, seed={1}, out_dir={2})'.format(
            self.task, self.seed, self.out_dir)


class ArtifactWriter:
    """
    Writes artifacts under one directory and remembers each file with its
    content hash for the manifest.
    """

    def __init__(self, out_dir, output_format='csv', float_digits=17):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.output_format = output_format
        self.float_digits = float_digits
        self.serialization = SerializationManager('json')
        self.files = []

    def format_value(self, value):
        if isinstance(value, (bool, np.bool_)):
            return 'true' if value else 'false'
        if isinstance(value, (float, np.floating)):
            value = float(value)
            if not math.isfinite(value):
                return repr(value)
            return '{0:.{1}g}'.format(value, self.float_digits)
        return str(value)

    def _record(self, path):
        self.files.append({'path': path.relative_to(self.out_dir).as_posix(),
                           'size_bytes': path.stat().st_size,
                           'sha256': sha256_file(path)})
        return path

    def write_bytes(self, name, payload):
        path = self.out_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
        return self._record(path)

    def write_text(self, name, text):
        return self.write_bytes(name, text.encode('utf-8'))

    def write_json(self, name, obj):
        return self.write_bytes(name, self.serialization.serialize(obj))

    def write_csv(self, name, header, rows):
        stream = io.StringIO()
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([self.format_value(value) for value in row])
        return self.write_text(name, stream.getvalue())

    def write_table(self, stem, header, rows):
        """CSV or a JSON list of records, per the configured output format."""
        rows = [list(row) for row in rows]
        if self.output_format == 'json':
            return self.write_json(stem + '.json', [dict(zip(header, row)) for row in rows])
        return self.write_csv(stem + '.csv', header, rows)


# -----------------------------------------------------------------------------
# Tasks
# -----------------------------------------------------------------------------

def _degrees(config, name='degrees'):
    return DegreeSequence.from_file(config.input_path(name))


def run_solve(config, writer, settings, event_bus):
    tol = config.param('tol', 1e-10)
    max_iter = config.param('max_iter', 10000)
    D = _degrees(config)
    if 'degrees2' in config.inputs:
        D2 = _degrees(config, 'degrees2')
        solution = solve_bipartite_max_entropy(D, D2, tol=tol, max_iter=max_iter,
                                               settings=settings, event_bus=event_bus)
        state = solution.__getstate__()
        state['r1'] = D.to_original(solution.r1)
        state['r2'] = D2.to_original(solution.r2)
    else:
        solution = solve_max_entropy(D, tol=tol, max_iter=max_iter, settings=settings,
                                     event_bus=event_bus)
        state = solution.__getstate__()
        state['r'] = D.to_original(solution.r)
    writer.write_json('solution.json', state)


def run_check(config, writer, settings, event_bus):
    D = _degrees(config)
    strict = config.param('strict', True)
    report = check_erdos_gallai(D, strict=strict)
    verdict = {'strict_pass': report.strict_pass,
               'nonstrict_pass': report.nonstrict_pass,
               'm_even': report.m_even,
               'is_graphical': report.is_graphical,
               'first_violation': report.first_violation}
    epsilon = config.params.get('epsilon')
    nu = config.params.get('nu')
    if epsilon is not None and nu is not None:
        verdict['type'] = classify_type(D, epsilon, nu)
    writer.write_json('check.json', verdict)
    writer.write_table('margins', ('k', 'lhs', 'rhs'),
                       ((k, lhs, rhs) for k, (lhs, rhs) in
                        enumerate(np.asarray(report.margins).tolist(), start=1)))


def _edge_label(edges):
    return ' '.join('{0}-{1}'.format(u + 1, v + 1) for u, v in edges)


def run_trees(config, writer, settings, event_bus):
    k = config.param('k', 4)
    trees = enumerate_trees(k)
    if config.action == 'enumerate':
        writer.write_table('trees', ('tree_id', 'edges'),
                           ((index, _edge_label(tree.edges))
                            for index, tree in enumerate(trees, start=1)))
    elif config.action == 'fsum':
        graph = read_edge_list(config.input_path('graph'))
        writer.write_table('fsum', ('tree_id', 'F'),
                           ((index, weighted_embedding_sum(tree, graph))
                            for index, tree in enumerate(trees, start=1)))
    else:
        raise DomainError('trees needs the enumerate or fsum action')


def _sampler(config, settings, event_bus):
    method = config.param('method', SamplerMethod.SWITCH_MCMC.value)
    D = _degrees(config)
    if 'degrees2' in config.inputs:
        D2 = _degrees(config, 'degrees2')
        sampler_config = SamplerConfig.for_size(D.n + D2.n, method, config.seed, settings)
        return sampler_config, BipartiteSwapSampler(D, D2, sampler_config, event_bus)
    sampler_config = SamplerConfig.for_size(D.n, method, config.seed, settings)
    if sampler_config.method in (SamplerMethod.EXACT_ENUM, SamplerMethod.SWITCH_MCMC):
        return sampler_config, degree_sampler(D, sampler_config, settings, event_bus)
    a = config.param('a', 0.75)
    return sampler_config, almost_degree_sampler(D, a, sampler_config, settings, event_bus)


def run_sample(config, writer, settings, event_bus):
    count = config.param('count', 10)
    sampler_config, sampler = _sampler(config, settings, event_bus)
    rng = sampler_config.generator()
    width = max(4, len(str(count)))
    for index, graph in enumerate(sampler.samples(count, rng), start=1):
        writer.write_text('sample_{0:0{1}d}.txt'.format(index, width), format_edge_list(graph))
    summary = sampler_config.__getstate__()
    summary['count'] = count
    summary['acceptance'] = sampler.statistics()
    writer.write_json('sampler.json', summary)


def _law_pair(config, D, which, mode, settings):
    rng = config.generator()
    samples = config.param('samples', 1000) if mode == 'monte_carlo' else None
    n = D.n

    def sampled(sampler):
        return SampledLaw(sampler, samples, rng)

    if which == 'L_b':
        D1, D2 = D
        solution = solve_bipartite_max_entropy(D1, D2, settings=settings)
        if mode == 'monte_carlo':
            sampler_config = SamplerConfig.for_size(solution.n, 'switch_mcmc', config.seed,
                                                    settings)
            first = sampled(BipartiteSwapSampler(D1, D2, sampler_config))
        else:
            first = EnumeratedLaw.given_degrees(D, settings)
        return first, IndependentEdgeLaw(solution)

    if which == 'L_a':
        a = config.param('a', 0.75)
        if mode == 'monte_carlo':
            sampler_config = SamplerConfig.for_size(n, 'toggle_mcmc', config.seed, settings)
            first = sampled(almost_degree_sampler(D, a, sampler_config, settings))
        else:
            first = EnumeratedLaw.almost_given_degrees(D, a, settings)
    else:
        if mode == 'monte_carlo':
            sampler_config = SamplerConfig.for_size(n, 'switch_mcmc', config.seed, settings)
            first = sampled(degree_sampler(D, sampler_config, settings))
        else:
            first = EnumeratedLaw.given_degrees(D, settings)

    if which == 'L_q':
        return first, IndependentEdgeLaw(q_model(D), name='q')
    return first, IndependentEdgeLaw(solve_max_entropy(D, settings=settings))


def run_stats(config, writer, settings, event_bus):
    k = config.param('k', 3)
    which = config.param('which', 'L_g')
    mode = config.param('mode', 'exact_tiny')
    budget = config.params.get('budget')
    D = _degrees(config)
    if which == 'L_b':
        D = (D, _degrees(config, 'degrees2'))
    law_pair = _law_pair(config, D, which, mode, settings)
    report = weighted_l_statistic(D, k, law_pair, mode=mode, budget=budget,
                                  rng=config.generator(), which=which, settings=settings)
    degrees = np.concatenate([part.degrees for part in D]) if which == 'L_b' else D.degrees
    writer.write_table('stats', ('statistic', 'k', 'n', 'M', 'value', 'stderr', 'mode', 'seed'),
                       [(which, k, len(degrees), int(degrees.sum()), report.value,
                         report.stderr, mode, config.seed)])
    writer.write_json('stats_report.json', report)


def run_concentrate(config, writer, settings, event_bus):
    family = config.param('family', 'edge')
    reps = config.param('reps', 100000)
    epsilons = config.param('epsilon', [0.1, 0.3, 0.5])
    if not isinstance(epsilons, (list, tuple)):
        epsilons = [epsilons]
    if family == 'edge':
        model = UniformBernoulliModel(config.param('n', 20), config.param('p', 0.3))
        fam = edge_family(model)
    elif family == 'tree':
        D = _degrees(config)
        model = solve_max_entropy(D, settings=settings)
        fam = tree_family(model, D, config.param('k', 3), settings=settings)
    else:
        raise DomainError('family must be edge or tree, got {0!r}'.format(family))

    params = janson_parameters(fam, model)
    rows = []
    for index, epsilon in enumerate(epsilons):
        rng = np.random.default_rng([config.seed, index])
        estimate = empirical_lower_tail(fam, model, epsilon, reps, rng, settings=settings)
        rows.append((params.lam, params.delta1, params.delta2, epsilon, estimate.bound,
                     estimate.empirical, estimate.passed))
    writer.write_table('concentrate', ('lambda', 'delta1', 'delta2', 'epsilon', 'bound',
                                       'empirical', 'pass'), rows)


def run_round(config, writer, settings, event_bus):
    W = WeightedBipartiteGraph.from_file(config.input_path('weights'))
    result = round_to_integral(W, settings, event_bus)
    writer.write_text('rounded.txt', format_edge_list(result.graph))
    trace = result.__getstate__()
    trace['guarantee_holds'] = result.guarantee_holds()
    writer.write_json('trace.json', trace)


def run_pipeline(config, writer, settings, event_bus):
    D = _degrees(config)
    a = config.param('a', 0.8)
    reps = config.param('reps', 10000)
    alpha = config.params.get('alpha')
    report = lower_bound_pipeline(D, a, reps, config.generator(), alpha=alpha,
                                  settings=settings)
    state = report._asdict()
    state.update({'A': [v + 1 for v in report.A], 'J': [v + 1 for v in report.J],
                  'e_passed': report.e_passed, 'f_passed': report.f_passed,
                  'd_to_a_passed': report.d_to_a_passed, 'target_met': report.target_met})
    writer.write_json('pipeline.json', state)


def run_reproduce(config, writer, settings, event_bus):
    workers = config.params.get('threads')
    results = run_acceptance_checks(seed=config.seed, workers=workers, settings=settings,
                                     event_bus=event_bus)
    writer.write_csv('acceptance.csv', ('criterion', 'name', 'hard', 'verdict', 'detail'),
                     ((r.criterion, r.name, r.hard, 'PASS' if r.passed else 'FAIL', r.detail)
                      for r in results))
    if not all(r.passed for r in results if r.hard):
        return EXIT_VALIDATION
    return EXIT_OK


TASK_RUNNERS = {
    'solve': run_solve,
    'check': run_check,
    'trees': run_trees,
    'sample': run_sample,
    'stats': run_stats,
    'concentrate': run_concentrate,
    'round': run_round,
    'pipeline': run_pipeline,
    'reproduce': run_reproduce,
}


# -----------------------------------------------------------------------------
# Entry point
# -----------------------------------------------------------------------------

def _write_error(writer, exc, status):
    payload = {'exit_code': status,
               'error': type(exc).__name__,
               'message': str(exc)}
    for attr in ('estimate', 'budget', 'iterations'):
        value = getattr(exc, attr, None)
        if value is not None:
            payload[attr] = value
    writer.write_json('error.json', payload)


def run(config, settings=None, event_bus=None, stderr=None):
    """
    Dispatches ``config`` to its task and writes manifest.json.

    :returns: the process exit status
    """
    settings = settings_default if settings is None else settings
    stderr = sys.stderr if stderr is None else stderr
    harness_settings = HarnessSettings(settings)
    output_format = config.output_format or harness_settings.output_format
    config.output_format = output_format
    writer = ArtifactWriter(config.out_dir, output_format, harness_settings.float_digits)

    started = time.perf_counter()
    status = EXIT_OK
    error = None
    try:
        outcome = TASK_RUNNERS[config.task](config, writer, settings, event_bus)
        if outcome is not None:
            status = outcome
    except (EntropyGraphException, ValueError, OSError) as exc:
        status = exit_code(exc)
        error = '{0}: {1}'.format(type(exc).__name__, exc)
        logger.error('task {0} failed: {1}'.format(config.task, error))
        stderr.write('error: {0}\n'.format(error))
        _write_error(writer, exc, status)

    manifest = {'config': config,
                'library_version': library_version(),
                'wall_time_seconds': time.perf_counter() - started,
                'exit_code': status,
                'error': error,
                'files': sorted(writer.files, key=lambda info: info['path'])}
    writer.write_json('manifest.json', manifest)
    return status
