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
entropygraph command line.  Every subcommand writes its artifacts and a
manifest.json into --out; exit status 1 flags invalid input, 2 a size
guard and 3 a numerical failure (non-convergence or infeasibility).
"""
import argparse
import logging
import os
import sys

from entropygraph.core import (
    EventLogger,
    SamplerMethod,
    Settings,
    event_bus,
    load_logconfig,
    settings_default,
)
from entropygraph.cli.harness import EXIT_VALIDATION, ExperimentConfig, run
from entropygraph.cli.harness_settings import HarnessSettings

logger = logging.getLogger(__name__)

INPUT_NAMES = ('degrees', 'degrees2', 'graph', 'weights')
GLOBAL_NAMES = ('command', 'action', 'seed', 'out', 'format', 'threads', 'settings',
                'log_json')


def _common(parser):
    parser.add_argument('--seed', type=int, default=None, help='master random seed')
    parser.add_argument('--out', default='.', help='output directory')
    parser.add_argument('--format', choices=('csv', 'json'), default=None,
                        help='table output format')


def build_parser():
    parser = argparse.ArgumentParser(prog='entropygraph', description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument('--threads', type=int, default=None,
                        help='worker threads (default: $ENTROPYGRAPH_THREADS or all cores)')
    parser.add_argument('--settings', default=None, help='YAML settings file')
    parser.add_argument('--log-json', action='store_true', help='log records as JSON')
    commands = parser.add_subparsers(dest='command', required=True)

    solve = commands.add_parser('solve', help='fit the maximum-entropy weights')
    solve.add_argument('--degrees', required=True)
    solve.add_argument('--degrees2', help='second margin: fit the bipartite model')
    solve.add_argument('--tol', type=float)
    solve.add_argument('--max-iter', type=int)
    _common(solve)

    check = commands.add_parser('check', help='Erdos-Gallai verdicts')
    check.add_argument('--degrees', required=True)
    check.add_argument('--strict', dest='strict', action='store_true', default=True)
    check.add_argument('--nonstrict', dest='strict', action='store_false')
    check.add_argument('--epsilon', type=float, help='with --nu: classify the type')
    check.add_argument('--nu', type=float)
    _common(check)

    trees = commands.add_parser('trees', help='labeled trees and embedding sums')
    trees.add_argument('action', choices=('enumerate', 'fsum'))
    trees.add_argument('--k', type=int, required=True)
    trees.add_argument('--graph', help='edge-list file (fsum)')
    _common(trees)

    sample = commands.add_parser('sample', help='draw graphs with given degrees')
    sample.add_argument('--degrees', required=True)
    sample.add_argument('--degrees2', help='second margin: bipartite swap chain')
    sample.add_argument('--method', choices=[m.value for m in SamplerMethod])
    sample.add_argument('--count', type=int)
    sample.add_argument('--a', type=float, help='almost-given exponent')
    _common(sample)

    stats = commands.add_parser('stats', help='weighted L discrepancies')
    stats.add_argument('--degrees', required=True)
    stats.add_argument('--degrees2', help='second margin (L_b)')
    stats.add_argument('--k', type=int)
    stats.add_argument('--which', choices=('L_a', 'L_g', 'L_q', 'L_b'))
    stats.add_argument('--mode', choices=('exact_tiny', 'monte_carlo'))
    stats.add_argument('--budget', type=int, help='placements per tree shape')
    stats.add_argument('--samples', type=int, help='graphs per sampled law')
    stats.add_argument('--a', type=float)
    _common(stats)

    concentrate = commands.add_parser('concentrate', help='lower-tail concentration')
    concentrate.add_argument('--family', choices=('edge', 'tree'))
    concentrate.add_argument('--degrees', help='degree file (tree family)')
    concentrate.add_argument('--n', type=int, help='vertices (edge family)')
    concentrate.add_argument('--p', type=float, help='edge probability (edge family)')
    concentrate.add_argument('--k', type=int)
    concentrate.add_argument('--epsilon', type=float, nargs='+')
    concentrate.add_argument('--reps', type=int)
    _common(concentrate)

    rounding = commands.add_parser('round', help='round bipartite weights to 0/1')
    rounding.add_argument('--weights', required=True)
    _common(rounding)

    pipeline = commands.add_parser('pipeline', help='crossing graph plus sampled remainder')
    pipeline.add_argument('--degrees', required=True)
    pipeline.add_argument('--a', type=float)
    pipeline.add_argument('--reps', type=int)
    pipeline.add_argument('--alpha', type=float, help='small-degree threshold exponent')
    _common(pipeline)

    reproduce = commands.add_parser('reproduce', help='run the acceptance suite')
    _common(reproduce)
    return parser


def config_from_args(args):
    values = vars(args)
    inputs = {name: values.get(name) for name in INPUT_NAMES}
    params = {name: value for name, value in values.items()
              if name not in INPUT_NAMES and name not in GLOBAL_NAMES}
    if args.threads is not None:
        params['threads'] = args.threads
    return ExperimentConfig(args.command, args.out, inputs=inputs, params=params,
                            seed=args.seed, output_format=args.format,
                            action=values.get('action'))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        settings = Settings(args.settings) if args.settings else settings_default
    except (OSError, ValueError) as exc:
        sys.stderr.write('error: {0}\n'.format(exc))
        return EXIT_VALIDATION

    if args.threads is not None:
        os.environ[HarnessSettings(settings).threads_env_var] = str(args.threads)
    load_logconfig(settings, json_console=args.log_json)
    # pubsub keeps weak references; hold the listener until the run ends
    event_logger = EventLogger(event_bus)

    try:
        config = config_from_args(args)
    except ValueError as exc:
        sys.stderr.write('error: {0}\n'.format(exc))
        return EXIT_VALIDATION
    logger.debug('running {0!r}'.format(config))
    status = run(config, settings=settings, event_bus=event_bus)
    del event_logger
    return status


if __name__ == '__main__':
    sys.exit(main())
