import hashlib
import io

import pytest

from entropygraph.core import (
    BoundaryOptimum,
    DomainError,
    GuaranteeViolation,
    Infeasible,
    InvalidDegreeSequence,
    NonConvergence,
    SizeGuard,
    read_edge_list,
)
from entropygraph.cli.harness import (
    ArtifactWriter,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_SIZE_GUARD,
    EXIT_VALIDATION,
    ExperimentConfig,
    exit_code,
    run,
    sha256_file,
)


def run_task(task, out_dir, settings, **kwargs):
    config = ExperimentConfig(task, out_dir, **kwargs)
    return run(config, settings=settings, stderr=io.StringIO())


@pytest.mark.parametrize('exc, status', [(SizeGuard('big'), EXIT_SIZE_GUARD),
                                         (NonConvergence('slow'), EXIT_NUMERICAL),
                                         (Infeasible('no'), EXIT_NUMERICAL),
                                         (BoundaryOptimum('edge'), EXIT_NUMERICAL),
                                         (GuaranteeViolation('off'), EXIT_NUMERICAL),
                                         (InvalidDegreeSequence('bad'), EXIT_VALIDATION),
                                         (ValueError('bad'), EXIT_VALIDATION),
                                         (OSError('gone'), EXIT_VALIDATION)])
def test_exit_code(exc, status):
    assert exit_code(exc) == status

# -----------------------------------------------------------------------------
# ExperimentConfig
# -----------------------------------------------------------------------------


def test_config_rejects_unknown_tasks(tmp_path):
    with pytest.raises(DomainError):
        ExperimentConfig('plot', tmp_path)


def test_config_records_defaults(tmp_path):
    config = ExperimentConfig('solve', tmp_path, params={'tol': None, 'max_iter': 5})
    assert config.params == {'max_iter': 5}
    assert config.param('tol', 1e-10) == 1e-10
    assert config.param('max_iter', 100) == 5
    assert config.params == {'max_iter': 5, 'tol': 1e-10}
    assert config.seed == 20160601


def test_config_inputs(tmp_path, cycle_file):
    config = ExperimentConfig('solve', tmp_path, inputs={'degrees': cycle_file,
                                                         'degrees2': None})
    assert config.input_path('degrees') == cycle_file
    with pytest.raises(DomainError):
        config.input_path('degrees2')
    config.inputs['graph'] = tmp_path / 'missing.txt'
    with pytest.raises(OSError):
        config.input_path('graph')


def test_config_state(tmp_path, cycle_file):
    config = ExperimentConfig('trees', tmp_path, inputs={'graph': cycle_file},
                              params={'k': 3}, seed=5, action='fsum')
    state = config.__getstate__()
    assert state['task'] == 'trees'
    assert state['action'] == 'fsum'
    assert state['inputs'] == {'graph': str(cycle_file)}
    assert state['seed'] == 5
    assert config.generator().random() == config.generator().random()

# -----------------------------------------------------------------------------
# ArtifactWriter
# -----------------------------------------------------------------------------


@pytest.mark.parametrize('value, text', [(True, 'true'),
                                         (False, 'false'),
                                         (0.5, '0.5'),
                                         (0.1, '0.10000000000000001'),
                                         (float('inf'), 'inf'),
                                         (3, '3'),
                                         ('L_g', 'L_g')])
def test_format_value(artifact_writer, value, text):
    assert artifact_writer.format_value(value) == text


def test_write_csv_records_hashes(artifact_writer):
    path = artifact_writer.write_csv('table.csv', ('k', 'value'), [(1, 0.5), (2, True)])
    assert path.read_text() == 'k,value\n1,0.5\n2,true\n'
    record = artifact_writer.files[0]
    assert record['path'] == 'table.csv'
    assert record['size_bytes'] == len(path.read_bytes())
    assert record['sha256'] == hashlib.sha256(path.read_bytes()).hexdigest()
    assert sha256_file(path) == record['sha256']


def test_write_table_as_json(tmp_path, read_json):
    writer = ArtifactWriter(tmp_path, output_format='json')
    path = writer.write_table('rows', ('a', 'b'), [(1, 2)])
    assert path.name == 'rows.json'
    assert read_json(path) == [{'a': 1, 'b': 2}]

# -----------------------------------------------------------------------------
# Tasks
# -----------------------------------------------------------------------------


def test_trees_enumerate(tmp_path, settings, read_json):
    out = tmp_path / 'trees'
    status = run_task('trees', out, settings, params={'k': 3}, action='enumerate')
    assert status == EXIT_OK
    assert (out / 'trees.csv').read_text() == ('tree_id,edges\n1,1-2 1-3\n'
                                               '2,1-2 2-3\n3,1-3 2-3\n')
    manifest = read_json(out / 'manifest.json')
    assert manifest['exit_code'] == 0
    assert manifest['error'] is None
    assert manifest['config']['params'] == {'k': 3}
    assert [f['path'] for f in manifest['files']] == ['trees.csv']


def test_trees_fsum(tmp_path, settings):
    graph = tmp_path / 'square.txt'
    graph.write_text('#vertices 4\n1 2\n2 3\n3 4\n1 4\n')
    out = tmp_path / 'fsum'
    status = run_task('trees', out, settings, inputs={'graph': graph}, params={'k': 2},
                      action='fsum')
    assert status == EXIT_OK
    assert (out / 'fsum.csv').read_text() == 'tree_id,F\n1,8\n'


def test_trees_needs_an_action(tmp_path, settings, read_json):
    out = tmp_path / 'trees'
    assert run_task('trees', out, settings, params={'k': 3}) == EXIT_VALIDATION
    assert read_json(out / 'error.json')['error'] == 'DomainError'


def test_size_guard_exit(tmp_path, settings, read_json):
    out = tmp_path / 'big'
    status = run_task('trees', out, settings, params={'k': 12}, action='enumerate')
    assert status == EXIT_SIZE_GUARD
    error = read_json(out / 'error.json')
    assert error['exit_code'] == 2
    assert error['estimate'] == 12 ** 10
    manifest = read_json(out / 'manifest.json')
    assert manifest['exit_code'] == 2
    assert manifest['error'].startswith('SizeGuard')


def test_boundary_degrees_exit_numerical(tmp_path, settings, k4_file):
    out = tmp_path / 'solve'
    assert run_task('solve', out, settings, inputs={'degrees': k4_file}) == EXIT_NUMERICAL
    assert (out / 'error.json').exists()
    assert not (out / 'solution.json').exists()


def test_missing_input_exit_validation(tmp_path, settings):
    assert run_task('solve', tmp_path / 'solve', settings) == EXIT_VALIDATION
    missing = {'degrees': tmp_path / 'nowhere.txt'}
    assert run_task('solve', tmp_path / 'solve2', settings, inputs=missing) == EXIT_VALIDATION


def test_solve(tmp_path, settings, cycle_file, read_json):
    out = tmp_path / 'solve'
    assert run_task('solve', out, settings, inputs={'degrees': cycle_file}) == EXIT_OK
    solution = read_json(out / 'solution.json')
    assert len(solution['r']) == 4
    assert read_json(out / 'manifest.json')['config']['params'] == {'tol': 1e-10,
                                                                    'max_iter': 10000}


def test_check(tmp_path, settings, k4_file, read_json):
    out = tmp_path / 'check'
    assert run_task('check', out, settings, inputs={'degrees': k4_file}) == EXIT_OK
    verdict = read_json(out / 'check.json')
    assert verdict['strict_pass'] is False
    assert verdict['nonstrict_pass'] is True
    assert (out / 'margins.csv').read_text().count('\n') == 5


def test_sample_is_reproducible(tmp_path, settings, cycle_file):
    outputs = []
    for name in ('first', 'second'):
        out = tmp_path / name
        status = run_task('sample', out, settings, inputs={'degrees': cycle_file},
                          params={'method': 'exact_enum', 'count': 3}, seed=9)
        assert status == EXIT_OK
        outputs.append(out)
    for index in (1, 2, 3):
        name = 'sample_{0:04d}.txt'.format(index)
        first = (outputs[0] / name).read_bytes()
        assert first == (outputs[1] / name).read_bytes()
        assert read_edge_list(outputs[0] / name).degrees.tolist() == [2, 2, 2, 2]
    assert (outputs[0] / 'sampler.json').read_bytes() == (outputs[1] / 'sampler.json').read_bytes()


def test_round(tmp_path, settings, read_json):
    weights = tmp_path / 'weights.txt'
    weights.write_text('#bipartite 4 3\n1 5 0.5\n3 5 0.6\n3 6 0.8\n1 6 0.2\n'
                       '3 7 0.9\n2 7 0.5\n4 6 0.3\n')
    out = tmp_path / 'round'
    assert run_task('round', out, settings, inputs={'weights': weights}) == EXIT_OK
    assert (out / 'rounded.txt').read_text() == ('#vertices 7\n#bipartite 4 3\n1 5\n2 7\n'
                                                 '3 5\n3 6\n3 7\n4 6\n')
    assert read_json(out / 'trace.json')['guarantee_holds'] is True


def test_stats(tmp_path, settings, cycle_file, read_json):
    out = tmp_path / 'stats'
    status = run_task('stats', out, settings, inputs={'degrees': cycle_file},
                      params={'k': 3, 'which': 'L_g'})
    assert status == EXIT_OK
    header, row = (out / 'stats.csv').read_text().splitlines()
    assert header == 'statistic,k,n,M,value,stderr,mode,seed'
    fields = row.split(',')
    assert fields[:4] == ['L_g', '3', '4', '8']
    assert abs(float(fields[4]) - 0.5) < 1e-8
    assert read_json(out / 'stats_report.json')['mode'] == 'exact_tiny'


def test_concentrate_edge_family(tmp_path, settings):
    out = tmp_path / 'concentrate'
    status = run_task('concentrate', out, settings,
                      params={'family': 'edge', 'reps': 10000, 'epsilon': [0.5]})
    assert status == EXIT_OK
    header, row = (out / 'concentrate.csv').read_text().splitlines()
    assert header == 'lambda,delta1,delta2,epsilon,bound,empirical,pass'
    assert row.endswith(',true')
