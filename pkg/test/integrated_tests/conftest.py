import pytest


def write_lines(path, lines):
    path.write_text('\n'.join(str(line) for line in lines) + '\n')
    return path


@pytest.fixture(scope='function')
def degrees_file(tmp_path):
    return write_lines(tmp_path / 'degrees.txt', ['# four-cycle', 2, 2, 2, 2])


@pytest.fixture(scope='function')
def strict_degrees_file(tmp_path):
    return write_lines(tmp_path / 'strict.txt', [3, 1, 2, 1, 3, 3, 4, 3])


@pytest.fixture(scope='function')
def boundary_degrees_file(tmp_path):
    # K4 is the only realization: strict Erdos-Gallai fails
    return write_lines(tmp_path / 'k4.txt', [3, 3, 3, 3])


@pytest.fixture(scope='function')
def graph_file(tmp_path):
    return write_lines(tmp_path / 'square.txt', ['#vertices 4', '1 2', '2 3', '3 4', '1 4'])


@pytest.fixture(scope='function')
def weights_file(tmp_path):
    return write_lines(tmp_path / 'weights.txt',
                       ['#bipartite 4 3', '1 5 0.5', '3 5 0.6', '3 6 0.8', '1 6 0.2',
                        '3 7 0.9', '2 7 0.5', '4 6 0.3'])
