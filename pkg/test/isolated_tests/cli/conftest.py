import pytest

from entropygraph.core import (
    SerializationManager,
)
from entropygraph.cli.harness import ArtifactWriter


@pytest.fixture(scope='function')
def serialization():
    return SerializationManager('json')


@pytest.fixture(scope='function')
def read_json(serialization):
    def read(path):
        return serialization.deserialize(path.read_bytes())
    return read


@pytest.fixture(scope='function')
def artifact_writer(tmp_path):
    return ArtifactWriter(tmp_path / 'out')


@pytest.fixture(scope='function')
def cycle_file(tmp_path):
    path = tmp_path / 'cycle.txt'
    path.write_text('2,2,2,2\n')
    return path


@pytest.fixture(scope='function')
def k4_file(tmp_path):
    path = tmp_path / 'k4.txt'
    path.write_text('3\n3\n3\n3\n')
    return path
