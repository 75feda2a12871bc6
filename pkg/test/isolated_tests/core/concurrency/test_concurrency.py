import numpy as np

from entropygraph.core import (
    spawn_generators,
    worker_count,
)


def draw_five(rng, index, offset=0):
    return index + offset, rng.integers(1000, size=5).tolist()


def test_worker_count_prefers_request(monkeypatch):
    monkeypatch.setenv('ENTROPYGRAPH_THREADS', '3')
    assert worker_count(requested=2) == 2


def test_worker_count_reads_env(monkeypatch):
    monkeypatch.setenv('ENTROPYGRAPH_THREADS', '3')
    assert worker_count() == 3


def test_worker_count_ignores_garbage(monkeypatch, caplog):
    monkeypatch.setenv('ENTROPYGRAPH_THREADS', 'many')
    assert worker_count() >= 1
    assert 'ignoring non-integer' in caplog.text


def test_worker_count_at_least_one():
    assert worker_count(requested=0) == 1


def test_spawn_generators_are_reproducible():
    first = [rng.random() for rng in spawn_generators(7, 3)]
    second = [rng.random() for rng in spawn_generators(7, 3)]
    assert first == second
    assert len(set(first)) == 3


def test_map_is_ordered_and_schedule_free(threaded_executor, serial_executor):
    """
    results come back in replica order and do not depend on the thread count
    """
    threaded = threaded_executor.map(draw_five, 11, 8, offset=100)
    serial = serial_executor.map(draw_five, 11, 8, offset=100)
    assert threaded == serial
    assert [index for index, _ in threaded] == list(range(100, 108))


def test_run_all_keeps_task_order(threaded_executor):
    tasks = [lambda value=value: value * value for value in range(6)]
    assert threaded_executor.run_all(tasks) == [0, 1, 4, 9, 16, 25]


def test_executor_repr(serial_executor):
    assert repr(serial_executor) == 'ReplicaExecutor(workers=1)'


def test_map_single_replica_runs_inline(threaded_executor):
    result = threaded_executor.map(lambda rng, index: isinstance(rng, np.random.Generator), 1, 1)
    assert result == [True]
