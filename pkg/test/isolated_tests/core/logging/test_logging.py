import logging
from datetime import datetime

import numpy as np
import pytz
import rapidjson

from entropygraph.core import (
    JSONFormatter,
    build_logconfig,
    load_logconfig,
)
from entropygraph.core.logging.formatters import to_builtin


def make_record(msg='solved', **extra):
    record = logging.LogRecord('entropygraph.core.entropy', logging.INFO, __file__, 10,
                               msg, None, None)
    record.__dict__.update(extra)
    return record


def test_json_formatter_writes_one_object():
    line = JSONFormatter().format(make_record(n=8))
    payload = rapidjson.loads(line)
    assert payload['message'] == 'solved'
    assert payload['level'] == 'INFO'
    assert payload['logger'] == 'entropygraph.core.entropy'
    assert payload['n'] == 8
    assert 'time' in payload


def test_json_formatter_converts_numpy_extra():
    line = JSONFormatter().format(make_record(residual=np.float64(0.5),
                                              r=np.array([1.0, 2.0])))
    payload = rapidjson.loads(line)
    assert payload['residual'] == 0.5
    assert payload['r'] == [1.0, 2.0]


def test_json_formatter_includes_traceback():
    try:
        raise ValueError('boom')
    except ValueError:
        import sys
        record = make_record()
        record.exc_info = sys.exc_info()
    payload = rapidjson.loads(JSONFormatter().format(record))
    assert 'ValueError: boom' in payload['traceback']


def test_to_builtin_datetime_and_nesting():
    stamp = datetime(2016, 6, 1, tzinfo=pytz.utc)
    assert to_builtin(stamp) == '2016-06-01T00:00:00+00:00'
    assert to_builtin({1: (np.int64(2), [np.bool_(True)])}) == {'1': [2, [True]]}


def test_build_logconfig_console_only():
    config = build_logconfig()
    assert set(config['handlers']) == {'console'}
    assert config['handlers']['console']['formatter'] == 'print_format'
    assert config['loggers']['entropygraph']['level'] == 'INFO'


def test_build_logconfig_json_console(settings):
    config = build_logconfig(settings, json_console=True)
    assert config['handlers']['console']['formatter'] == 'json_format'


def test_build_logconfig_with_log_dir(tmp_path):
    class FileSettings:
        LOGGING_CONFIG = {'level': 'WARNING', 'log_dir': str(tmp_path)}

    config = build_logconfig(FileSettings())
    assert {'debug_file_handler', 'info_file_handler',
            'error_file_handler'} <= set(config['handlers'])
    assert config['loggers']['entropygraph']['level'] == 'DEBUG'
    assert config['handlers']['error_file_handler']['filename'].endswith('errors.log')


def test_load_logconfig_creates_log_dir(tmp_path):
    log_dir = tmp_path / 'logs'

    class FileSettings:
        LOGGING_CONFIG = {'level': 'INFO', 'log_dir': str(log_dir)}

    load_logconfig(FileSettings())
    try:
        assert log_dir.is_dir()
    finally:
        load_logconfig()
