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
import os
from logging import config

from entropygraph.core.conf.settings import section
from entropygraph.core.logging.formatters import (
    JSONFormatter,
)


def _file_handler(log_dir, name, level):
    return {
        'class': 'logging.handlers.RotatingFileHandler',
        'level': level,
        'filename': os.path.join(log_dir, name),
        'formatter': 'json_format',
        'maxBytes': 10485760,
        'backupCount': 20,
        'encoding': 'utf8'}


def build_logconfig(settings=None, json_console=False):
    """
    The dictConfig used by the command line.  Rotating JSON file handlers are
    added only when LOGGING_CONFIG names a log directory.

    :param json_console: emit console records through the JSONFormatter
    """
    logging_config = section(settings, 'LOGGING_CONFIG')
    level = logging_config.get('level', 'INFO')
    log_dir = logging_config.get('log_dir')

    handlers = {
        'console': {
            'level': level,
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'json_format' if json_console else 'print_format'},
    }
    if log_dir:
        handlers['debug_file_handler'] = _file_handler(log_dir, 'debug.log', 'DEBUG')
        handlers['info_file_handler'] = _file_handler(log_dir, 'info.log', 'INFO')
        handlers['error_file_handler'] = _file_handler(log_dir, 'errors.log', 'ERROR')

    return {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'print_format': {
                'format': "%(asctime)s\t%(levelname)s:%(name)s\t%(message)s",
            },
            'json_format': {
                '()': JSONFormatter
            }
        },
        'handlers': handlers,
        'loggers': {
            'entropygraph': {
                'level': 'DEBUG' if log_dir else level,
                'handlers': sorted(handlers),
                'propagate': False
            }
        },
        'root': {
            'level': 'WARNING',
            'handlers': ['console']
        }
    }


def load_logconfig(settings=None, json_console=False):
    logging_config = build_logconfig(settings, json_console)
    log_dir = section(settings, 'LOGGING_CONFIG').get('log_dir')
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
    config.dictConfig(logging_config)
    return logging_config
