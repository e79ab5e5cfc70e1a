# -*- coding: utf-8 -*-
'''
spikingrl.utils.log
~~~~~~~~~~~~~~~~~~~

Logging levels, formats and setup
'''

# Import python libs
from __future__ import absolute_import
import logging

if not hasattr(logging, 'TRACE'):
    logging.TRACE = 5
    logging.addLevelName(logging.TRACE, 'TRACE')
if not hasattr(logging, 'GARBAGE'):
    logging.GARBAGE = 1
    logging.addLevelName(logging.GARBAGE, 'GARBAGE')

TRACE = logging.TRACE
GARBAGE = logging.GARBAGE

LOG_LEVELS = {
    'all': logging.NOTSET,
    'debug': logging.DEBUG,
    'error': logging.ERROR,
    'critical': logging.CRITICAL,
    'garbage': GARBAGE,
    'info': logging.INFO,
    'quiet': 1000,
    'trace': TRACE,
    'warning': logging.WARNING,
}

CONSOLE_FORMAT = '[%(levelname)-8s][%(name)-5s:%(lineno)-4d] %(message)s'
LOGFILE_FORMAT = '[%(asctime)s,%(msecs)03.0f][%(name)-5s:%(lineno)-4d][%(levelname)-8s] %(message)s'
DATE_FORMAT = '%H:%M:%S'

_HANDLER_MARK = '_spikingrl_handler'

log = logging.getLogger(__name__)


def level_from_name(name):
    '''
    Map a level name (any case) or number to its numeric value
    '''
    if isinstance(name, int):
        return name
    try:
        return LOG_LEVELS[str(name).lower()]
    except KeyError:
        raise ValueError('Unknown log level {!r}, choose from {}'.format(name, ', '.join(sorted(LOG_LEVELS))))


def _tag(handler):
    setattr(handler, _HANDLER_MARK, True)
    return handler


def remove_handlers(logger=None):
    '''
    Detach the handlers a previous :func:`setup_logging` call installed
    '''
    logger = logger or logging.getLogger()
    for handler in list(logger.handlers):
        if getattr(handler, _HANDLER_MARK, False):
            logger.removeHandler(handler)
            handler.close()


def setup_logging(level='info', log_file=None, file_level=None):
    '''
    Send records to stderr at ``level`` and, optionally, to ``log_file`` at ``file_level``
    (the console level by default)
    '''
    root = logging.getLogger()
    remove_handlers(root)
    console_level = level_from_name(level)
    file_level = level_from_name(file_level) if file_level is not None else console_level

    console = _tag(logging.StreamHandler())
    console.setLevel(console_level)
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    root.addHandler(console)
    levels = [console_level]

    if log_file is not None:
        logfile = _tag(logging.FileHandler(log_file, encoding='utf-8'))
        logfile.setLevel(file_level)
        logfile.setFormatter(logging.Formatter(LOGFILE_FORMAT, datefmt=DATE_FORMAT))
        root.addHandler(logfile)
        levels.append(file_level)

    root.setLevel(min(levels))
    log.debug('Logging configured: console=%s, file=%s', logging.getLevelName(console_level), log_file)
    return root
