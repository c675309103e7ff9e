"""
These functions allow you to override the pyMassFlow package settings and configuration.
"""
import logging
import os

from ._exceptions import MassFlowException
from .constants import LogLevel_L

_LOG_LEVELS = {
    'quiet': logging.WARNING,
    'info': logging.INFO,
    'debug': logging.DEBUG,
}

logger = logging.getLogger('pymassflow')


class _Configuration:
    "Configuration and overrides of pyMassFlow"
    def __init__(self):
        self.instance_directory = os.path.join(os.path.dirname(__file__), 'data')
        self.log_level = 'quiet'
        self.workers = 1


_conf = _Configuration()


def set_log_level(level: LogLevel_L | None = None) -> None:
    """
    Set the verbosity of the ``pymassflow`` logger.

    Records are written to standard error. When ``level`` is None the
    ``MASSFLOW_LOG`` environment variable is read, falling back to ``'info'``.

    Args:
        level (str, optional): One of ``'quiet'``, ``'info'`` or ``'debug'``.

    Examples:
        >>> import pymassflow as pmf
        >>> pmf.set_log_level('debug')
    """
    if level is None:
        level = os.environ.get('MASSFLOW_LOG', 'info')
    level = level.lower()
    if level not in _LOG_LEVELS:
        raise MassFlowException(
            f'Log level "{level}" not in {list(_LOG_LEVELS.keys())}')

    if not any(getattr(h, '_pymassflow', False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter('%(asctime)s %(name)s %(levelname)s %(message)s'))
        handler._pymassflow = True  # pylint: disable=W0212
        logger.addHandler(handler)
    logger.setLevel(_LOG_LEVELS[level])
    _conf.log_level = level


def override_instance_directory(directory: str) -> None:
    """
    Use this to specify the directory bundled instances are loaded from.

    Args:
        directory (str): Directory containing ``<name>.json`` instance files.

    Examples:
        >>> import pymassflow as pmf
        >>> pmf.override_instance_directory('./my_instances')
    """
    if not os.path.isdir(directory):
        raise MassFlowException(
            f'Directory "{directory}" does not exist. Please use a different directory.')
    _conf.instance_directory = directory


def override_workers(workers: int) -> None:
    """
    Set the default number of branch-and-bound workers.

    Args:
        workers (int): Worker threads evaluating open nodes, at least 1.
    """
    if workers < 1:
        raise MassFlowException(f'Workers must be at least 1, got {workers}.')
    _conf.workers = workers
