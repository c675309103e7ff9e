"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

pytest file for package configuration and overrides
"""
import logging
import shutil

import pytest

import pymassflow as pmf
from pymassflow._config import _conf

logger = logging.getLogger('pymassflow')


@pytest.fixture(autouse=True)
def restore_config():
    saved = dict(vars(_conf))
    level = logger.level
    yield
    vars(_conf).update(saved)
    logger.setLevel(level)


def test_set_log_level():
    """Test set_log_level sets the package logger level"""
    pmf.set_log_level('debug')
    assert logger.level == logging.DEBUG
    assert _conf.log_level == 'debug'
    pmf.set_log_level('QUIET')
    assert logger.level == logging.WARNING


def test_set_log_level_adds_one_handler():
    """Test repeated set_log_level calls keep a single package handler"""
    pmf.set_log_level('info')
    pmf.set_log_level('debug')
    ours = [h for h in logger.handlers if getattr(h, '_pymassflow', False)]
    assert len(ours) == 1


def test_set_log_level_from_environment(monkeypatch):
    """Test set_log_level reads MASSFLOW_LOG when no level is given"""
    monkeypatch.setenv('MASSFLOW_LOG', 'debug')
    pmf.set_log_level()
    assert logger.level == logging.DEBUG
    monkeypatch.delenv('MASSFLOW_LOG')
    pmf.set_log_level()
    assert logger.level == logging.INFO


def test_set_log_level_rejects_unknown_level():
    """Test set_log_level with a level name that does not exist"""
    with pytest.raises(pmf.MassFlowException):
        pmf.set_log_level('verbose')


def test_override_instance_directory(tmp_path):
    """Test load_bundled and bundled_names follow the overridden directory"""
    shutil.copy(f'{_conf.instance_directory}/single_station.json', tmp_path / 'mine.json')
    pmf.override_instance_directory(str(tmp_path))
    assert pmf.bundled_names() == ['mine']
    assert pmf.load_bundled('mine').n == 1


def test_override_instance_directory_missing(tmp_path):
    """Test override_instance_directory with a directory that does not exist"""
    with pytest.raises(pmf.MassFlowException):
        pmf.override_instance_directory(str(tmp_path / 'missing'))


def test_override_workers():
    """Test override_workers sets the default worker count and rejects zero"""
    pmf.override_workers(3)
    assert _conf.workers == 3
    with pytest.raises(pmf.MassFlowException):
        pmf.override_workers(0)
    assert _conf.workers == 3
