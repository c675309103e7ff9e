# flake8: noqa
# pylint: skip-file
"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

Public package interface for :mod:`pymassflow`.
"""

# Import the implementation module under an internal name so we can
# reference its ``__all__`` attribute for static type checkers like Pylance.
from . import pymassflow as _impl

from .pymassflow import *

# Expose the full list of public names for static analysers.
__all__ = _impl.__all__
