"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.
"""
from typing import Any

from ._exceptions import (
    MassFlowException,
    InstanceError,
    ModelError,
    SolverError,
    InfeasibleError,
    IntegralityError,
    OracleLimitError,
    FormatError,
)


class LimitWarning(UserWarning):
    "Warning a solve stopped on a time or node limit."


class DualityWarning(UserWarning):
    "Warning a child LP bound fell below its parent bound beyond tolerance."


def _get_literal(variable: str | Any, map_dict: dict, type_fail=False) -> int:
    """Checks if typing Literal variable is in corresponding map
    and returns enum value.

    Args:
        variable (str | Any): Variable to find in map dict.
        map_dict (dict): Dict to search for variable.
        type_fail (bool, optional): If True, if not a string, raise exception.
            Defaults to False.

    Raises:
        MassFlowException: Raises if value not in dict.

    Returns:
        int: Enum value matching the name.
    """
    if not isinstance(variable, str) and type_fail is False:
        return variable
    elif isinstance(variable, str):
        variable = variable.lower()
        if variable in map_dict:
            return map_dict[variable]
    raise MassFlowException(f'Variable \'{variable}\' not in {list(map_dict.keys())}')


__all__ = [
    'MassFlowException',
    'InstanceError',
    'ModelError',
    'SolverError',
    'InfeasibleError',
    'IntegralityError',
    'OracleLimitError',
    'FormatError',
    'LimitWarning',
    'DualityWarning',
    '_get_literal',
]
