"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

Sparse JSON solution files. Every array of :class:`Solution` is stored as a
list of ``{"i", "j", "t", "value"}`` records holding only nonzero entries.
"""
import json

import numpy as np

from ._classes._instance_class import Instance
from ._classes._model_class import Solution
from .common import FormatError, ModelError, _get_literal
from .constants import OBJECTIVE, Objective_M

_STATION_ARRAYS = ('z', 'il', 'stop')
_ARC_ARRAYS = ('m_flow', 'arc')


def _index(rec: dict, key: str) -> int:
    value = int(rec[key])
    if value < 0:
        raise ValueError(f'negative index {key}={value}')
    return value


def solution_to_json(sol: Solution) -> str:
    """
    Render a solution as sparse JSON, zero entries omitted.

    Examples:
        >>> text = solution_to_json(sol)
        >>> json.loads(text)['z']
        [{'i': 1, 't': 1, 'value': 2}]
    """
    def number(v):
        v = float(v)
        return int(v) if v.is_integer() else v

    doc = {
        'n': sol.n,
        'nt': sol.nt,
        'objective': OBJECTIVE(sol.kind).name.lower(),
        'objective_value': sol.objective_value,
    }
    for name in _STATION_ARRAYS:
        values = getattr(sol, name)
        doc[name] = [{'i': int(i), 't': int(t), 'value': number(values[i, t])}
                     for i, t in np.argwhere(values) if t > 0]
    doc['tour'] = [{'t': int(t), 'value': number(sol.tour[t])}
                   for t in range(1, sol.nt + 1) if sol.tour[t] != 0]
    for name in _ARC_ARRAYS:
        values = getattr(sol, name)
        doc[name] = [{'i': int(i), 'j': int(j), 't': int(t), 'value': number(values[i, j, t])}
                     for i, j, t in np.argwhere(values) if t > 0]
    return json.dumps(doc, indent=2) + '\n'


def solution_from_json(text: str, inst: Instance | None = None) -> Solution:
    """
    Parse a sparse JSON solution.

    Args:
        text (str): Text written by :func:`solution_to_json`.
        inst (Instance, optional): Instance the solution belongs to. When
            given, dimensions are checked and the initial inventories filled in.

    Raises:
        FormatError: Invalid JSON, missing keys or indices out of range.
        ModelError: Dimensions differ from ``inst``.
    """
    try:
        doc = json.loads(text)
        n, nt = int(doc['n']), int(doc['nt'])
        kind = OBJECTIVE(_get_literal(doc.get('objective', 'energy'), Objective_M))
    except json.JSONDecodeError as exc:
        raise FormatError(f'invalid solution JSON: {exc.msg} '
                          f'(line {exc.lineno}, column {exc.colno})') from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f'invalid solution header: {exc}') from exc
    if inst is not None and (n, nt) != (inst.n, inst.nt):
        raise ModelError(f'solution is {n}x{nt}, instance is {inst.n}x{inst.nt}')

    sol = Solution.empty(n, nt, kind)
    sol.objective_value = float(doc.get('objective_value', 0.0))
    try:
        for name in _STATION_ARRAYS:
            values = getattr(sol, name)
            for rec in doc.get(name, []):
                values[_index(rec, 'i'), _index(rec, 't')] = float(rec['value'])
        for rec in doc.get('tour', []):
            sol.tour[_index(rec, 't')] = float(rec['value'])
        for name in _ARC_ARRAYS:
            values = getattr(sol, name)
            for rec in doc.get(name, []):
                idx = (_index(rec, 'i'), _index(rec, 'j'), _index(rec, 't'))
                values[idx] = float(rec['value'])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f'invalid solution record: {exc}') from exc
    if inst is not None:
        sol.il[1:n + 1, 0] = inst.initial_inventories
    return sol


__all__ = [
    'solution_to_json',
    'solution_from_json',
]
