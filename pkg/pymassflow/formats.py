"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

Text exchange formats for :class:`MilpModel`: fixed-form MPS and CPLEX LP.
Both writers produce files accepted by external MILP solvers; both readers
rebuild a model whose structured column identities are recovered from the
generated names.
"""
import re

import numpy as np
import scipy.sparse

from ._classes._model_class import MilpModel
from .common import FormatError
from .constants import OBJECTIVE, RELATION, VAR_KIND, VAR_ROLE
from .model import parse_var_name, row_family

_NAME_WIDTH = 8
_NUMBER_WIDTH = 12
_OBJ_ROW = 'OBJ'
_LP_LINE = 200

_MPS_ROW_TYPE = {RELATION.LE: 'L', RELATION.EQ: 'E', RELATION.GE: 'G'}
_MPS_TYPE_ROW = {v: k for k, v in _MPS_ROW_TYPE.items()}
_LP_OP = {RELATION.LE: '<=', RELATION.EQ: '=', RELATION.GE: '>='}
_LP_OP_READ = {'<=': RELATION.LE, '=<': RELATION.LE, '<': RELATION.LE,
               '>=': RELATION.GE, '=>': RELATION.GE, '>': RELATION.GE,
               '=': RELATION.EQ}


def _number(value: float, width: int = _NUMBER_WIDTH) -> str:
    "Shortest of the most precise renderings fitting ``width`` characters."
    value = float(value)
    if value == 0:
        return '0'
    for digits in range(width, 0, -1):
        text = f'{value:.{digits}g}'
        if len(text) <= width:
            return text
    raise FormatError(f'{value} cannot be written in {width} characters')


def _lp_number(value: float) -> str:
    value = float(value)
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _check_name(name: str) -> str:
    if len(name) > _NAME_WIDTH or not name or ' ' in name:
        raise FormatError(f'name "{name}" does not fit a {_NAME_WIDTH} character field')
    return name


def _mps_line(field1: str, field2: str, field3: str = '', field4: str = '') -> str:
    return f' {field1:<2} {field2:<8}  {field3:<8}  {field4:>12}'.rstrip()


def export_mps(model: MilpModel) -> str:
    """
    Write a model in fixed-form MPS.

    Integer and binary columns are wrapped in ``MARKER INTORG/INTEND``
    pairs; binaries get a ``BV`` bound, other integers an explicit ``UP``.
    Numbers use at most 12 characters.

    Args:
        model (MilpModel): Model to write.

    Raises:
        FormatError: A name does not fit its 8 character field.

    Returns:
        str: MPS text.

    Examples:
        >>> text = export_mps(model)
        >>> text.splitlines()[0]
        'NAME          MASSFLOW'
    """
    lines = [f'NAME          {model.name}', 'ROWS', f' N  {_OBJ_ROW}']
    for name, rel in zip(model.row_names, model.relations):
        lines.append(f' {_MPS_ROW_TYPE[RELATION(rel)]}  {_check_name(name)}')

    lines.append('COLUMNS')
    csc = model.matrix.tocsc()
    in_marker = False
    marker = 0
    for col, name in enumerate(model.var_names):
        _check_name(name)
        integer = model.kinds[col] != VAR_KIND.CONTINUOUS
        if integer != in_marker:
            tag = "'INTORG'" if integer else "'INTEND'"
            lines.append(f"    M{marker:07d}  'MARKER'                 {tag}")
            marker += 1
            in_marker = integer
        entries = []
        if model.objective[col] != 0:
            entries.append((_OBJ_ROW, model.objective[col]))
        start, end = csc.indptr[col], csc.indptr[col + 1]
        entries += [(model.row_names[r], v)
                    for r, v in zip(csc.indices[start:end], csc.data[start:end])]
        if not entries:
            entries.append((_OBJ_ROW, 0.0))
        lines += [_mps_line('', name, row, _number(v)) for row, v in entries]
    if in_marker:
        lines.append(f"    M{marker:07d}  'MARKER'                 'INTEND'")

    lines.append('RHS')
    for name, value in zip(model.row_names, model.rhs):
        if value != 0:
            lines.append(_mps_line('', 'RHS', name, _number(value)))

    bounds = []
    for col, name in enumerate(model.var_names):
        lo, up = model.lower[col], model.upper[col]
        if model.kinds[col] == VAR_KIND.BINARY and lo == 0 and up == 1:
            bounds.append(_mps_line('BV', 'BND', name))
        elif lo == up:
            bounds.append(_mps_line('FX', 'BND', name, _number(lo)))
        elif lo == -np.inf and up == np.inf:
            bounds.append(_mps_line('FR', 'BND', name))
        else:
            if lo == -np.inf:
                bounds.append(_mps_line('MI', 'BND', name))
            elif lo != 0:
                bounds.append(_mps_line('LO', 'BND', name, _number(lo)))
            if up != np.inf:
                bounds.append(_mps_line('UP', 'BND', name, _number(up)))
            elif model.kinds[col] != VAR_KIND.CONTINUOUS:
                bounds.append(_mps_line('PL', 'BND', name))
    if bounds:
        lines.append('BOUNDS')
        lines += bounds
    lines.append('ENDATA')
    return '\n'.join(lines) + '\n'


def _lp_terms(pairs: list[tuple[str, float]]) -> list[str]:
    terms = []
    for name, coef in pairs:
        text = _lp_number(abs(coef))
        sign = '-' if coef < 0 else '+'
        if not terms:
            terms.append(f'{"- " if coef < 0 else ""}{text} {name}')
        else:
            terms.append(f'{sign} {text} {name}')
    return terms


def _wrap(head: str, parts: list[str]) -> list[str]:
    lines, current = [], head
    for part in parts:
        if len(current) + len(part) + 1 > _LP_LINE and current.strip():
            lines.append(current)
            current = '   ' + part
        else:
            current = f'{current} {part}' if current else part
    lines.append(current)
    return lines


def export_lp(model: MilpModel) -> str:
    """
    Write a model in CPLEX LP format.

    Zero objective terms are omitted; an all-zero objective is written as
    ``obj: 0 <first column>``. Long expressions are wrapped.

    Args:
        model (MilpModel): Model to write.

    Returns:
        str: LP text with sections Minimize, Subject To, Bounds, Generals,
        Binaries and End.
    """
    lines = [f'\\ Problem name: {model.name}', 'Minimize']
    obj = [(model.var_names[c], model.objective[c]) for c in range(model.n_vars)
           if model.objective[c] != 0]
    if obj:
        lines += _wrap(' obj:', _lp_terms(obj))
    elif model.n_vars:
        lines.append(f' obj: 0 {model.var_names[0]}')
    else:
        lines.append(' obj:')

    lines.append('Subject To')
    for k, name in enumerate(model.row_names):
        terms = [(model.var_names[c], v) for c, v in model.row_terms(k)]
        parts = _lp_terms(terms) if terms else [f'0 {model.var_names[0]}']
        parts += [_LP_OP[RELATION(model.relations[k])], _lp_number(model.rhs[k])]
        lines += _wrap(f' {name}:', parts)

    lines.append('Bounds')
    for col, name in enumerate(model.var_names):
        lo, up = model.lower[col], model.upper[col]
        if model.kinds[col] == VAR_KIND.BINARY and lo == 0 and up == 1:
            continue
        if lo == 0 and up == np.inf:
            continue
        if lo == up:
            lines.append(f' {name} = {_lp_number(lo)}')
        elif lo == -np.inf and up == np.inf:
            lines.append(f' {name} free')
        elif up == np.inf:
            lines.append(f' {name} >= {_lp_number(lo)}')
        else:
            low = '-inf' if lo == -np.inf else _lp_number(lo)
            lines.append(f' {low} <= {name} <= {_lp_number(up)}')

    generals = [n for c, n in enumerate(model.var_names)
                if model.kinds[c] == VAR_KIND.INTEGER
                or (model.kinds[c] == VAR_KIND.BINARY
                    and not (model.lower[c] == 0 and model.upper[c] == 1))]
    binaries = [n for c, n in enumerate(model.var_names)
                if model.kinds[c] == VAR_KIND.BINARY
                and model.lower[c] == 0 and model.upper[c] == 1]
    if generals:
        lines.append('Generals')
        lines += _wrap('', generals)
    if binaries:
        lines.append('Binaries')
        lines += _wrap('', binaries)
    lines.append('End')
    return '\n'.join(lines) + '\n'


class _ModelParts:
    "Columns, rows and coefficients collected by a reader"
    def __init__(self, name: str = 'MASSFLOW'):
        self.name = name
        self.col = {}
        self.var_names = []
        self.kinds = []
        self.lower = []
        self.upper = []
        self.cost = []
        self.row = {}
        self.row_names = []
        self.relations = []
        self.rhs = []
        self.entries = {}

    def add_col(self, name: str, kind: VAR_KIND = VAR_KIND.CONTINUOUS) -> int:
        if name not in self.col:
            self.col[name] = len(self.var_names)
            self.var_names.append(name)
            self.kinds.append(int(kind))
            self.lower.append(0.0)
            self.upper.append(np.inf)
            self.cost.append(0.0)
        return self.col[name]

    def add_row(self, name: str, relation: RELATION, where: str) -> int:
        if name in self.row:
            raise FormatError(f'duplicate row "{name}" at {where}')
        self.row[name] = len(self.row_names)
        self.row_names.append(name)
        self.relations.append(int(relation))
        self.rhs.append(0.0)
        return self.row[name]

    def build(self) -> MilpModel:
        rows = [r for r, _ in self.entries]
        cols = [c for _, c in self.entries]
        matrix = scipy.sparse.csr_matrix(
            (list(self.entries.values()), (rows, cols)),
            shape=(len(self.row_names), len(self.var_names)))
        matrix.sort_indices()

        var_index = {}
        for c, name in enumerate(self.var_names):
            ident = parse_var_name(name)
            if ident is not None:
                var_index[ident] = c
        stations = [k[1] for k in var_index if k[0] == VAR_ROLE.DELIVERY]
        periods = [k[3] for k in var_index]
        n = max(stations, default=0)
        nt = max(periods, default=0)
        tie_order = np.array([var_index[(VAR_ROLE.DELIVERY, i, None, t)]
                              for i in range(1, n + 1) for t in range(1, nt + 1)
                              if (VAR_ROLE.DELIVERY, i, None, t) in var_index], dtype=int)
        cost = np.array(self.cost, dtype=float)
        arc_cost = any(cost[c] != 0 for k, c in var_index.items() if k[0] == VAR_ROLE.ARC)
        return MilpModel(
            name=self.name,
            var_names=self.var_names,
            kinds=np.array(self.kinds, dtype=int),
            lower=np.array(self.lower, dtype=float),
            upper=np.array(self.upper, dtype=float),
            objective=cost,
            matrix=matrix,
            relations=np.array(self.relations, dtype=int),
            rhs=np.array(self.rhs, dtype=float),
            row_names=self.row_names,
            row_families=[row_family(r) for r in self.row_names],
            var_index=var_index,
            n=n,
            nt=nt,
            kind=OBJECTIVE.DISTANCE if arc_cost else OBJECTIVE.ENERGY,
            tie_order=tie_order,
        )


def _float(text: str, where: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise FormatError(f'invalid number "{text}" at {where}') from None


def read_mps(text: str) -> MilpModel:
    """
    Parse MPS text into a model.

    Fields are split on whitespace, so names must not contain blanks.
    ``RANGES`` and a second objective row are rejected.

    Args:
        text (str): MPS text, as written by :func:`export_mps` or another tool.

    Raises:
        FormatError: Unknown section, row or bound type, invalid number.

    Returns:
        MilpModel: Model with structured identities recovered from the names.
    """
    parts = _ModelParts()
    objective = None
    section = None
    integer = False
    binaries = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        where = f'line {lineno}'
        if not raw.strip() or raw.startswith('*'):
            continue
        fields = raw.split()
        if not raw[0].isspace():
            section = fields[0].upper()
            if section == 'NAME':
                parts.name = fields[1] if len(fields) > 1 else ''
            elif section == 'ENDATA':
                break
            elif section not in ('ROWS', 'COLUMNS', 'RHS', 'BOUNDS'):
                raise FormatError(f'unsupported section "{fields[0]}" at {where}')
            continue

        if section == 'ROWS':
            if len(fields) != 2:
                raise FormatError(f'expected row type and name at {where}')
            kind, name = fields[0].upper(), fields[1]
            if kind == 'N':
                if objective is not None:
                    raise FormatError(f'second objective row "{name}" at {where}')
                objective = name
            elif kind in _MPS_TYPE_ROW:
                parts.add_row(name, _MPS_TYPE_ROW[kind], where)
            else:
                raise FormatError(f'unknown row type "{fields[0]}" at {where}')
        elif section == 'COLUMNS':
            if len(fields) >= 3 and fields[1] == "'MARKER'":
                integer = fields[2] == "'INTORG'"
                continue
            if len(fields) < 3 or len(fields) % 2 == 0:
                raise FormatError(f'expected column name and row/value pairs at {where}')
            col = parts.add_col(fields[0],
                                VAR_KIND.INTEGER if integer else VAR_KIND.CONTINUOUS)
            for row, value in zip(fields[1::2], fields[2::2]):
                value = _float(value, where)
                if row == objective:
                    parts.cost[col] = value
                elif row in parts.row:
                    if value != 0:
                        parts.entries[(parts.row[row], col)] = value
                else:
                    raise FormatError(f'unknown row "{row}" at {where}')
        elif section == 'RHS':
            pairs = fields[1:] if len(fields) % 2 else fields
            if not pairs:
                raise FormatError(f'expected row/value pairs at {where}')
            for row, value in zip(pairs[0::2], pairs[1::2]):
                if row == objective:
                    continue
                if row not in parts.row:
                    raise FormatError(f'unknown row "{row}" at {where}')
                parts.rhs[parts.row[row]] = _float(value, where)
        elif section == 'BOUNDS':
            if len(fields) < 3:
                raise FormatError(f'expected bound type, bound name and column at {where}')
            kind, name = fields[0].upper(), fields[2]
            if name not in parts.col:
                raise FormatError(f'bound on unknown column "{name}" at {where}')
            col = parts.col[name]
            value = _float(fields[3], where) if len(fields) > 3 else None
            if value is None and kind in ('UP', 'LO', 'FX'):
                raise FormatError(f'bound type "{fields[0]}" needs a value at {where}')
            if kind == 'UP':
                parts.upper[col] = value
            elif kind == 'LO':
                parts.lower[col] = value
            elif kind == 'FX':
                parts.lower[col] = parts.upper[col] = value
            elif kind == 'FR':
                parts.lower[col], parts.upper[col] = -np.inf, np.inf
            elif kind == 'MI':
                parts.lower[col] = -np.inf
            elif kind == 'PL':
                parts.upper[col] = np.inf
            elif kind == 'BV':
                parts.lower[col], parts.upper[col] = 0.0, 1.0
                binaries.add(col)
            else:
                raise FormatError(f'unknown bound type "{fields[0]}" at {where}')
        else:
            raise FormatError(f'data outside a section at {where}')

    for col in binaries:
        parts.kinds[col] = int(VAR_KIND.BINARY)
    return parts.build()


_LP_TOKEN = re.compile(
    r'\s*(?:(?P<label>[A-Za-z_][\w.]*)\s*:'
    r'|(?P<op><=|>=|=<|=>|<|>|=)'
    r'|(?P<sign>[+-])'
    r'|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf(?:inity)?\b)'
    r'|(?P<name>[A-Za-z_][\w.]*))',
    re.IGNORECASE)

_LP_SECTIONS = {
    'minimize': 'objective', 'minimise': 'objective', 'minimum': 'objective',
    'min': 'objective',
    'subject to': 'rows', 'such that': 'rows', 'st': 'rows', 's.t.': 'rows',
    'bounds': 'bounds', 'bound': 'bounds',
    'generals': 'generals', 'general': 'generals', 'gen': 'generals',
    'integers': 'generals',
    'binaries': 'binaries', 'binary': 'binaries', 'bin': 'binaries',
    'end': 'end',
}


def _tokens(text: str, where: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        match = _LP_TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            raise FormatError(f'cannot parse "{text[pos:pos + 20]}" in {where}')
        out.append((match.lastgroup, match.group(match.lastgroup)))
        pos = match.end()
    return out


def _lp_expression(tokens, pos, parts, where):
    "Linear expression from ``tokens[pos]``, stops before an operator."
    terms = {}
    sign, coef = 1.0, None
    while pos < len(tokens) and tokens[pos][0] not in ('op', 'label'):
        kind, value = tokens[pos]
        if kind == 'sign':
            if coef is not None:
                raise FormatError(f'dangling coefficient in {where}')
            sign = sign * (-1.0 if value == '-' else 1.0)
        elif kind == 'num':
            if coef is not None:
                raise FormatError(f'two numbers in a row in {where}')
            coef = _float(value, where)
        else:
            col = parts.add_col(value)
            terms[col] = terms.get(col, 0.0) + sign * (1.0 if coef is None else coef)
            sign, coef = 1.0, None
        pos += 1
    if coef is not None and coef != 0:
        raise FormatError(f'constant term in expression in {where}')
    return terms, pos


def read_lp(text: str) -> MilpModel:
    """
    Parse CPLEX LP text into a model.

    Only minimisation, linear rows with a constant right hand side and the
    Bounds, Generals and Binaries sections are understood.

    Args:
        text (str): LP text, as written by :func:`export_lp`.

    Raises:
        FormatError: Maximisation, unsupported section or syntax error.

    Returns:
        MilpModel: Model with structured identities recovered from the names.
    """
    parts = _ModelParts()
    blocks = {'objective': [], 'rows': [], 'bounds': [], 'generals': [], 'binaries': []}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('\\', 1)[0].strip()
        if not line:
            if raw.lstrip().startswith('\\ Problem name:'):
                parts.name = raw.split(':', 1)[1].strip() or parts.name
            continue
        key = ' '.join(line.lower().split())
        if key in ('maximize', 'maximise', 'maximum', 'max'):
            raise FormatError(f'maximisation is not supported (line {lineno})')
        if key in _LP_SECTIONS:
            section = _LP_SECTIONS[key]
            if section == 'end':
                break
            continue
        if section is None:
            raise FormatError(f'data outside a section at line {lineno}')
        blocks[section].append((lineno, line))

    if blocks['objective']:
        where = f'objective (line {blocks["objective"][0][0]})'
        tokens = _tokens(' '.join(line for _, line in blocks['objective']), where)
        pos = 1 if tokens and tokens[0][0] == 'label' else 0
        terms, pos = _lp_expression(tokens, pos, parts, where)
        if pos != len(tokens):
            raise FormatError(f'unexpected token in {where}')
        for col, coef in terms.items():
            parts.cost[col] = coef

    if blocks['rows']:
        where = f'constraints (line {blocks["rows"][0][0]})'
        tokens = _tokens(' '.join(line for _, line in blocks['rows']), where)
        pos = 0
        while pos < len(tokens):
            name = f'R{len(parts.row_names) + 1}'
            if tokens[pos][0] == 'label':
                name = tokens[pos][1]
                pos += 1
            terms, pos = _lp_expression(tokens, pos, parts, where)
            if pos + 1 >= len(tokens) or tokens[pos][0] != 'op':
                raise FormatError(f'row "{name}" lacks a relation in {where}')
            relation = _LP_OP_READ[tokens[pos][1]]
            pos += 1
            sign = 1.0
            while pos < len(tokens) and tokens[pos][0] == 'sign':
                sign *= -1.0 if tokens[pos][1] == '-' else 1.0
                pos += 1
            if pos >= len(tokens) or tokens[pos][0] != 'num':
                raise FormatError(f'row "{name}" lacks a right hand side in {where}')
            k = parts.add_row(name, relation, where)
            parts.rhs[k] = sign * _float(tokens[pos][1], where)
            pos += 1
            for col, coef in terms.items():
                if coef != 0:
                    parts.entries[(k, col)] = coef

    for lineno, line in blocks['bounds']:
        _lp_bound(line.split(), parts, f'line {lineno}')
    for lineno, line in blocks['generals']:
        for name in line.split():
            parts.kinds[parts.add_col(name)] = int(VAR_KIND.INTEGER)
    for lineno, line in blocks['binaries']:
        for name in line.split():
            col = parts.add_col(name)
            parts.kinds[col] = int(VAR_KIND.BINARY)
            parts.lower[col], parts.upper[col] = 0.0, 1.0
    return parts.build()


def _bound_value(text: str, where: str) -> float:
    lowered = text.lower().lstrip('+')
    if lowered in ('inf', 'infinity'):
        return np.inf
    if lowered in ('-inf', '-infinity'):
        return -np.inf
    return _float(text, where)


def _lp_bound(fields: list[str], parts: _ModelParts, where: str) -> None:
    if len(fields) == 2 and fields[1].lower() == 'free':
        col = parts.add_col(fields[0])
        parts.lower[col], parts.upper[col] = -np.inf, np.inf
    elif len(fields) == 5 and fields[1] in _LP_OP_READ and fields[3] in _LP_OP_READ:
        col = parts.add_col(fields[2])
        parts.lower[col] = _bound_value(fields[0], where)
        parts.upper[col] = _bound_value(fields[4], where)
    elif len(fields) == 3 and fields[1] in _LP_OP_READ:
        relation = _LP_OP_READ[fields[1]]
        if re.match(r'[A-Za-z_]', fields[0]) and fields[0].lower() not in ('inf', 'infinity'):
            col = parts.add_col(fields[0])
            value = _bound_value(fields[2], where)
        else:
            col = parts.add_col(fields[2])
            value = _bound_value(fields[0], where)
            relation = RELATION(-relation)
        if relation == RELATION.EQ:
            parts.lower[col] = parts.upper[col] = value
        elif relation == RELATION.LE:
            parts.upper[col] = value
        else:
            parts.lower[col] = value
    else:
        raise FormatError(f'cannot parse bound "{" ".join(fields)}" at {where}')


__all__ = [
    'export_mps',
    'export_lp',
    'read_mps',
    'read_lp',
]
