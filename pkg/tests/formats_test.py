"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

pytest file for the MPS and LP writers and readers
"""
import numpy as np
import pytest

from pymassflow import (
    FormatError,
    MilpModel,
    OBJECTIVE,
    VAR_KIND,
    build_model,
    bundled_names,
    energy_matrix,
    export_lp,
    export_mps,
    load_bundled,
    read_lp,
    read_mps,
)


def _model(name: str, kind='energy') -> MilpModel:
    inst = load_bundled(name)
    return build_model(inst, energy_matrix(inst), kind)


def _by_name(model: MilpModel) -> tuple[dict, dict, dict]:
    "Columns, rows and coefficients keyed by name, independent of column order."
    cols = {name: (int(model.kinds[c]), model.lower[c], model.upper[c], model.objective[c])
            for c, name in enumerate(model.var_names)}
    rows = {name: (int(model.relations[k]), model.rhs[k])
            for k, name in enumerate(model.row_names)}
    coo = model.matrix.tocoo()
    coefs = {(model.row_names[r], model.var_names[c]): v
             for r, c, v in zip(coo.row, coo.col, coo.data)}
    return cols, rows, coefs


def _assert_same(a: MilpModel, b: MilpModel, rel: float = 0.0) -> None:
    cols_a, rows_a, coefs_a = _by_name(a)
    cols_b, rows_b, coefs_b = _by_name(b)
    assert cols_a.keys() == cols_b.keys()
    for name, (kind, lo, up, cost) in cols_a.items():
        assert cols_b[name][:3] == (kind, lo, up), name
        assert cols_b[name][3] == pytest.approx(cost, rel=rel, abs=0), name
    assert rows_a.keys() == rows_b.keys()
    for name, (relation, rhs) in rows_a.items():
        assert rows_b[name][0] == relation
        assert rows_b[name][1] == pytest.approx(rhs, rel=rel, abs=0)
    assert coefs_a.keys() == coefs_b.keys()
    for key, value in coefs_a.items():
        assert coefs_b[key] == pytest.approx(value, rel=rel, abs=0), key


def test_mps_header_and_sections():
    """Test export_mps header, markers and bound lines"""
    text = export_mps(_model('single_station'))
    lines = text.splitlines()
    assert lines[0] == 'NAME          MASSFLOW'
    assert lines[1:3] == ['ROWS', ' N  OBJ']
    for section in ('COLUMNS', 'RHS', 'BOUNDS', 'ENDATA'):
        assert section in lines
    assert "    M0000000  'MARKER'                 'INTORG'" in lines
    assert ' BV BND       Y01' in lines
    assert ' UP BND       Z0101                2' in lines


def test_mps_column_count_matches_model():
    """Test export_mps writes every column once"""
    model = _model('single_station')
    text = export_mps(model)
    columns = text.split('COLUMNS\n')[1].split('RHS\n')[0]
    names = {line.split()[0] for line in columns.splitlines() if "'MARKER'" not in line}
    assert len(names) == model.n_vars == 10


@pytest.mark.parametrize('name', ['single_station', 'counterexample_distance_vs_energy',
                                  'periodic_demo'])
@pytest.mark.parametrize('kind', ['energy', 'distance'])
def test_mps_round_trip(name, kind):
    """Test read_mps rebuilds the model written by export_mps"""
    model = _model(name, kind)
    back = read_mps(export_mps(model))
    assert back.var_names == model.var_names
    assert back.row_names == model.row_names
    _assert_same(model, back, rel=1e-11)
    assert back.n == model.n and back.nt == model.nt
    assert back.kind == model.kind
    assert back.tie_order.tolist() == model.tie_order.tolist()


@pytest.mark.parametrize('name', ['single_station', 'counterexample_distance_vs_energy',
                                  'periodic_demo'])
@pytest.mark.parametrize('kind', ['energy', 'distance'])
def test_lp_round_trip(name, kind):
    """Test read_lp rebuilds the model written by export_lp"""
    model = _model(name, kind)
    back = read_lp(export_lp(model))
    _assert_same(model, back)
    assert back.kind == model.kind
    assert back.name == 'MASSFLOW'


def test_lp_sections():
    """Test export_lp sections and line length"""
    text = export_lp(_model('single_station'))
    lines = text.splitlines()
    assert lines[:2] == ['\\ Problem name: MASSFLOW', 'Minimize']
    assert lines[-1] == 'End'
    for section in ('Subject To', 'Bounds', 'Generals', 'Binaries'):
        assert section in lines
    assert ' 0 <= Z0101 <= 2' in lines
    assert all(len(line) <= 200 for line in lines)


def test_all_bundled_models_export():
    """Test export_mps on every bundled instance"""
    for name in bundled_names():
        assert export_mps(_model(name)).endswith('ENDATA\n')


def test_read_mps_external_layout():
    """Test read_mps on a file written by another tool"""
    text = '\n'.join([
        'NAME          TINY',
        'ROWS',
        ' N  COST',
        ' L  LIM1',
        ' G  LIM2',
        'COLUMNS',
        '    MARKER                 \'MARKER\'                 \'INTORG\'',
        '    X         COST         1.0   LIM1         1.0',
        '    X         LIM2         1.0',
        '    MARKER                 \'MARKER\'                 \'INTEND\'',
        '    W         COST        -2.0   LIM1         1.0',
        'RHS',
        '    RHS       LIM1         4.0   LIM2         1.0',
        'BOUNDS',
        ' UP BND       X            3.0',
        ' MI BND       W',
        'ENDATA',
    ])
    model = read_mps(text)
    assert model.name == 'TINY'
    assert model.var_names == ['X', 'W']
    assert model.kinds.tolist() == [VAR_KIND.INTEGER, VAR_KIND.CONTINUOUS]
    assert model.objective.tolist() == [1.0, -2.0]
    assert model.rhs.tolist() == [4.0, 1.0]
    assert model.upper[0] == 3.0
    assert model.lower[1] == -np.inf
    assert model.matrix.toarray().tolist() == [[1.0, 1.0], [1.0, 0.0]]
    assert model.n == 0 and model.kind == OBJECTIVE.ENERGY


def test_read_lp_external_layout():
    """Test read_lp on a file written by another tool"""
    text = '\n'.join([
        '\\ a comment',
        'Minimize',
        ' cost: 3 x + 2 y',
        'Subject To',
        ' c1: x + y >= 2',
        ' c2: x - y <= -1',
        'Bounds',
        ' x <= 4',
        ' -inf <= y <= 10',
        'Generals',
        ' x',
        'End',
    ])
    model = read_lp(text)
    assert model.var_names == ['x', 'y']
    assert model.objective.tolist() == [3.0, 2.0]
    assert model.rhs.tolist() == [2.0, -1.0]
    assert model.matrix.toarray().tolist() == [[1.0, 1.0], [1.0, -1.0]]
    assert model.upper.tolist() == [4.0, 10.0]
    assert model.lower.tolist() == [0.0, -np.inf]
    assert model.kinds.tolist() == [VAR_KIND.INTEGER, VAR_KIND.CONTINUOUS]


@pytest.mark.parametrize('text', [
    'NAME X\nRANGES\nENDATA\n',
    'NAME X\nROWS\n Q  R1\nENDATA\n',
    'NAME X\nROWS\n N  C\nCOLUMNS\n    A  NOPE  1\nENDATA\n',
    'NAME X\nROWS\n N  C\nCOLUMNS\n    A  C  abc\nENDATA\n',
    'NAME X\nROWS\n N\nENDATA\n',
    'NAME X\nROWS\n N  C\nCOLUMNS\n    A  C\nENDATA\n',
    'NAME X\nROWS\n N  C\nCOLUMNS\n    A  C  1\nBOUNDS\n UP BND\nENDATA\n',
    'NAME X\nROWS\n N  C\nCOLUMNS\n    A  C  1\nBOUNDS\n UP BND A\nENDATA\n',
    'NAME X\nROWS\n N  C\nCOLUMNS\n    A  C  1\nBOUNDS\n FX BND A\nENDATA\n',
])
def test_read_mps_errors(text):
    """Test read_mps raises FormatError on malformed lines"""
    with pytest.raises(FormatError):
        read_mps(text)


@pytest.mark.parametrize('text', [
    'Maximize\n obj: x\nEnd\n',
    'Minimize\n obj: x\nSubject To\n c1: x + 3\nEnd\n',
    ' x + y\n',
    'Minimize\n obj: x\nSubject To\n c1: x <= -\nEnd\n',
    'Minimize\n obj: x\nSubject To\n c1: x <=\nEnd\n',
])
def test_read_lp_errors(text):
    """Test read_lp raises FormatError on malformed text"""
    with pytest.raises(FormatError):
        read_lp(text)
