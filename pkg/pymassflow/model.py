"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

Mass-flow model of the supplying problem.

Nodes 0 and n+1 are the depot at the start and the end of a tour; stations
are visited in increasing index order so only arcs ``i < j`` exist. For
every period ``t`` the model holds:

    M_ij^t    mass on arc (i, j) in kg, vehicle included    continuous >= 0
    Z_i^t     boxes left at station i                       integer
    IL_i^t    inventory of station i after period t          continuous >= 0
    PHI_ij^t  arc selected                                    binary
    X_i^t     vehicle stops at station i                      binary
    Y^t       a tour is run                                    binary

Column and row names are at most 8 characters: a role code followed by
two base-36 digits per index, e.g. ``M000101`` is M_{0,1}^1.
"""
import logging
from dataclasses import replace

import numpy as np
import scipy.sparse

from ._classes._energy_class import EnergyMatrix
from ._classes._instance_class import Instance
from ._classes._model_class import MilpModel, Solution
from .common import (
    InfeasibleError,
    IntegralityError,
    ModelError,
    _get_literal,
)
from .constants import (
    FAMILY,
    FEASIBILITY_TOL,
    INTEGRALITY_TOL,
    OBJECTIVE,
    Objective_L,
    Objective_M,
    RELATION,
    VAR_KIND,
    VAR_ROLE,
)
from .instance import max_transport_mass

logger = logging.getLogger(__name__)

_B36 = '0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ'

# One letter per role in column names.
_ROLE_CODE = {
    VAR_ROLE.MASS: 'M',
    VAR_ROLE.DELIVERY: 'Z',
    VAR_ROLE.INVENTORY: 'L',
    VAR_ROLE.ARC: 'P',
    VAR_ROLE.STOP: 'X',
    VAR_ROLE.TOUR: 'Y',
}
_CODE_ROLE = {v: k for k, v in _ROLE_CODE.items()}

# Two letters per row kind in row names.
_ROW_CODE = {
    'DF': FAMILY.DEMAND_FLOW,
    'VC': FAMILY.VEHICLE_CAP,
    'SC': FAMILY.STORAGE_CAP,
    'TC': FAMILY.TOUR_COUPLING,
    'VM': FAMILY.VEHICLE_MASS_RETURN,
    'SL': FAMILY.STOP_LINK,
    'AO': FAMILY.ARC_DEGREE,
    'AI': FAMILY.ARC_DEGREE,
    'DO': FAMILY.ARC_DEGREE,
    'DI': FAMILY.ARC_DEGREE,
    'MA': FAMILY.MASS_ARC_LINK,
    'ST': FAMILY.STOP_TOUR,
    'OC': 'objective_cap',
}


def _b36(k: int) -> str:
    if not 0 <= k < 36 * 36:
        raise ModelError(f'index {k} cannot be encoded in a column name')
    return _B36[k // 36] + _B36[k % 36]


def _unb36(text: str) -> int:
    return _B36.index(text[0]) * 36 + _B36.index(text[1])


def var_name(role: str, i=None, j=None, t=None) -> str:
    "Column name of a structured identity."
    return _ROLE_CODE[role] + ''.join(_b36(k) for k in (i, j, t) if k is not None)


def parse_var_name(name: str) -> tuple | None:
    """Structured identity ``(role, i, j, t)`` encoded in a column name, or
    None when the name was not produced by :func:`var_name`."""
    role = _CODE_ROLE.get(name[:1])
    digits = name[1:]
    if role is None or len(digits) % 2 or not all(c in _B36 for c in digits):
        return None
    idx = [_unb36(digits[k:k + 2]) for k in range(0, len(digits), 2)]
    shape = {
        VAR_ROLE.MASS: 3, VAR_ROLE.ARC: 3, VAR_ROLE.DELIVERY: 2,
        VAR_ROLE.INVENTORY: 2, VAR_ROLE.STOP: 2, VAR_ROLE.TOUR: 1,
    }[role]
    if len(idx) != shape:
        return None
    if shape == 3:
        return (role, idx[0], idx[1], idx[2])
    if shape == 2:
        return (role, idx[0], None, idx[1])
    return (role, None, None, idx[0])


def row_family(name: str) -> str:
    "Constraint family encoded in a row name."
    return _ROW_CODE.get(name[:2], 'other')


class _ModelBuilder:
    "Accumulates columns and rows, then freezes them into a MilpModel"
    def __init__(self, name: str):
        self.name = name
        self.var_names: list[str] = []
        self.kinds: list[int] = []
        self.lower: list[float] = []
        self.upper: list[float] = []
        self.cost: list[float] = []
        self.var_index: dict = {}
        self.rows: list[int] = []
        self.cols: list[int] = []
        self.vals: list[float] = []
        self.relations: list[int] = []
        self.rhs: list[float] = []
        self.row_names: list[str] = []

    def add_var(self, role, i=None, j=None, t=None, kind=VAR_KIND.CONTINUOUS,
                lower=0.0, upper=np.inf, cost=0.0) -> int:
        col = len(self.var_names)
        self.var_names.append(var_name(role, i, j, t))
        self.kinds.append(int(kind))
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        self.cost.append(float(cost))
        self.var_index[(role, i, j, t)] = col
        return col

    def add_row(self, name: str, terms: list[tuple[int, float]], relation: RELATION,
                rhs: float) -> int:
        k = len(self.row_names)
        for col, coef in terms:
            if coef != 0:
                self.rows.append(k)
                self.cols.append(col)
                self.vals.append(float(coef))
        self.relations.append(int(relation))
        self.rhs.append(float(rhs))
        self.row_names.append(name)
        return k

    def build(self, **meta) -> MilpModel:
        matrix = scipy.sparse.csr_matrix(
            (self.vals, (self.rows, self.cols)),
            shape=(len(self.row_names), len(self.var_names)))
        matrix.sum_duplicates()
        matrix.sort_indices()
        return MilpModel(
            name=self.name,
            var_names=self.var_names,
            kinds=np.array(self.kinds, dtype=int),
            lower=np.array(self.lower, dtype=float),
            upper=np.array(self.upper, dtype=float),
            objective=np.array(self.cost, dtype=float),
            matrix=matrix,
            relations=np.array(self.relations, dtype=int),
            rhs=np.array(self.rhs, dtype=float),
            row_names=self.row_names,
            row_families=[row_family(r) for r in self.row_names],
            var_index=self.var_index,
            **meta,
        )


def build_model(
        inst: Instance,
        em: EnergyMatrix,
        kind: OBJECTIVE | Objective_L = OBJECTIVE.ENERGY,
        tighten_stops: bool = True,
        ) -> MilpModel:
    """
    Build the mass-flow model of an instance.

    Rows per period: inventory balance, vehicle capacity, storage capacity,
    delivered mass coupling, vehicle mass return, stop linking, arc degree
    (stations and both depot nodes), mass/arc linking with big-M
    ``max_transport_mass(inst)`` and, when ``tighten_stops``, ``X_i <= Y``.

    Args:
        inst (Instance): Valid instance.
        em (EnergyMatrix): Energy matrix of ``inst``.
        kind (OBJECTIVE | str, optional): ``'energy'`` charges ``C_ij`` per kg
            on every arc, depot arcs included; ``'distance'`` charges ``D_ij``
            per selected arc. Defaults to energy.
        tighten_stops (bool, optional): Add the ``X_i <= Y`` rows. Defaults to True.

    Raises:
        ModelError: ``em`` does not have ``inst.n + 2`` nodes.

    Returns:
        MilpModel: The model, immutable.

    Examples:
        >>> model = build_model(inst, energy_matrix(inst), 'energy')
        >>> model.n_vars
        10
    """
    kind = OBJECTIVE(_get_literal(kind, Objective_M))
    n, nt = inst.n, inst.nt
    if em.n_nodes != n + 2:
        raise ModelError(f'energy matrix has {em.n_nodes} nodes, instance needs {n + 2}')

    veh = inst.vehicle
    m_max = max_transport_mass(inst)
    masses = inst.box_masses
    caps = inst.storage_caps
    demands = inst.demands
    sink = n + 1
    arcs = em.arcs()

    b = _ModelBuilder('MASSFLOW')
    for t in range(1, nt + 1):
        for i, j in arcs:
            # Open question on depot arcs: every arc is charged, (0, n+1) included.
            cost = em.cost[i, j] if kind == OBJECTIVE.ENERGY else 0.0
            b.add_var(VAR_ROLE.MASS, i, j, t, cost=cost)
        for i in range(1, n + 1):
            b.add_var(VAR_ROLE.DELIVERY, i, None, t, VAR_KIND.INTEGER,
                      upper=min(caps[i - 1], veh.cap_boxes))
        for i in range(1, n + 1):
            b.add_var(VAR_ROLE.INVENTORY, i, None, t)
        for i, j in arcs:
            cost = em.dist[i, j] if kind == OBJECTIVE.DISTANCE else 0.0
            b.add_var(VAR_ROLE.ARC, i, j, t, VAR_KIND.BINARY, upper=1.0, cost=cost)
        for i in range(1, n + 1):
            b.add_var(VAR_ROLE.STOP, i, None, t, VAR_KIND.BINARY, upper=1.0)
        b.add_var(VAR_ROLE.TOUR, None, None, t, VAR_KIND.BINARY, upper=1.0)

    col = b.var_index

    def tag(code, *idx):
        return code + ''.join(_b36(k) for k in idx)

    for t in range(1, nt + 1):
        y = col[(VAR_ROLE.TOUR, None, None, t)]
        for i in range(1, n + 1):
            z = col[(VAR_ROLE.DELIVERY, i, None, t)]
            il = col[(VAR_ROLE.INVENTORY, i, None, t)]
            il0 = inst.stations[i - 1].initial_inventory
            if t == 1:
                b.add_row(tag('DF', i, t), [(z, 1), (il, -1)], RELATION.EQ,
                          demands[i - 1, 0] - il0)
            else:
                prev = col[(VAR_ROLE.INVENTORY, i, None, t - 1)]
                b.add_row(tag('DF', i, t), [(z, 1), (prev, 1), (il, -1)], RELATION.EQ,
                          demands[i - 1, t - 1])

        b.add_row(tag('VC', t),
                  [(col[(VAR_ROLE.DELIVERY, i, None, t)], 1) for i in range(1, n + 1)]
                  + [(y, -veh.cap_boxes)],
                  RELATION.LE, 0)

        for i in range(1, n + 1):
            z = col[(VAR_ROLE.DELIVERY, i, None, t)]
            if t == 1:
                b.add_row(tag('SC', i, t), [(z, 1)], RELATION.LE,
                          caps[i - 1] - inst.stations[i - 1].initial_inventory)
            else:
                prev = col[(VAR_ROLE.INVENTORY, i, None, t - 1)]
                b.add_row(tag('SC', i, t), [(z, 1), (prev, 1)], RELATION.LE, caps[i - 1])

        for i in range(1, n + 1):
            terms = [(col[(VAR_ROLE.DELIVERY, i, None, t)], masses[i - 1])]
            terms += [(col[(VAR_ROLE.MASS, j, i, t)], -1) for j in range(0, i)]
            terms += [(col[(VAR_ROLE.MASS, i, j, t)], 1) for j in range(i + 1, n + 2)]
            b.add_row(tag('TC', i, t), terms, RELATION.EQ, 0)

        b.add_row(tag('VM', t),
                  [(col[(VAR_ROLE.MASS, i, sink, t)], 1) for i in range(0, n + 1)]
                  + [(y, -veh.m_v)],
                  RELATION.EQ, 0)

        for i in range(1, n + 1):
            b.add_row(tag('SL', i, t),
                      [(col[(VAR_ROLE.DELIVERY, i, None, t)], 1),
                       (col[(VAR_ROLE.STOP, i, None, t)], -caps[i - 1])],
                      RELATION.LE, 0)

        for i in range(1, n + 1):
            x = col[(VAR_ROLE.STOP, i, None, t)]
            b.add_row(tag('AO', i, t),
                      [(col[(VAR_ROLE.ARC, i, j, t)], 1) for j in range(i + 1, n + 2)]
                      + [(x, -1)],
                      RELATION.EQ, 0)
            b.add_row(tag('AI', i, t),
                      [(col[(VAR_ROLE.ARC, j, i, t)], 1) for j in range(0, i)] + [(x, -1)],
                      RELATION.EQ, 0)
        b.add_row(tag('DO', t),
                  [(col[(VAR_ROLE.ARC, 0, j, t)], 1) for j in range(1, n + 2)] + [(y, -1)],
                  RELATION.EQ, 0)
        b.add_row(tag('DI', t),
                  [(col[(VAR_ROLE.ARC, i, sink, t)], 1) for i in range(0, n + 1)] + [(y, -1)],
                  RELATION.EQ, 0)

        for i, j in arcs:
            b.add_row(tag('MA', i, j, t),
                      [(col[(VAR_ROLE.MASS, i, j, t)], 1),
                       (col[(VAR_ROLE.ARC, i, j, t)], -m_max)],
                      RELATION.LE, 0)

        if tighten_stops:
            for i in range(1, n + 1):
                b.add_row(tag('ST', i, t),
                          [(col[(VAR_ROLE.STOP, i, None, t)], 1), (y, -1)],
                          RELATION.LE, 0)

    tie_order = np.array([col[(VAR_ROLE.DELIVERY, i, None, t)]
                          for i in range(1, n + 1) for t in range(1, nt + 1)], dtype=int)
    model = b.build(n=n, nt=nt, kind=kind, tie_order=tie_order,
                    initial_inventory=inst.initial_inventories.astype(float))
    logger.debug('built %s model: %d columns, %d rows, %d nonzeros',
                 kind.name.lower(), model.n_vars, model.n_rows, model.matrix.nnz)
    return model


def with_objective_cap(model: MilpModel, cap: float) -> MilpModel:
    "Copy of ``model`` with the extra row ``objective @ x <= cap``."
    cap_row = scipy.sparse.csr_matrix(model.objective.reshape(1, -1))
    return replace(
        model,
        matrix=scipy.sparse.vstack([model.matrix, cap_row], format='csr'),
        relations=np.append(model.relations, int(RELATION.LE)),
        rhs=np.append(model.rhs, cap),
        row_names=model.row_names + ['OC'],
        row_families=model.row_families + ['objective_cap'],
    )


def row_violations(model: MilpModel, x: np.ndarray, tol: float = FEASIBILITY_TOL) -> np.ndarray:
    """Amount by which each row is violated, scaled tolerance
    ``tol * max(1, |rhs|)`` already subtracted; entries <= 0 hold."""
    lhs = model.matrix @ x
    excess = np.where(model.relations == RELATION.LE, lhs - model.rhs,
                      np.where(model.relations == RELATION.GE, model.rhs - lhs,
                               np.abs(lhs - model.rhs)))
    return excess - tol * np.maximum(1.0, np.abs(model.rhs))


def extract_solution(
        model: MilpModel,
        assignment: np.ndarray,
        tol: float = INTEGRALITY_TOL,
        ) -> Solution:
    """
    Map a variable assignment back to a structured :class:`Solution`.

    Integer and binary values are rounded; the objective is recomputed from
    the rounded assignment.

    Args:
        model (MilpModel): Model built by :func:`build_model`.
        assignment (np.ndarray): One value per column.
        tol (float, optional): Integrality and feasibility tolerance.

    Raises:
        ModelError: Assignment length differs from the column count.
        IntegralityError: An integer column is further than ``tol`` from an integer.
        InfeasibleError: A bound or row is violated beyond tolerance.
    """
    x = np.asarray(assignment, dtype=float)
    if x.shape != (model.n_vars,):
        raise ModelError(f'assignment has {x.size} values, model has {model.n_vars} columns')

    mask = model.integer_mask
    frac = np.abs(x[mask] - np.round(x[mask]))
    if frac.size and frac.max() > tol:
        worst = np.flatnonzero(mask)[int(frac.argmax())]
        raise IntegralityError(
            f'integrality violated: {model.var_names[worst]} = {x[worst]}')
    x = x.copy()
    x[mask] = np.round(x[mask])

    scale = tol * np.maximum(1.0, np.abs(np.where(np.isfinite(model.lower), model.lower, 0)))
    if np.any(x < model.lower - scale) or np.any(x > model.upper + tol * np.maximum(
            1.0, np.abs(np.where(np.isfinite(model.upper), model.upper, 0)))):
        raise InfeasibleError('assignment violates a variable bound')
    excess = row_violations(model, x, tol)
    if excess.size and excess.max() > 0:
        k = int(excess.argmax())
        raise InfeasibleError(f'assignment violates row {model.row_names[k]}')

    sol = Solution.empty(model.n, model.nt, model.kind)
    if model.initial_inventory.size == model.n:
        sol.il[1:model.n + 1, 0] = model.initial_inventory
    for (role, i, j, t), c in model.var_index.items():
        value = x[c]
        if role == VAR_ROLE.MASS:
            sol.m_flow[i, j, t] = value
        elif role == VAR_ROLE.ARC:
            sol.arc[i, j, t] = value
        elif role == VAR_ROLE.DELIVERY:
            sol.z[i, t] = value
        elif role == VAR_ROLE.INVENTORY:
            sol.il[i, t] = value
        elif role == VAR_ROLE.STOP:
            sol.stop[i, t] = value
        elif role == VAR_ROLE.TOUR:
            sol.tour[t] = value
    sol.objective_value = float(model.objective @ x)
    return sol


def solution_vector(model: MilpModel, sol: Solution) -> np.ndarray:
    "Inverse of :func:`extract_solution`: one value per model column."
    x = np.zeros(model.n_vars)
    for (role, i, j, t), c in model.var_index.items():
        if role == VAR_ROLE.MASS:
            x[c] = sol.m_flow[i, j, t]
        elif role == VAR_ROLE.ARC:
            x[c] = sol.arc[i, j, t]
        elif role == VAR_ROLE.DELIVERY:
            x[c] = sol.z[i, t]
        elif role == VAR_ROLE.INVENTORY:
            x[c] = sol.il[i, t]
        elif role == VAR_ROLE.STOP:
            x[c] = sol.stop[i, t]
        elif role == VAR_ROLE.TOUR:
            x[c] = sol.tour[t]
    return x


__all__ = [
    'MilpModel',
    'Solution',
    'build_model',
    'extract_solution',
    'solution_vector',
    'with_objective_cap',
    'row_violations',
    'var_name',
    'parse_var_name',
    'row_family',
]
