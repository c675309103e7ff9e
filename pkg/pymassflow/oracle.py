"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

Exhaustive reference solver for tiny instances.

A plan only decides how many boxes each station receives per period. The
route order is fixed, so stops, arcs and the mass carried on every leg
follow directly: the leg leaving node ``u`` carries the vehicle plus every
box still to be dropped after ``u``.
"""
import logging

import numpy as np

from ._classes._energy_class import EnergyMatrix
from ._classes._instance_class import Instance
from ._classes._model_class import Solution
from ._classes._plan_class import DeliveryPlan
from .common import InfeasibleError, ModelError, OracleLimitError, _get_literal
from .constants import (
    OBJECTIVE,
    ORACLE_MAX_PERIODS,
    ORACLE_MAX_STATIONS,
    ORACLE_MAX_STORAGE,
    Objective_L,
    Objective_M,
)

logger = logging.getLogger(__name__)

_TIE_TOL = 1e-9


def _check_dimensions(inst: Instance, em: EnergyMatrix, plan: DeliveryPlan | None = None):
    if em.n_nodes != inst.n + 2:
        raise ModelError(f'energy matrix has {em.n_nodes} nodes, instance needs {inst.n + 2}')
    if plan is not None and (plan.n, plan.nt) != (inst.n, inst.nt):
        raise ModelError(f'plan is {plan.n}x{plan.nt}, instance is {inst.n}x{inst.nt}')


def plan_inventories(inst: Instance, plan: DeliveryPlan) -> np.ndarray:
    """
    Inventories induced by a plan, ``IL^t = IL^{t-1} + z^t - d^t``.

    Returns:
        np.ndarray: Shape ``(n + 1, nt + 1)``, column 0 holding the initial
        inventories. No feasibility check is made.
    """
    il = np.zeros((inst.n + 1, inst.nt + 1))
    il[1:, 0] = inst.initial_inventories
    demands = inst.demands
    for t in range(1, inst.nt + 1):
        il[1:, t] = il[1:, t - 1] + plan.z[1:, t] - demands[:, t - 1]
    return il


def plan_violations(inst: Instance, plan: DeliveryPlan) -> list[str]:
    """
    Reasons a plan is infeasible for an instance, empty when it is feasible.

    Examples:
        >>> plan_violations(inst, DeliveryPlan.zeros(inst.n, inst.nt))
        ['station 1: negative inventory at period 1']
    """
    issues = []
    il = plan_inventories(inst, plan)
    caps = inst.storage_caps
    for t in range(1, inst.nt + 1):
        load = int(plan.z[1:, t].sum())
        if load > inst.vehicle.cap_boxes:
            issues.append(f'period {t}: {load} boxes exceed vehicle capacity')
        for i in range(1, inst.n + 1):
            if plan.z[i, t] < 0:
                issues.append(f'station {i}: negative delivery at period {t}')
            if plan.z[i, t] + il[i, t - 1] > caps[i - 1]:
                issues.append(f'station {i}: storage exceeded at period {t}')
            if il[i, t] < 0:
                issues.append(f'station {i}: negative inventory at period {t}')
    return issues


def _legs(inst: Instance, plan: DeliveryPlan, t: int) -> list[tuple[int, int, float]]:
    "``(u, v, mass)`` for every leg of the tour of period ``t``, empty without deliveries."
    stops = plan.stops(t)
    if not stops:
        return []
    nodes = [0] + stops + [inst.n + 1]
    masses = inst.box_masses
    load = float(sum(masses[i - 1] * plan.z[i, t] for i in stops))
    legs = []
    for u, v in zip(nodes[:-1], nodes[1:]):
        legs.append((u, v, inst.vehicle.m_v + load))
        if v <= inst.n:
            load -= masses[v - 1] * plan.z[v, t]
    return legs


def plan_energy(inst: Instance, em: EnergyMatrix, plan: DeliveryPlan) -> float:
    """
    Energy of a plan by direct mass accounting (J).

    Args:
        inst (Instance): Instance the plan belongs to.
        em (EnergyMatrix): Energy matrix of ``inst``.
        plan (DeliveryPlan): Plan to evaluate.

    Raises:
        InfeasibleError: The plan breaks a capacity, storage or inventory rule.

    Returns:
        float: Sum over legs of ``C_uv`` times the carried mass.

    Examples:
        >>> plan_energy(inst, em, DeliveryPlan.from_rows([[2]]))
        3559.325
    """
    _check_dimensions(inst, em, plan)
    issues = plan_violations(inst, plan)
    if issues:
        raise InfeasibleError(f'infeasible plan: {issues[0]}')
    return float(sum(em.cost[u, v] * mass
                     for t in range(1, inst.nt + 1) for u, v, mass in _legs(inst, plan, t)))


def plan_distance(inst: Instance, em: EnergyMatrix, plan: DeliveryPlan) -> float:
    """
    Distance driven by a plan (m): one loop per period with a delivery.

    Raises:
        InfeasibleError: The plan breaks a capacity, storage or inventory rule.
    """
    _check_dimensions(inst, em, plan)
    issues = plan_violations(inst, plan)
    if issues:
        raise InfeasibleError(f'infeasible plan: {issues[0]}')
    return float(sum(em.dist[u, v]
                     for t in range(1, inst.nt + 1) for u, v, _ in _legs(inst, plan, t)))


def _station_sequences(inst: Instance, i: int) -> list[np.ndarray]:
    "Deliveries to station ``i`` keeping its inventory within bounds, ascending."
    s = inst.stations[i - 1]
    upper = min(s.storage_cap, inst.vehicle.cap_boxes)
    out = []

    def extend(t, stock, prefix):
        if t > inst.nt:
            out.append(np.array(prefix, dtype=int))
            return
        d = s.demand[t - 1]
        for z in range(max(0, d - stock), min(upper, s.storage_cap - stock) + 1):
            extend(t + 1, stock + z - d, prefix + [z])

    extend(1, s.initial_inventory, [])
    return out


def enumerate_optimal(
        inst: Instance,
        em: EnergyMatrix,
        kind: OBJECTIVE | Objective_L = OBJECTIVE.ENERGY,
        ) -> tuple[DeliveryPlan, float]:
    """
    Best plan by depth-first enumeration of every feasible plan.

    Stations are enumerated in index order, each over its feasible delivery
    sequences in ascending order, pruning on the vehicle capacity. Among plans
    of equal objective the lexicographically smallest station-major ``z`` wins.

    Args:
        inst (Instance): Instance with at most 4 stations, 3 periods and
            storage capacities of at most 4 boxes.
        em (EnergyMatrix): Energy matrix of ``inst``.
        kind (OBJECTIVE | str, optional): ``'energy'`` or ``'distance'``.

    Raises:
        OracleLimitError: The instance exceeds the enumeration limits.
        InfeasibleError: No feasible plan exists.

    Returns:
        tuple[DeliveryPlan, float]: Optimal plan and its objective.

    Examples:
        >>> plan, value = enumerate_optimal(inst, em, 'energy')
        >>> value
        3559.325
    """
    kind = OBJECTIVE(_get_literal(kind, Objective_M))
    _check_dimensions(inst, em)
    if inst.n > ORACLE_MAX_STATIONS or inst.nt > ORACLE_MAX_PERIODS \
            or (inst.n and inst.storage_caps.max() > ORACLE_MAX_STORAGE):
        raise OracleLimitError(
            f'instance with n={inst.n}, nt={inst.nt}, max storage '
            f'{inst.storage_caps.max(initial=0)} exceeds the enumeration limits '
            f'({ORACLE_MAX_STATIONS}, {ORACLE_MAX_PERIODS}, {ORACLE_MAX_STORAGE})')

    sequences = [_station_sequences(inst, i) for i in range(1, inst.n + 1)]
    cap_boxes = inst.vehicle.cap_boxes
    plan = DeliveryPlan.zeros(inst.n, inst.nt)
    best = {'plan': None, 'value': np.inf, 'count': 0}

    def evaluate():
        legs = [leg for t in range(1, inst.nt + 1) for leg in _legs(inst, plan, t)]
        if kind == OBJECTIVE.ENERGY:
            value = float(sum(em.cost[u, v] * mass for u, v, mass in legs))
        else:
            value = float(sum(em.dist[u, v] for u, v, _ in legs))
        best['count'] += 1
        if value < best['value'] - _TIE_TOL * max(1.0, abs(best['value'])) \
                or best['plan'] is None:
            best['plan'] = DeliveryPlan(plan.z.copy())
            best['value'] = value

    def search(i, load):
        if i > inst.n:
            evaluate()
            return
        for seq in sequences[i - 1]:
            total = load + seq
            if (total > cap_boxes).any():
                continue
            plan.z[i, 1:] = seq
            search(i + 1, total)
        plan.z[i, 1:] = 0

    search(1, np.zeros(inst.nt, dtype=int))
    logger.debug('enumerated %d feasible plans', best['count'])
    if best['plan'] is None:
        raise InfeasibleError('no feasible delivery plan exists')
    return best['plan'], best['value']


def solution_from_plan(
        inst: Instance,
        em: EnergyMatrix,
        plan: DeliveryPlan,
        kind: OBJECTIVE | Objective_L = OBJECTIVE.ENERGY,
        ) -> Solution:
    """
    Full variable assignment induced by a plan.

    Feasibility is not checked, so fault injection can start from any plan.

    Args:
        inst (Instance): Instance the plan belongs to.
        em (EnergyMatrix): Energy matrix of ``inst``.
        plan (DeliveryPlan): Plan to expand.
        kind (OBJECTIVE | str, optional): Objective stored in the solution.

    Returns:
        Solution: Stops, arcs, masses, inventories and objective of the plan.
    """
    kind = OBJECTIVE(_get_literal(kind, Objective_M))
    _check_dimensions(inst, em, plan)
    sol = Solution.empty(inst.n, inst.nt, kind)
    il = plan_inventories(inst, plan)
    sol.z[:inst.n + 1, :] = plan.z
    sol.z[0, :] = 0
    sol.il[:inst.n + 1, :] = il
    value = 0.0
    for t in range(1, inst.nt + 1):
        for i in plan.stops(t):
            sol.stop[i, t] = 1
        for u, v, mass in _legs(inst, plan, t):
            sol.arc[u, v, t] = 1
            sol.m_flow[u, v, t] = mass
            value += em.cost[u, v] * mass if kind == OBJECTIVE.ENERGY else em.dist[u, v]
        sol.tour[t] = 1 if plan.stops(t) else 0
    sol.objective_value = float(value)
    return sol


__all__ = [
    'DeliveryPlan',
    'plan_inventories',
    'plan_violations',
    'plan_energy',
    'plan_distance',
    'enumerate_optimal',
    'solution_from_plan',
]
