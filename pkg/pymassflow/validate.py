"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

Independent checker for solutions of the supplying model.

Every constraint is evaluated from the raw solution arrays and the instance
data, without going through :class:`MilpModel`, so a bug in the model
builder cannot hide itself.
"""
import numpy as np

from ._classes._energy_class import EnergyMatrix
from ._classes._instance_class import Instance
from ._classes._model_class import Solution
from ._classes._plan_class import Violation
from .common import ModelError, _get_literal
from .constants import (
    FAMILY,
    FEASIBILITY_TOL,
    INTEGRALITY_TOL,
    OBJECTIVE,
    Objective_L,
    Objective_M,
    RELATION,
)
from .instance import max_transport_mass


class _Checker:
    "Collects violations of ``lhs (<=, =, >=) rhs`` rows"
    def __init__(self, tol: float):
        self.tol = tol
        self.violations: list[Violation] = []

    def row(self, family: str, location: tuple, lhs: float, relation: RELATION, rhs: float):
        if relation == RELATION.LE:
            excess = lhs - rhs
        elif relation == RELATION.GE:
            excess = rhs - lhs
        else:
            excess = abs(lhs - rhs)
        if excess > self.tol * max(1.0, abs(rhs)):
            self.violations.append(Violation(family, location, float(excess)))

    def domain(self, location: tuple, value: float, lower: float, upper: float,
               integral: bool = False):
        excess = max(lower - value, value - upper, 0.0)
        limit = self.tol * max(1.0, abs(lower), abs(upper) if np.isfinite(upper) else 0.0)
        if integral and excess == 0:
            excess = abs(value - round(value))
            limit = INTEGRALITY_TOL
        if excess <= limit:
            return
        self.violations.append(Violation(FAMILY.DOMAIN, location, float(excess)))


def _check_shapes(inst: Instance, sol: Solution) -> None:
    n, nt = inst.n, inst.nt
    if (sol.n, sol.nt) != (n, nt):
        raise ModelError(f'solution is {sol.n}x{sol.nt}, instance is {n}x{nt}')
    expected = {
        'z': (n + 2, nt + 1), 'il': (n + 2, nt + 1), 'stop': (n + 2, nt + 1),
        'm_flow': (n + 2, n + 2, nt + 1), 'arc': (n + 2, n + 2, nt + 1), 'tour': (nt + 1,),
    }
    for name, shape in expected.items():
        if getattr(sol, name).shape != shape:
            raise ModelError(f'solution array {name} has shape '
                             f'{getattr(sol, name).shape}, expected {shape}')


def check_feasibility(
        inst: Instance,
        sol: Solution,
        tol: float = FEASIBILITY_TOL,
        ) -> list[Violation]:
    """
    Check a solution against every constraint of the mass-flow model.

    A row holds when ``|lhs - rhs| <= tol * max(1, |rhs|)`` (or the one-sided
    version for inequalities). Initial inventories are taken from the
    instance. The optional ``X <= Y`` tightening is implied by the arc degree
    rows and is not reported separately.

    Args:
        inst (Instance): Instance the solution belongs to.
        sol (Solution): Solution to check.
        tol (float, optional): Relative tolerance. Defaults to 1e-6.

    Raises:
        ModelError: Solution dimensions differ from the instance.

    Returns:
        list[Violation]: Violations, empty when the solution is feasible.

    Examples:
        >>> check_feasibility(inst, sol)
        []
    """
    _check_shapes(inst, sol)
    n, nt = inst.n, inst.nt
    sink = n + 1
    veh = inst.vehicle
    caps = inst.storage_caps
    masses = inst.box_masses
    demands = inst.demands
    m_max = max_transport_mass(inst)
    il0 = inst.initial_inventories
    chk = _Checker(tol)

    for t in range(1, nt + 1):
        prev_il = il0 if t == 1 else sol.il[1:sink, t - 1]

        for i in range(1, n + 1):
            chk.row(FAMILY.DEMAND_FLOW, (i, None, t),
                    sol.z[i, t] + prev_il[i - 1] - sol.il[i, t],
                    RELATION.EQ, demands[i - 1, t - 1])
        chk.row(FAMILY.VEHICLE_CAP, (None, None, t),
                sol.z[1:sink, t].sum() - veh.cap_boxes * sol.tour[t], RELATION.LE, 0)
        for i in range(1, n + 1):
            chk.row(FAMILY.STORAGE_CAP, (i, None, t),
                    sol.z[i, t] + prev_il[i - 1], RELATION.LE, caps[i - 1])
        for i in range(1, n + 1):
            inflow = sol.m_flow[:i, i, t].sum()
            outflow = sol.m_flow[i, i + 1:, t].sum()
            chk.row(FAMILY.TOUR_COUPLING, (i, None, t),
                    masses[i - 1] * sol.z[i, t] - inflow + outflow, RELATION.EQ, 0)
        chk.row(FAMILY.VEHICLE_MASS_RETURN, (None, sink, t),
                sol.m_flow[:sink, sink, t].sum() - veh.m_v * sol.tour[t], RELATION.EQ, 0)
        for i in range(1, n + 1):
            chk.row(FAMILY.STOP_LINK, (i, None, t),
                    sol.z[i, t] - caps[i - 1] * sol.stop[i, t], RELATION.LE, 0)
        for i in range(1, n + 1):
            chk.row(FAMILY.ARC_DEGREE, (i, None, t),
                    sol.arc[i, i + 1:, t].sum() - sol.stop[i, t], RELATION.EQ, 0)
            chk.row(FAMILY.ARC_DEGREE, (None, i, t),
                    sol.arc[:i, i, t].sum() - sol.stop[i, t], RELATION.EQ, 0)
        chk.row(FAMILY.ARC_DEGREE, (0, None, t),
                sol.arc[0, 1:, t].sum() - sol.tour[t], RELATION.EQ, 0)
        chk.row(FAMILY.ARC_DEGREE, (None, sink, t),
                sol.arc[:sink, sink, t].sum() - sol.tour[t], RELATION.EQ, 0)
        for i in range(0, sink):
            for j in range(i + 1, sink + 1):
                chk.row(FAMILY.MASS_ARC_LINK, (i, j, t),
                        sol.m_flow[i, j, t] - m_max * sol.arc[i, j, t], RELATION.LE, 0)

        for i in range(0, sink + 1):
            for j in range(0, sink + 1):
                if j > i:
                    chk.domain((i, j, t), sol.m_flow[i, j, t], 0.0, np.inf)
                    chk.domain((i, j, t), sol.arc[i, j, t], 0.0, 1.0, integral=True)
                else:
                    chk.domain((i, j, t), sol.m_flow[i, j, t], 0.0, 0.0)
                    chk.domain((i, j, t), sol.arc[i, j, t], 0.0, 0.0)
        for i in range(1, n + 1):
            chk.domain((i, None, t), sol.z[i, t], 0.0, np.inf, integral=True)
            chk.domain((i, None, t), sol.il[i, t], 0.0, np.inf)
            chk.domain((i, None, t), sol.stop[i, t], 0.0, 1.0, integral=True)
        for i in (0, sink):
            chk.domain((i, None, t), sol.z[i, t], 0.0, 0.0)
            chk.domain((i, None, t), sol.stop[i, t], 0.0, 0.0)
        chk.domain((None, None, t), sol.tour[t], 0.0, 1.0, integral=True)
    return chk.violations


def recompute_objective(
        inst: Instance,
        em: EnergyMatrix,
        sol: Solution,
        kind: OBJECTIVE | Objective_L = OBJECTIVE.ENERGY,
        ) -> float:
    """
    Objective of a solution from its raw values.

    Args:
        inst (Instance): Instance the solution belongs to.
        em (EnergyMatrix): Energy matrix of ``inst``.
        sol (Solution): Solution to evaluate.
        kind (OBJECTIVE | str, optional): ``'energy'`` gives ``sum C_ij M_ij^t``
            (J), ``'distance'`` gives ``sum D_ij PHI_ij^t`` (m).

    Examples:
        >>> recompute_objective(inst, em, sol, 'energy')
        3559.325
    """
    kind = OBJECTIVE(_get_literal(kind, Objective_M))
    _check_shapes(inst, sol)
    weights = em.cost if kind == OBJECTIVE.ENERGY else em.dist
    values = sol.m_flow if kind == OBJECTIVE.ENERGY else sol.arc
    upper = np.triu(np.ones((em.n_nodes, em.n_nodes)), k=1)
    return float(np.einsum('ij,ijt->', weights * upper, values[:, :, 1:]))


def _stop_penalty_energy(em: EnergyMatrix, sol: Solution, t: int) -> float:
    route = sol.route(t)
    c = em.cost
    return float(sum((c[i, j] + c[j, k] - c[i, k]) * sol.m_flow[j, k, t]
                     for i, j, k in zip(route, route[1:], route[2:])))


def tour_energy_breakdown(inst: Instance, em: EnergyMatrix, sol: Solution) -> list[dict]:
    """
    Split the energy of every period into the part spent moving the empty
    vehicle and the part spent moving boxes, and into acceleration and
    rolling resistance.

    ``stop_penalty`` is the energy the mass carried on past each
    intermediate stop spends because the train stops there,
    ``(C_ij + C_jk - C_ik) * M_jk`` summed over consecutive route nodes
    ``i, j, k``. It is part of ``energy``, not an addend of the other splits.

    Returns:
        list[dict]: One record per period with keys ``t, energy, vehicle,
        payload, traction, rolling, stop_penalty`` (J).

    Examples:
        >>> tour_energy_breakdown(inst, em, sol)[0]['stop_penalty']
        1127.375
    """
    _check_shapes(inst, sol)
    upper = np.triu(np.ones((em.n_nodes, em.n_nodes)), k=1)
    records = []
    for t in range(1, inst.nt + 1):
        mass = sol.m_flow[:, :, t] * upper
        energy = float((em.cost * mass).sum())
        vehicle = float((em.cost * sol.arc[:, :, t] * upper).sum() * inst.vehicle.m_v)
        records.append({
            't': t,
            'energy': energy,
            'vehicle': vehicle,
            'payload': energy - vehicle,
            'traction': float((em.traction * mass).sum()),
            'rolling': float((em.rolling * mass).sum()),
            'stop_penalty': _stop_penalty_energy(em, sol, t),
        })
    return records


def violations_tsv(violations: list[Violation]) -> str:
    "Violations as tab separated lines with a header, as printed by the CLI."
    lines = ['family\ti\tj\tt\tmagnitude'] + [v.tsv() for v in violations]
    return '\n'.join(lines) + '\n'


__all__ = [
    'Violation',
    'check_feasibility',
    'recompute_objective',
    'tour_energy_breakdown',
    'violations_tsv',
]
