"""
This file contains the solver independent linear model and the structured
solution mapped back from a variable assignment
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse

from ..constants import OBJECTIVE, VAR_KIND


@dataclass(frozen=True, eq=False)
class MilpModel:
    """Mixed integer linear model, ``min c @ x`` subject to
    ``A @ x (<=, =, >=) rhs`` and ``lower <= x <= upper``.

    Attributes:
        name: Model name written to exported files.
        var_names: Column names, unique.
        kinds: :class:`VAR_KIND` per column.
        lower: Column lower bounds, may be ``-inf``.
        upper: Column upper bounds, may be ``inf``.
        objective: Objective coefficients, sense is minimise.
        matrix: Constraint matrix, CSR of shape (rows, columns).
        relations: :class:`RELATION` per row.
        rhs: Right hand side per row.
        row_names: Row names, unique.
        row_families: Constraint family per row.
        var_index: Structured identity ``(role, i, j, t)`` to column.
        n: Number of stations of the instance the model was built from.
        nt: Number of periods.
        kind: Objective the model was built for.
        tie_order: Columns compared, in order, when breaking ties lexicographically.
        initial_inventory: Inventory of stations 1..n before period 1, empty when unknown.
    """
    name: str
    var_names: list[str]
    kinds: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    objective: np.ndarray
    matrix: scipy.sparse.csr_matrix
    relations: np.ndarray
    rhs: np.ndarray
    row_names: list[str]
    row_families: list[str]
    var_index: dict = field(default_factory=dict)
    n: int = 0
    nt: int = 0
    kind: OBJECTIVE = OBJECTIVE.ENERGY
    tie_order: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    initial_inventory: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def n_vars(self) -> int:
        "Number of columns."
        return len(self.var_names)

    @property
    def n_rows(self) -> int:
        "Number of constraint rows."
        return len(self.row_names)

    @property
    def integer_mask(self) -> np.ndarray:
        "True for integer and binary columns."
        return self.kinds != VAR_KIND.CONTINUOUS

    def column(self, role: str, i=None, j=None, t=None) -> int:
        "Column index of a structured identity."
        return self.var_index[(role, i, j, t)]

    def row_terms(self, k: int) -> list[tuple[int, float]]:
        "``(column, coefficient)`` pairs of row ``k``."
        start, end = self.matrix.indptr[k], self.matrix.indptr[k + 1]
        return list(zip(self.matrix.indices[start:end].tolist(),
                        self.matrix.data[start:end].tolist()))


@dataclass(eq=False)
class Solution:
    """Values of a solved supplying model.

    Arrays are indexed with the model's 1-based station and period numbers,
    index 0 of a period axis being unused (``il[:, 0]`` holds the initial
    inventories). Shapes: ``z, il, stop`` are ``(n + 2, nt + 1)``,
    ``m_flow, arc`` are ``(n + 2, n + 2, nt + 1)``, ``tour`` is ``(nt + 1,)``.
    """
    n: int
    nt: int
    kind: OBJECTIVE
    z: np.ndarray
    m_flow: np.ndarray
    il: np.ndarray
    stop: np.ndarray
    arc: np.ndarray
    tour: np.ndarray
    objective_value: float = 0.0

    @classmethod
    def empty(cls, n: int, nt: int, kind: OBJECTIVE = OBJECTIVE.ENERGY) -> 'Solution':
        "All-zero solution of the given dimensions."
        return cls(
            n=n, nt=nt, kind=kind,
            z=np.zeros((n + 2, nt + 1)),
            m_flow=np.zeros((n + 2, n + 2, nt + 1)),
            il=np.zeros((n + 2, nt + 1)),
            stop=np.zeros((n + 2, nt + 1)),
            arc=np.zeros((n + 2, n + 2, nt + 1)),
            tour=np.zeros(nt + 1),
        )

    def copy(self) -> 'Solution':
        "Deep copy, used to inject faults in tests without touching the original."
        return Solution(self.n, self.nt, self.kind, self.z.copy(), self.m_flow.copy(),
                        self.il.copy(), self.stop.copy(), self.arc.copy(), self.tour.copy(),
                        self.objective_value)

    @property
    def tour_count(self) -> int:
        "Number of periods with a tour."
        return int(round(self.tour[1:].sum()))

    def stops(self, t: int) -> list[int]:
        "Stations visited in period ``t``, in route order."
        return [i for i in range(1, self.n + 1) if self.stop[i, t] > 0.5]

    def route(self, t: int) -> list[int]:
        "Nodes of the tour of period ``t`` following the selected arcs, empty without a tour."
        if self.tour[t] < 0.5:
            return []
        nodes, node = [0], 0
        while node != self.n + 1:
            nxt = [j for j in range(node + 1, self.n + 2) if self.arc[node, j, t] > 0.5]
            if not nxt:
                break
            node = nxt[0]
            nodes.append(node)
        return nodes

    def tour_summaries(self) -> list[dict]:
        "Per period summary: tour flag, stops, boxes delivered, mass leaving the depot."
        return [
            {
                't': t,
                'tour': bool(self.tour[t] > 0.5),
                'stops': self.stops(t),
                'boxes': int(round(self.z[1:self.n + 1, t].sum())),
                'departure_mass': float(self.m_flow[0, :, t].sum()),
            }
            for t in range(1, self.nt + 1)
        ]
