"This file contains general classes for pyMassFlow"

from dataclasses import dataclass, field

import numpy as np

from ..constants import SOLVE_STATUS


@dataclass
class SolveLimits:
    """Limits and tolerances of a branch-and-bound run.

    Attributes:
        time_limit: Wall clock limit (s).
        node_limit: Maximum number of nodes evaluated.
        gap_tolerance: Relative gap at which the incumbent is declared optimal.
        integrality_tolerance: Distance to an integer accepted as integral.
        lp_feasibility_tolerance: Primal feasibility tolerance of the simplex.
        workers: Threads evaluating open nodes. Results equal the single worker run.
        lexicographic_ties: Among plans within the gap of the optimum, return the
            one whose tie-break columns are lexicographically smallest.
    """
    time_limit: float = 600.0
    node_limit: int = 1_000_000
    gap_tolerance: float = 1e-6
    integrality_tolerance: float = 1e-6
    lp_feasibility_tolerance: float = 1e-7
    workers: int = 1
    lexicographic_ties: bool = False

    def __post_init__(self):
        for name in ('time_limit', 'node_limit'):
            if not getattr(self, name) >= 0:
                raise ValueError(f'{name} must not be negative, got {getattr(self, name)}')
        for name in ('gap_tolerance', 'integrality_tolerance', 'lp_feasibility_tolerance',
                     'workers'):
            if not getattr(self, name) > 0:
                raise ValueError(f'{name} must be positive, got {getattr(self, name)}')


@dataclass
class SolveStats:
    "Statistics of a branch-and-bound run"
    nodes_explored: int = 0
    lp_iterations: int = 0
    best_bound: float = float('-inf')
    best_incumbent: float = float('inf')
    status: str = SOLVE_STATUS.LIMIT
    wall_time: float = 0.0
    root_bound: float = float('-inf')
    incumbent_history: list[float] = field(default_factory=list)

    @property
    def gap(self) -> float:
        "Relative gap between incumbent and bound, inf without incumbent."
        if self.best_incumbent == float('inf'):
            return float('inf')
        return abs(self.best_incumbent - self.best_bound) / max(1.0, abs(self.best_incumbent))


@dataclass(frozen=True, eq=False)
class Basis:
    """Simplex basis used to warm start a related LP.

    Columns are numbered structural first, then one logical column per row.

    Attributes:
        basic: Basic column of every row position.
        at_upper: Per column, True when a nonbasic column sits at its upper bound.
    """
    basic: np.ndarray
    at_upper: np.ndarray


@dataclass(frozen=True, eq=False)
class LPResult:
    """Result of one LP relaxation solve.

    Attributes:
        status: :class:`LP_STATUS` value.
        objective: Objective value, ``inf`` unless optimal.
        x: Structural column values, None unless optimal.
        basis: Final basis, None when the bounds are contradictory.
        iterations: Simplex iterations, bound flips included.
    """
    status: str
    objective: float
    x: np.ndarray | None
    basis: Basis | None
    iterations: int = 0
