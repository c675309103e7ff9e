"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

LP relaxation and branch-and-bound solver for :class:`MilpModel`.

The LP solver is a bounded-variable primal simplex. Every row gets a logical
column (``A x + s = rhs``) bounded ``[0, inf)`` for ``<=`` rows,
``(-inf, 0]`` for ``>=`` rows and ``[0, 0]`` for equality rows, so the all
logical basis is always available as a cold start. Infeasible starting
bases, including warm starts after a bound change, are repaired by a
composite phase one minimising the sum of bound violations.
"""
import heapq
import logging
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._classes._general import Basis, LPResult, SolveLimits, SolveStats
from ._classes._model_class import MilpModel, Solution
from ._config import _conf
from .common import (
    DualityWarning,
    InfeasibleError,
    LimitWarning,
    SolverError,
)
from .constants import LP_STATUS, RELATION, SOLVE_STATUS
from .model import extract_solution, with_objective_cap

logger = logging.getLogger(__name__)

_PIVOT_TOL = 1e-9
_DUAL_TOL = 1e-9
_REFACTOR_EVERY = 100
_BLAND_AFTER = 1000
_DUALITY_TOL = 1e-7


class _LpData:
    "Dense constraint matrix of a model with one logical column per row"
    def __init__(self, model: MilpModel):
        self.m = model.n_rows
        self.n = model.n_vars
        self.a = np.hstack([model.matrix.toarray(), np.eye(self.m)])
        self.b = np.asarray(model.rhs, dtype=float)
        self.slack_lo = np.where(model.relations == RELATION.GE, -np.inf, 0.0)
        self.slack_up = np.where(model.relations == RELATION.LE, np.inf, 0.0)

    def invert(self, basic: np.ndarray) -> np.ndarray:
        try:
            return scipy.linalg.inv(self.a[:, basic])
        except (scipy.linalg.LinAlgError, ValueError) as exc:
            raise SolverError(f'numerical breakdown: singular basis ({exc})') from exc


def _nonbasic_values(lo: np.ndarray, up: np.ndarray, at_upper: np.ndarray) -> np.ndarray:
    val = np.where(at_upper & np.isfinite(up), up, lo)
    return np.where(np.isfinite(val), val, np.where(np.isfinite(up), up, 0.0))


def _start_basis(data: _LpData, warm: Basis | None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    total = data.n + data.m
    if warm is not None and len(warm.basic) == data.m and len(warm.at_upper) == total:
        basic = np.array(warm.basic, dtype=int)
        try:
            b_inv = data.invert(basic)
            if np.all(np.isfinite(b_inv)):
                return basic, np.array(warm.at_upper, dtype=bool), b_inv
        except SolverError:
            pass
        logger.debug('warm start basis rejected, starting from the logical basis')
    basic = np.arange(data.n, total)
    return basic, np.zeros(total, dtype=bool), np.eye(data.m)


def _simplex(
        data: _LpData,
        cost: np.ndarray,
        lower: np.ndarray,
        upper: np.ndarray,
        warm: Basis | None,
        tol: float,
        ) -> LPResult:
    m, n = data.m, data.n
    total = n + m
    lo = np.concatenate([lower, data.slack_lo])
    up = np.concatenate([upper, data.slack_up])
    if np.any(lo > up + tol):
        return LPResult(LP_STATUS.INFEASIBLE, np.inf, None, None, 0)

    a, b = data.a, data.b
    c = np.concatenate([cost, np.zeros(m)])
    dual_tol = _DUAL_TOL * max(1.0, float(np.abs(cost).max(initial=0.0)))
    basic, at_upper, b_inv = _start_basis(data, warm)
    is_basic = np.zeros(total, dtype=bool)
    is_basic[basic] = True

    max_iter = max(10_000, 50 * (m + total))
    iterations = degenerate = since_refactor = 0
    bland = False
    while True:
        if iterations >= max_iter:
            raise SolverError(f'simplex iteration limit {max_iter} reached')

        x = _nonbasic_values(lo, up, at_upper)
        x[is_basic] = 0.0
        x_b = b_inv @ (b - a @ x)
        x[basic] = x_b
        lo_b, up_b = lo[basic], up[basic]
        below = x_b < lo_b - tol
        above = x_b > up_b + tol
        phase_one = bool(below.any() or above.any())

        if phase_one:
            y = (above.astype(float) - below.astype(float)) @ b_inv
            d = -(y @ a)
            d_tol = _DUAL_TOL
        else:
            y = c[basic] @ b_inv
            d = c - y @ a
            d_tol = dual_tol
        d[is_basic] = 0.0

        can_up = ~is_basic & (x < up)
        can_down = ~is_basic & (x > lo)
        eligible = np.flatnonzero((can_up & (d < -d_tol)) | (can_down & (d > d_tol)))
        if eligible.size == 0:
            if since_refactor:
                b_inv = data.invert(basic)
                since_refactor = 0
                continue
            basis = Basis(basic.copy(), at_upper.copy())
            if phase_one:
                return LPResult(LP_STATUS.INFEASIBLE, np.inf, None, basis, iterations)
            return LPResult(LP_STATUS.OPTIMAL, float(cost @ x[:n]), x[:n].copy(), basis,
                            iterations)

        if bland:
            j = int(eligible[0])
        else:
            j = int(eligible[np.argmax(np.abs(d[eligible]))])
        direction = 1.0 if d[j] < 0 else -1.0

        alpha = b_inv @ a[:, j]
        rate = -direction * alpha
        limit = np.full(m, np.inf)
        hits_upper = np.zeros(m, dtype=bool)
        dec = rate < -_PIVOT_TOL
        inc = rate > _PIVOT_TOL
        inside = ~below & ~above
        # Violated basics stop at the bound they violate.
        sel = dec & above
        limit[sel] = (x_b[sel] - up_b[sel]) / -rate[sel]
        hits_upper[sel] = True
        sel = dec & inside & np.isfinite(lo_b)
        limit[sel] = (x_b[sel] - lo_b[sel]) / -rate[sel]
        sel = inc & below
        limit[sel] = (lo_b[sel] - x_b[sel]) / rate[sel]
        sel = inc & inside & np.isfinite(up_b)
        limit[sel] = (up_b[sel] - x_b[sel]) / rate[sel]
        hits_upper[sel] = True
        limit = np.maximum(limit, 0.0)

        ratio = float(limit.min(initial=np.inf))
        flip = up[j] - lo[j]
        iterations += 1
        if not np.isfinite(min(ratio, flip)):
            if phase_one:
                raise SolverError('numerical breakdown: phase one ray')
            return LPResult(LP_STATUS.UNBOUNDED, -np.inf, None,
                            Basis(basic.copy(), at_upper.copy()), iterations)

        step = min(ratio, flip)
        if step <= tol:
            degenerate += 1
            if not bland and degenerate > _BLAND_AFTER:
                logger.debug('switching to smallest index pricing after %d degenerate pivots',
                             degenerate)
                bland = True

        if flip <= ratio:
            at_upper[j] = direction > 0
            continue

        ties = np.flatnonzero(limit <= ratio + 1e-12)
        if bland:
            r = int(ties[np.argmin(basic[ties])])
        else:
            r = int(ties[np.argmax(np.abs(alpha[ties]))])
        leaving = basic[r]
        at_upper[leaving] = hits_upper[r]
        is_basic[leaving] = False
        at_upper[j] = False
        is_basic[j] = True
        basic[r] = j

        pivot_row = b_inv[r] / alpha[r]
        b_inv -= np.outer(alpha, pivot_row)
        b_inv[r] = pivot_row
        since_refactor += 1
        if since_refactor >= _REFACTOR_EVERY:
            b_inv = data.invert(basic)
            since_refactor = 0


def solve_lp(
        model: MilpModel,
        warm_start: Basis | None = None,
        *,
        lower: np.ndarray | None = None,
        upper: np.ndarray | None = None,
        objective: np.ndarray | None = None,
        tol: float = 1e-7,
        ) -> LPResult:
    """
    Solve the LP relaxation of a model, integrality ignored.

    Args:
        model (MilpModel): Model to relax.
        warm_start (Basis, optional): Basis of a related solve. A singular or
            mismatched basis silently falls back to the logical basis.
        lower (np.ndarray, optional): Column lower bounds replacing the model's.
        upper (np.ndarray, optional): Column upper bounds replacing the model's.
        objective (np.ndarray, optional): Cost vector replacing the model's.
        tol (float, optional): Primal feasibility tolerance. Defaults to 1e-7.

    Raises:
        SolverError: Singular basis or iteration limit.

    Returns:
        LPResult: Status, objective, primal values and final basis.

    Examples:
        >>> res = solve_lp(build_model(inst, energy_matrix(inst)))
        >>> res.status
        'optimal'
    """
    data = _LpData(model)
    return _simplex(
        data,
        model.objective if objective is None else np.asarray(objective, dtype=float),
        model.lower if lower is None else np.asarray(lower, dtype=float),
        model.upper if upper is None else np.asarray(upper, dtype=float),
        warm_start,
        tol,
    )


@dataclass
class _Node:
    bound: float
    depth: int
    lower: np.ndarray
    upper: np.ndarray
    basis: Basis | None


class _BranchAndBound:
    """Best-bound search over one objective; children are warm started
    from their parent's basis."""
    def __init__(self, data: _LpData, cost: np.ndarray, integer_mask: np.ndarray,
                 limits: SolveLimits, stats: SolveStats, deadline: float):
        self.data = data
        self.cost = cost
        self.integer_cols = np.flatnonzero(integer_mask)
        self.limits = limits
        self.stats = stats
        self.deadline = deadline
        self.incumbent = None
        self.value = np.inf
        self.floor = np.inf
        self._heap = []
        self._nodes = {}
        self._seq = 0

    def _push(self, node: _Node) -> None:
        heapq.heappush(self._heap, (node.bound, -node.depth, self._seq))
        self._nodes[self._seq] = node
        self._seq += 1

    def _threshold(self) -> float:
        if self.incumbent is None:
            return np.inf
        return self.value - self.limits.gap_tolerance * max(1.0, abs(self.value))

    def _prunable(self, bound: float) -> bool:
        if bound >= self._threshold():
            self.floor = min(self.floor, bound)
            return True
        return False

    def _limit_hit(self) -> bool:
        return (self.stats.nodes_explored >= self.limits.node_limit
                or time.perf_counter() >= self.deadline)

    def _solve(self, node: _Node) -> LPResult:
        return _simplex(self.data, self.cost, node.lower, node.upper, node.basis,
                        self.limits.lp_feasibility_tolerance)

    def _process(self, node: _Node, res: LPResult) -> None:
        stats = self.stats
        stats.nodes_explored += 1
        stats.lp_iterations += res.iterations
        if stats.nodes_explored % 1000 == 0:
            logger.info('nodes=%d open=%d bound=%.6g incumbent=%.6g gap=%.3g',
                        stats.nodes_explored, len(self._heap), self.best_bound(node.bound),
                        self.value, self._gap(node.bound))

        if res.status == LP_STATUS.INFEASIBLE:
            logger.debug('node depth %d infeasible', node.depth)
            return
        if res.status == LP_STATUS.UNBOUNDED:
            raise SolverError('LP relaxation is unbounded')

        if node.depth == 0:
            stats.root_bound = res.objective
        elif res.objective < node.bound - _DUALITY_TOL * max(1.0, abs(node.bound)):
            warnings.warn(
                f'child LP bound {res.objective} below parent bound {node.bound}',
                DualityWarning)
        if self._prunable(res.objective):
            return

        x = res.x
        values = x[self.integer_cols]
        frac = np.abs(values - np.round(values))
        if frac.size == 0 or frac.max() <= self.limits.integrality_tolerance:
            self._try_incumbent(node, res)
            return

        k = int(np.argmax(frac))
        col = int(self.integer_cols[k])
        down, up = node.upper.copy(), node.lower.copy()
        down[col] = np.floor(x[col])
        up[col] = np.ceil(x[col])
        logger.debug('node depth %d bound %.9g branches on column %d = %.6g',
                     node.depth, res.objective, col, x[col])
        self._push(_Node(res.objective, node.depth + 1, node.lower, down, res.basis))
        self._push(_Node(res.objective, node.depth + 1, up, node.upper, res.basis))

    def _try_incumbent(self, node: _Node, res: LPResult) -> None:
        lower, upper = node.lower.copy(), node.upper.copy()
        fixed = np.round(res.x[self.integer_cols])
        lower[self.integer_cols] = fixed
        upper[self.integer_cols] = fixed
        final = _simplex(self.data, self.cost, lower, upper, res.basis,
                         self.limits.lp_feasibility_tolerance)
        self.stats.lp_iterations += final.iterations
        if final.status != LP_STATUS.OPTIMAL:
            logger.debug('rounded node at depth %d rejected: %s', node.depth, final.status)
            return
        if final.objective < self.value:
            self.incumbent = final.x
            self.value = final.objective
            self.stats.best_incumbent = final.objective
            self.stats.incumbent_history.append(final.objective)
            logger.debug('new incumbent %.9g at depth %d', final.objective, node.depth)

    def best_bound(self, fallback: float = np.inf) -> float:
        "Lowest bound over open nodes, pruned nodes and the incumbent."
        open_bound = self._heap[0][0] if self._heap else np.inf
        bound = min(open_bound, self.floor, self.value)
        return fallback if bound == np.inf else bound

    def _gap(self, fallback: float) -> float:
        if self.incumbent is None:
            return np.inf
        return abs(self.value - self.best_bound(fallback)) / max(1.0, abs(self.value))

    def run(self, lower: np.ndarray, upper: np.ndarray) -> str:
        "Search from the given bounds, returns a :class:`SOLVE_STATUS` value."
        self._push(_Node(-np.inf, 0, lower.copy(), upper.copy(), None))
        workers = self.limits.workers
        pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
        try:
            while self._heap:
                if self._limit_hit():
                    return SOLVE_STATUS.FEASIBLE if self.incumbent is not None \
                        else SOLVE_STATUS.LIMIT
                batch = []
                budget = min(workers, self.limits.node_limit - self.stats.nodes_explored)
                while self._heap and len(batch) < budget:
                    bound, _, seq = heapq.heappop(self._heap)
                    node = self._nodes.pop(seq)
                    if not self._prunable(bound):
                        batch.append(node)
                if not batch:
                    continue
                if pool is None:
                    results = [self._solve(batch[0])]
                else:
                    results = list(pool.map(self._solve, batch))
                for node, res in zip(batch, results):
                    self._process(node, res)
        finally:
            if pool is not None:
                pool.shutdown()
        return SOLVE_STATUS.OPTIMAL if self.incumbent is not None else SOLVE_STATUS.INFEASIBLE


def _lexicographic_refinement(
        model: MilpModel,
        x: np.ndarray,
        limits: SolveLimits,
        stats: SolveStats,
        deadline: float,
        ) -> np.ndarray:
    value = float(model.objective @ x)
    capped = with_objective_cap(model, value + limits.gap_tolerance * max(1.0, abs(value)))
    data = _LpData(capped)
    mask = model.integer_mask
    lower, upper = model.lower.copy(), model.upper.copy()

    def run(cost):
        sub = SolveStats()
        search = _BranchAndBound(data, cost, mask, limits, sub, deadline)
        status = search.run(lower, upper)
        stats.nodes_explored += sub.nodes_explored
        stats.lp_iterations += sub.lp_iterations
        return search.incumbent if status == SOLVE_STATUS.OPTIMAL else None

    for col in model.tie_order:
        cost = np.zeros(model.n_vars)
        cost[col] = 1.0
        best = run(cost)
        if best is None:
            logger.warning('tie-break stopped at column %s, keeping the first optimum',
                           model.var_names[col])
            return x
        lower[col] = upper[col] = np.round(best[col])

    best = run(model.objective)
    if best is None:
        logger.warning('tie-break final solve failed, keeping the first optimum')
        return x
    return best


def solve_bb(
        model: MilpModel,
        limits: SolveLimits | None = None,
        ) -> tuple[Solution | None, SolveStats]:
    """
    Solve a model to optimality by LP based branch-and-bound.

    Nodes are selected best bound first, deeper nodes first on ties; the
    branching column is the most fractional integer column, lowest index on
    ties, and the down child is explored first. An integral node is
    accepted only after its integer columns are fixed and the LP re-solved.

    Args:
        model (MilpModel): Model to solve.
        limits (SolveLimits, optional): Limits and tolerances. Defaults to
            ``SolveLimits()`` with the configured worker count.

    Raises:
        InfeasibleError: No integer feasible point exists. ``.stats`` holds
            the statistics of the run.
        SolverError: Numerical breakdown or unbounded relaxation.

    Warns:
        LimitWarning: A time or node limit stopped the search.
        DualityWarning: A child LP bound fell below its parent's.

    Returns:
        tuple[Solution | None, SolveStats]: Best solution, None when a limit
        was hit before any incumbent, and the run statistics.

    Examples:
        >>> sol, stats = solve_bb(build_model(inst, energy_matrix(inst)))
        >>> stats.status
        'optimal'
    """
    if limits is None:
        limits = SolveLimits(workers=_conf.workers)
    start = time.perf_counter()
    deadline = start + limits.time_limit
    stats = SolveStats()

    search = _BranchAndBound(_LpData(model), model.objective, model.integer_mask,
                             limits, stats, deadline)
    status = search.run(model.lower, model.upper)
    x = search.incumbent
    stats.best_bound = search.best_bound()
    stats.status = status
    if status == SOLVE_STATUS.OPTIMAL:
        # Within the gap the incumbent is the proven bound.
        stats.best_bound = min(stats.best_bound, stats.best_incumbent)
        if limits.lexicographic_ties and model.tie_order.size:
            x = _lexicographic_refinement(model, x, limits, stats, deadline)
    stats.wall_time = time.perf_counter() - start

    logger.info('%s after %d nodes, %d LP iterations, %.3f s: incumbent=%.9g bound=%.9g',
                status, stats.nodes_explored, stats.lp_iterations, stats.wall_time,
                stats.best_incumbent, stats.best_bound)
    if status == SOLVE_STATUS.INFEASIBLE:
        raise InfeasibleError('model has no integer feasible solution', stats)
    if status in (SOLVE_STATUS.FEASIBLE, SOLVE_STATUS.LIMIT):
        warnings.warn(
            f'search stopped by a limit after {stats.nodes_explored} nodes, status {status}',
            LimitWarning)
    if x is None:
        return None, stats
    return extract_solution(model, x, limits.integrality_tolerance), stats


__all__ = [
    'Basis',
    'LPResult',
    'SolveLimits',
    'SolveStats',
    'solve_lp',
    'solve_bb',
]
