"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

pytest file for the simplex LP solver and the branch-and-bound
"""
import warnings
from dataclasses import replace

import numpy as np
import pytest
import scipy.sparse
from scipy.optimize import linprog

from pymassflow import (
    LP_STATUS,
    RELATION,
    SOLVE_STATUS,
    VAR_KIND,
    Basis,
    DualityWarning,
    InfeasibleError,
    LimitWarning,
    MilpModel,
    SolveLimits,
    build_model,
    energy_matrix,
    load_bundled,
    row_violations,
    solve_bb,
    solve_instance,
    solve_lp,
)


def _model(name: str, kind='energy'):
    inst = load_bundled(name)
    return build_model(inst, energy_matrix(inst), kind)


def _highs_relaxation(model: MilpModel) -> float:
    a = model.matrix.toarray()
    le = model.relations == RELATION.LE
    ge = model.relations == RELATION.GE
    eq = model.relations == RELATION.EQ
    a_ub = np.vstack([a[le], -a[ge]])
    b_ub = np.concatenate([model.rhs[le], -model.rhs[ge]])
    bounds = [(lo if np.isfinite(lo) else None, up if np.isfinite(up) else None)
              for lo, up in zip(model.lower, model.upper)]
    res = linprog(model.objective, A_ub=a_ub if a_ub.size else None,
                  b_ub=b_ub if b_ub.size else None, A_eq=a[eq], b_eq=model.rhs[eq],
                  bounds=bounds, method='highs')
    assert res.status == 0
    return res.fun


def _one_column_model(relation: RELATION, rhs: float, cost: float) -> MilpModel:
    return MilpModel(
        name='TINY',
        var_names=['A'],
        kinds=np.array([VAR_KIND.CONTINUOUS]),
        lower=np.array([0.0]),
        upper=np.array([np.inf]),
        objective=np.array([cost]),
        matrix=scipy.sparse.csr_matrix(np.array([[1.0]])),
        relations=np.array([relation]),
        rhs=np.array([rhs]),
        row_names=['R1'],
        row_families=['other'],
    )


@pytest.mark.parametrize('name, kind', [
    ('single_station', 'energy'),
    ('counterexample_distance_vs_energy', 'energy'),
    ('counterexample_distance_vs_energy', 'distance'),
    ('periodic_demo', 'energy'),
])
def test_lp_relaxation_matches_highs(name, kind):
    """Test solve_lp objective against the HiGHS LP relaxation"""
    model = _model(name, kind)
    res = solve_lp(model)
    assert res.status == LP_STATUS.OPTIMAL
    assert res.objective == pytest.approx(_highs_relaxation(model), rel=1e-6, abs=1e-6)
    assert np.all(res.x >= model.lower - 1e-7)
    assert row_violations(model, res.x).max() <= 0


def test_lp_warm_start():
    """Test solve_lp warm started from an optimal basis needs no more iterations"""
    model = _model('counterexample_distance_vs_energy')
    cold = solve_lp(model)
    warm = solve_lp(model, warm_start=cold.basis)
    assert warm.objective == pytest.approx(cold.objective)
    assert warm.iterations <= cold.iterations


def test_lp_bad_warm_start_falls_back():
    """Test solve_lp ignores a warm start basis of the wrong shape"""
    model = _model('single_station')
    res = solve_lp(model, warm_start=Basis(np.array([0]), np.zeros(1, dtype=bool)))
    assert res.status == LP_STATUS.OPTIMAL
    assert res.objective == pytest.approx(solve_lp(model).objective)


def test_lp_infeasible():
    """Test solve_lp reports an infeasible row"""
    model = _one_column_model(RELATION.LE, -1.0, 1.0)
    assert solve_lp(model).status == LP_STATUS.INFEASIBLE


def test_lp_unbounded():
    """Test solve_lp reports an unbounded objective"""
    model = _one_column_model(RELATION.GE, 0.0, -1.0)
    assert solve_lp(model).status == LP_STATUS.UNBOUNDED


def test_lp_contradictory_bounds():
    """Test solve_lp reports crossed column bounds as infeasible"""
    model = _model('single_station')
    lower = model.lower.copy()
    lower[3] = 3.0
    res = solve_lp(model, lower=lower)
    assert res.status == LP_STATUS.INFEASIBLE


def test_bb_single_station():
    """Test solve_bb optimum and statistics on the single station instance"""
    with warnings.catch_warnings():
        warnings.simplefilter('error', DualityWarning)
        sol, stats = solve_bb(_model('single_station'))
    assert stats.status == SOLVE_STATUS.OPTIMAL
    assert sol.objective_value == pytest.approx(3559.325, rel=1e-9)
    assert stats.root_bound <= sol.objective_value + 1e-6
    assert stats.best_bound == pytest.approx(sol.objective_value)
    assert stats.incumbent_history[-1] == pytest.approx(sol.objective_value)
    assert stats.gap == pytest.approx(0.0, abs=1e-6)
    assert stats.nodes_explored >= 1


def test_bb_counterexample_energy():
    """Test solve_bb picks the lighter delivery plan under the energy objective"""
    sol, stats = solve_bb(_model('counterexample_distance_vs_energy'))
    assert stats.status == SOLVE_STATUS.OPTIMAL
    assert sol.objective_value == pytest.approx(8471.5, rel=1e-9)
    assert sol.z[1:3, 1:3].tolist() == [[1, 1], [2, 0]]
    assert sol.tour_count == 2


def test_bb_distance_ties_prefer_small_deliveries():
    """Test lexicographic tie-breaking under the distance objective"""
    limits = SolveLimits(lexicographic_ties=True)
    sol, stats = solve_bb(_model('counterexample_distance_vs_energy', 'distance'), limits)
    assert stats.status == SOLVE_STATUS.OPTIMAL
    assert sol.objective_value == pytest.approx(200.0)
    assert sol.z[1:3, 1:3].tolist() == [[1, 1], [1, 1]]


def test_bb_workers_agree():
    """Test solve_bb gives the same optimum with a worker pool"""
    single, _ = solve_bb(_model('counterexample_distance_vs_energy'))
    pooled, stats = solve_bb(_model('counterexample_distance_vs_energy'),
                             SolveLimits(workers=3))
    assert stats.status == SOLVE_STATUS.OPTIMAL
    assert pooled.objective_value == pytest.approx(single.objective_value, rel=1e-9)


def test_bb_time_limit_without_incumbent():
    """Test solve_bb returns no solution when the time limit stops it first"""
    with pytest.warns(LimitWarning):
        sol, stats = solve_bb(_model('counterexample_distance_vs_energy'),
                              SolveLimits(time_limit=0.0))
    assert sol is None
    assert stats.status == SOLVE_STATUS.LIMIT
    assert stats.nodes_explored == 0


def test_bb_infeasible():
    """Test solve_bb raises InfeasibleError carrying the run statistics"""
    inst = load_bundled('single_station')
    bad = replace(inst, stations=(replace(inst.stations[0], demand=(3,)),))
    assert bad.stations[0].demand == (3,)
    with pytest.raises(InfeasibleError) as err:
        solve_bb(build_model(bad, energy_matrix(bad)))
    assert err.value.stats.status == SOLVE_STATUS.INFEASIBLE


def test_solve_instance():
    """Test solve_instance solution arrays on the single station instance"""
    sol, stats = solve_instance(load_bundled('single_station'))
    assert stats.status == SOLVE_STATUS.OPTIMAL
    assert sol.objective_value == pytest.approx(3559.325)
    assert sol.m_flow[0, 1, 1] == pytest.approx(120.0)
    assert sol.stop[1, 1] == 1
    assert sol.il[1, 1] == pytest.approx(0.0)
    assert sol.z[1, 1] == 2
    assert sol.tour[1] == 1
    assert sol.m_flow[0, 2, 1] == pytest.approx(0.0)
    assert sol.arc[0, 2, 1] == 0


def _branching_model() -> MilpModel:
    "min x + 3y with x + y >= 1.5, x integer: the down branch is integral but not optimal."
    return MilpModel(
        name='BRANCH',
        var_names=['X', 'Y'],
        kinds=np.array([VAR_KIND.INTEGER, VAR_KIND.CONTINUOUS]),
        lower=np.array([0.0, 0.0]),
        upper=np.array([10.0, np.inf]),
        objective=np.array([1.0, 3.0]),
        matrix=scipy.sparse.csr_matrix(np.array([[1.0, 1.0]])),
        relations=np.array([RELATION.GE]),
        rhs=np.array([1.5]),
        row_names=['R1'],
        row_families=['other'],
    )


def test_bb_node_limit_keeps_incumbent():
    """Test solve_bb returns the incumbent with status feasible when a node limit stops it"""
    with pytest.warns(LimitWarning):
        sol, stats = solve_bb(_branching_model(), SolveLimits(node_limit=2))
    assert stats.status == SOLVE_STATUS.FEASIBLE
    assert sol is not None
    assert sol.objective_value == pytest.approx(2.5)
    assert stats.best_incumbent == pytest.approx(2.5)
    assert stats.best_bound == pytest.approx(1.5)
    assert stats.best_bound <= stats.best_incumbent
    assert stats.nodes_explored == 2


def test_bb_branching_model_optimum():
    """Test solve_bb improves on the first incumbent once the up branch is explored"""
    sol, stats = solve_bb(_branching_model())
    assert stats.status == SOLVE_STATUS.OPTIMAL
    assert sol.objective_value == pytest.approx(2.0)
    assert stats.root_bound == pytest.approx(1.5)
    assert stats.incumbent_history == pytest.approx([2.5, 2.0])


@pytest.mark.parametrize('name', ['counterexample_distance_vs_energy', 'periodic_demo'])
def test_incumbent_history_never_increases(name):
    """Test each recorded incumbent is no worse than the one before it"""
    _, stats = solve_bb(_model(name))
    history = stats.incumbent_history
    assert history
    assert all(b <= a for a, b in zip(history, history[1:]))
    assert history[-1] == pytest.approx(stats.best_incumbent)


def test_bb_is_deterministic():
    """Test two single worker runs on the same model give identical results"""
    model = _model('periodic_demo')
    sol_a, stats_a = solve_bb(model, SolveLimits(workers=1))
    sol_b, stats_b = solve_bb(model, SolveLimits(workers=1))
    assert stats_a.status == stats_b.status == SOLVE_STATUS.OPTIMAL
    assert stats_a.nodes_explored == stats_b.nodes_explored
    assert stats_a.lp_iterations == stats_b.lp_iterations
    assert stats_a.root_bound == stats_b.root_bound
    assert stats_a.best_bound == stats_b.best_bound
    assert stats_a.incumbent_history == stats_b.incumbent_history
    assert sol_a.objective_value == sol_b.objective_value
    assert np.array_equal(sol_a.z, sol_b.z)
    assert np.array_equal(sol_a.arc, sol_b.arc)
    assert np.array_equal(sol_a.m_flow, sol_b.m_flow)
