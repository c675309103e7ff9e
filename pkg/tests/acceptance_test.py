"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

pytest file checking branch-and-bound against exhaustive enumeration on
generated instances
"""
import numpy as np
import pytest

from pymassflow import (
    OBJECTIVE,
    SolveLimits,
    build_model,
    check_feasibility,
    energy_matrix,
    enumerate_optimal,
    generate_instance,
    load_bundled,
    recompute_objective,
    solution_from_json,
    solution_to_json,
    solve_bb,
    solve_instance,
)


def _instance(seed: int):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    nt = int(rng.integers(1, 3))
    profile = 'periodic' if seed % 2 else 'uniform'
    return generate_instance(seed, n, nt, profile)


@pytest.mark.parametrize('seed', range(100))
def test_bb_matches_oracle(seed):
    """Test solve_bb energy optimum equals the enumerated optimum"""
    inst = _instance(seed)
    em = energy_matrix(inst)
    _, best = enumerate_optimal(inst, em, OBJECTIVE.ENERGY)

    sol, stats = solve_bb(build_model(inst, em, OBJECTIVE.ENERGY))
    assert stats.status == 'optimal'
    assert check_feasibility(inst, sol) == []
    assert recompute_objective(inst, em, sol) == pytest.approx(best, rel=1e-6, abs=1e-9)
    assert sol.objective_value == pytest.approx(best, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize('seed', range(0, 100, 10))
def test_bb_matches_oracle_on_distance(seed):
    """Test solve_instance distance optimum equals the enumerated optimum"""
    inst = _instance(seed)
    em = energy_matrix(inst)
    _, best = enumerate_optimal(inst, em, OBJECTIVE.DISTANCE)

    sol, _ = solve_instance(inst, 'distance')
    assert check_feasibility(inst, sol) == []
    assert recompute_objective(inst, em, sol, OBJECTIVE.DISTANCE) == \
        pytest.approx(best, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize('seed', [3, 17, 42])
def test_workers_do_not_change_the_result(seed):
    """Test one and four workers reach the same optimum"""
    inst = _instance(seed)
    model = build_model(inst, energy_matrix(inst))
    sol_1, _ = solve_bb(model, SolveLimits(workers=1))
    sol_4, _ = solve_bb(model, SolveLimits(workers=4))
    assert sol_4.objective_value == pytest.approx(sol_1.objective_value, rel=1e-9, abs=1e-9)


def test_distance_optimum_wastes_energy():
    """Test the distance optimum spends at least 1% more energy"""
    inst = load_bundled('counterexample_distance_vs_energy')
    em = energy_matrix(inst)
    energy_sol, _ = solve_instance(inst, 'energy')
    distance_sol, _ = solve_instance(inst, 'distance')

    energy_of_energy_run = recompute_objective(inst, em, energy_sol)
    energy_of_distance_run = recompute_objective(inst, em, distance_sol)
    assert energy_of_distance_run >= 1.01 * energy_of_energy_run
    assert recompute_objective(inst, em, distance_sol, OBJECTIVE.DISTANCE) == \
        pytest.approx(recompute_objective(inst, em, energy_sol, OBJECTIVE.DISTANCE))


@pytest.mark.parametrize('name', ['single_station', 'periodic_demo'])
def test_solution_file_round_trip(name):
    """Test solution_from_json reads back a solved solution"""
    inst = load_bundled(name)
    em = energy_matrix(inst)
    sol, _ = solve_instance(inst)
    back = solution_from_json(solution_to_json(sol), inst)

    assert np.array_equal(back.z, sol.z)
    assert np.array_equal(back.stop, sol.stop)
    assert np.allclose(back.m_flow, sol.m_flow)
    assert check_feasibility(inst, back) == []
    assert recompute_objective(inst, em, back) == pytest.approx(sol.objective_value, rel=1e-9)
