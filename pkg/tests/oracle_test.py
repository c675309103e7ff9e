"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

pytest file for the exhaustive plan enumeration
"""
from dataclasses import replace

import pytest

from pymassflow import (
    DeliveryPlan,
    InfeasibleError,
    ModelError,
    OBJECTIVE,
    OracleLimitError,
    check_feasibility,
    energy_matrix,
    enumerate_optimal,
    generate_instance,
    load_bundled,
    plan_distance,
    plan_energy,
    plan_inventories,
    plan_violations,
    recompute_objective,
    solution_from_plan,
)

single = load_bundled('single_station')
counter = load_bundled('counterexample_distance_vs_energy')


def test_single_station_optimum():
    """Test enumerate_optimal on the single station instance"""
    plan, value = enumerate_optimal(single, energy_matrix(single))
    assert plan.z[1, 1] == 2
    assert value == pytest.approx(3559.325, rel=1e-12)


def test_counterexample_energy_optimum():
    """Test enumerate_optimal delivers early when it saves energy"""
    plan, value = enumerate_optimal(counter, energy_matrix(counter), 'energy')
    assert plan.z[1:, 1:].tolist() == [[1, 1], [2, 0]]
    assert value == pytest.approx(8471.5, rel=1e-12)


def test_counterexample_distance_ties_pick_smallest_plan():
    """Test enumerate_optimal breaks distance ties toward small deliveries"""
    plan, value = enumerate_optimal(counter, energy_matrix(counter), OBJECTIVE.DISTANCE)
    assert plan.z[1:, 1:].tolist() == [[1, 1], [1, 1]]
    assert value == pytest.approx(200.0)


def test_plan_energy_and_distance():
    """Test plan_energy and plan_distance of two plans of equal distance"""
    em = energy_matrix(counter)
    just_in_time = DeliveryPlan.from_rows([[1, 1], [1, 1]])
    assert plan_energy(counter, em, just_in_time) == pytest.approx(9598.875, rel=1e-12)
    assert plan_distance(counter, em, just_in_time) == pytest.approx(200.0)
    early = DeliveryPlan.from_rows([[1, 1], [2, 0]])
    assert plan_distance(counter, em, early) == pytest.approx(200.0)
    assert plan_energy(counter, em, just_in_time) / plan_energy(counter, em, early) \
        == pytest.approx(1.1331, abs=1e-4)


def test_plan_inventories():
    """Test plan_inventories of an early delivery plan"""
    il = plan_inventories(counter, DeliveryPlan.from_rows([[1, 1], [2, 0]]))
    assert il[1:, 1:].tolist() == [[0, 0], [1, 0]]


def test_plan_violations():
    """Test plan_violations messages"""
    assert plan_violations(counter, DeliveryPlan.zeros(2, 2))[0] == \
        'station 1: negative inventory at period 1'
    issues = plan_violations(counter, DeliveryPlan.from_rows([[2, 0], [2, 0]]))
    assert 'period 1: 4 boxes exceed vehicle capacity' in issues
    assert 'station 1: storage exceeded at period 1' in issues
    assert plan_violations(counter, DeliveryPlan.from_rows([[1, 1], [1, 1]])) == []


def test_plan_energy_rejects_infeasible_plan():
    """Test plan_energy raises on a plan that misses demand"""
    with pytest.raises(InfeasibleError, match='infeasible plan'):
        plan_energy(counter, energy_matrix(counter), DeliveryPlan.zeros(2, 2))


def test_plan_dimension_mismatch():
    """Test plan_energy with a plan sized for another instance"""
    with pytest.raises(ModelError):
        plan_energy(counter, energy_matrix(counter), DeliveryPlan.zeros(1, 1))


def test_zero_demand():
    """Test enumerate_optimal without demand returns the empty plan"""
    idle = replace(counter, stations=tuple(replace(s, demand=(0, 0)) for s in counter.stations))
    plan, value = enumerate_optimal(idle, energy_matrix(idle))
    assert value == 0.0
    assert plan.key() == (0, 0, 0, 0)


def test_no_feasible_plan():
    """Test enumerate_optimal raises when no plan meets demand"""
    bad = replace(single, stations=(replace(single.stations[0], demand=(3,)),))
    with pytest.raises(InfeasibleError):
        enumerate_optimal(bad, energy_matrix(bad))


def test_enumeration_limit():
    """Test enumerate_optimal refuses instances above its size limit"""
    big = generate_instance(1, 5, 1)
    with pytest.raises(OracleLimitError):
        enumerate_optimal(big, energy_matrix(big))


def test_solution_from_plan_is_feasible():
    """Test solution_from_plan routes, masses and objective"""
    em = energy_matrix(counter)
    plan = DeliveryPlan.from_rows([[1, 1], [2, 0]])
    sol = solution_from_plan(counter, em, plan)
    assert check_feasibility(counter, sol) == []
    assert sol.objective_value == pytest.approx(8471.5)
    assert recompute_objective(counter, em, sol) == pytest.approx(8471.5)
    assert sol.route(2) == [0, 1, 3]
    assert sol.m_flow[0, 1, 1] == 130.0


def test_solution_from_plan_distance_kind():
    """Test solution_from_plan under the distance objective"""
    em = energy_matrix(counter)
    sol = solution_from_plan(counter, em, DeliveryPlan.from_rows([[1, 1], [1, 1]]), 'distance')
    assert sol.kind == OBJECTIVE.DISTANCE
    assert sol.objective_value == pytest.approx(200.0)
