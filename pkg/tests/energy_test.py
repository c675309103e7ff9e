"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

pytest file for the leg energy model and the energy matrix
"""
import numpy as np
import pytest

from pymassflow import (
    MassFlowException,
    PhysicsParams,
    VehicleParams,
    energy_matrix,
    export_energy_csv,
    leg_energy_components,
    leg_energy_per_mass,
    leg_profile,
    load_bundled,
    numeric_leg_energy,
    stop_penalty,
)

veh = VehicleParams(m_v=100.0, cap_boxes=2, v_max=5.0, a_acc=1.0, a_dec=1.0)
phys = PhysicsParams()
# Slow start, hard braking: legs under 20 m are triangular.
veh_skew = VehicleParams(m_v=100.0, cap_boxes=2, v_max=4.0, a_acc=0.5, a_dec=2.0)


@pytest.mark.parametrize('d, expected', [
    (30, 14.21675),
    (40, 15.19775),
    (50, 16.17875),
    (70, 18.14075),
    (100, 21.08375),
])
def test_trapezoidal_leg_energy(d, expected):
    """Test leg_energy_per_mass on legs long enough to cruise"""
    assert leg_energy_per_mass(d, veh, phys) == pytest.approx(expected, rel=1e-12)


def test_zero_distance_costs_nothing():
    """Test both energy routines on a zero length leg"""
    assert leg_energy_per_mass(0, veh, phys) == 0.0
    assert numeric_leg_energy(0, veh, phys) == 0.0


def test_triangular_profile():
    """Test leg_profile on a leg too short to reach top speed"""
    prof = leg_profile(16, veh)
    assert prof.triangular
    assert prof.v_peak == pytest.approx(4.0)
    assert prof.x_cruise == 0.0
    assert leg_energy_per_mass(16, veh, phys) == pytest.approx(1.0981 * 8, rel=1e-12)


def test_profile_threshold_is_trapezoidal():
    """Test leg_profile at the distance where cruising starts"""
    prof = leg_profile(25, veh)
    assert not prof.triangular
    assert prof.v_peak == 5.0
    assert prof.x_cruise == pytest.approx(0.0)


def test_negative_distance_raises():
    """Test leg_profile rejects a negative distance"""
    with pytest.raises(MassFlowException):
        leg_profile(-1, veh)


def test_components_add_up():
    """Test leg_energy_components sum to the leg energy"""
    traction, rolling = leg_energy_components(50, veh, phys)
    assert traction == pytest.approx(12.5)
    assert rolling == pytest.approx(9.81 * 0.01 * 37.5)
    assert traction + rolling == pytest.approx(leg_energy_per_mass(50, veh, phys))


def test_numeric_integration_matches_closed_form():
    """Test numeric_leg_energy against the closed form"""
    for d in np.linspace(0, 500, 100):
        closed = leg_energy_per_mass(d, veh, phys)
        assert numeric_leg_energy(d, veh, phys, dt=1e-4) == pytest.approx(
            closed, rel=1e-3, abs=1e-12)


def test_numeric_error_shrinks_with_step():
    """Test numeric_leg_energy error is first order in the time step"""
    closed = leg_energy_per_mass(100, veh, phys)
    errors = [abs(numeric_leg_energy(100, veh, phys, dt=dt) - closed)
              for dt in (1e-2, 1e-3, 1e-4)]
    for dt, err in zip((1e-2, 1e-3, 1e-4), errors):
        assert err <= 3 * dt
    assert errors[2] < errors[0] / 10


@pytest.mark.parametrize('vehicle', [veh, veh_skew])
def test_leg_energy_strictly_increasing(vehicle):
    """Test leg_energy_per_mass grows with distance across both profile shapes"""
    costs = np.array([leg_energy_per_mass(d, vehicle, phys) for d in np.linspace(0, 500, 501)])
    assert np.all(np.diff(costs) > 0)


def test_numeric_rejects_bad_step():
    """Test numeric_leg_energy rejects a zero time step"""
    with pytest.raises(MassFlowException):
        numeric_leg_energy(10, veh, phys, dt=0)


def test_stop_penalty():
    """Test stop_penalty of the reference vehicle"""
    assert stop_penalty(veh, phys) == pytest.approx(11.27375, rel=1e-12)


def test_stop_penalty_triangle_inequality():
    """Test splitting a cruising leg costs exactly the stop penalty"""
    for a, b in [(30, 40), (25, 25), (60, 120), (45.5, 80.25)]:
        extra = (leg_energy_per_mass(a, veh, phys) + leg_energy_per_mass(b, veh, phys)
                 - leg_energy_per_mass(a + b, veh, phys))
        assert extra == pytest.approx(11.27375, rel=1e-9)


@pytest.mark.parametrize('vehicle', [veh, veh_skew])
def test_triangle_inequality_with_triangular_legs(vehicle):
    """Test a direct leg never costs more than two legs through a stop"""
    positions = [0.0, 3.0, 7.5, 12.0, 20.0, 33.0, 50.0, 80.0]
    for a, pa in enumerate(positions):
        for b in range(a + 1, len(positions)):
            for c in range(b + 1, len(positions)):
                pb, pc = positions[b], positions[c]
                direct = leg_energy_per_mass(pc - pa, vehicle, phys)
                via = (leg_energy_per_mass(pb - pa, vehicle, phys)
                       + leg_energy_per_mass(pc - pb, vehicle, phys))
                assert direct <= via + 1e-12


def test_two_triangular_legs_cost_the_same_as_one():
    """Test stopping between two short legs costs nothing extra"""
    assert leg_profile(20, veh).triangular
    split = leg_energy_per_mass(8, veh, phys) + leg_energy_per_mass(12, veh, phys)
    assert split == pytest.approx(leg_energy_per_mass(20, veh, phys), rel=1e-12)


def test_energy_matrix_single_station():
    """Test energy_matrix costs and arcs of the single station instance"""
    em = energy_matrix(load_bundled('single_station'))
    assert em.n_nodes == 3
    assert em.cost[0, 1] == pytest.approx(16.17875)
    assert em.cost[1, 2] == pytest.approx(16.17875)
    assert em.cost[0, 2] == pytest.approx(21.08375)
    assert em.dist[0, 2] == 100.0
    assert np.all(np.tril(em.cost) == 0)
    assert em.arcs() == [(0, 1), (0, 2), (1, 2)]


def test_energy_matrix_split():
    """Test traction and rolling matrices add up to the cost matrix"""
    em = energy_matrix(load_bundled('periodic_demo'))
    assert np.allclose(em.traction + em.rolling, em.cost)


def test_export_energy_csv():
    """Test export_energy_csv header and first row"""
    text = export_energy_csv(energy_matrix(load_bundled('single_station')))
    lines = text.splitlines()
    assert lines[0] == 'i,j,dist_m,cost_j_per_kg'
    assert lines[1] == '0,1,50,16.17875'
    assert len(lines) == 4
