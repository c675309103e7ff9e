"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

Energy model of a tow train leg.

A leg between two stops is driven as accelerate / cruise / decelerate with
constant acceleration and deceleration magnitudes. The energy per unit of
moving mass is the integral of ``(a(t) + g * c_r) * v(t)`` over the
acceleration and cruise phases; braking consumes nothing and recovers
nothing. Closed forms:

    trapezoidal:  x_acc = v_max^2 / (2 a_acc),  x_dec = v_max^2 / (2 a_dec)
    triangular:   v_peak = sqrt(2 a_acc a_dec d / (a_acc + a_dec))
    E / m = (a_acc + g c_r) x_acc + g c_r x_cruise
"""
import csv
import io
import math

import numpy as np
from scipy.integrate import trapezoid

from ._classes._energy_class import EnergyMatrix, MotionProfile
from ._classes._instance_class import Instance, PhysicsParams, VehicleParams
from .common import MassFlowException


def leg_profile(d: float, veh: VehicleParams) -> MotionProfile:
    """
    Motion profile of a leg of length ``d``.

    Args:
        d (float): Leg distance (m), non negative.
        veh (VehicleParams): Vehicle kinematics.

    Raises:
        MassFlowException: Negative distance.

    Returns:
        MotionProfile: Trapezoidal when ``d >= v_max^2/2 * (1/a_acc + 1/a_dec)``,
        triangular otherwise.

    Examples:
        >>> leg_profile(16, veh).v_peak
        4.0
    """
    if d < 0:
        raise MassFlowException(f'Leg distance must be non negative, got {d}')
    v_max, a_acc, a_dec = veh.v_max, veh.a_acc, veh.a_dec
    threshold = v_max ** 2 / 2 * (1 / a_acc + 1 / a_dec)
    if d >= threshold:
        x_acc = v_max ** 2 / (2 * a_acc)
        x_dec = v_max ** 2 / (2 * a_dec)
        return MotionProfile(d, x_acc, d - x_acc - x_dec, x_dec, v_max)

    v_peak = math.sqrt(2 * a_acc * a_dec * d / (a_acc + a_dec))
    x_acc = v_peak ** 2 / (2 * a_acc)
    return MotionProfile(d, x_acc, 0.0, d - x_acc, v_peak)


def leg_energy_components(
        d: float,
        veh: VehicleParams,
        phys: PhysicsParams,
        ) -> tuple[float, float]:
    """
    Split the per unit mass energy of a leg into its traction part
    ``a_acc * x_acc`` and its rolling resistance part
    ``g * c_r * (x_acc + x_cruise)`` (J/kg).
    """
    prof = leg_profile(d, veh)
    rolling = phys.g * phys.c_r * (prof.x_acc + prof.x_cruise)
    return veh.a_acc * prof.x_acc, rolling


def leg_energy_per_mass(d: float, veh: VehicleParams, phys: PhysicsParams) -> float:
    """
    Energy per kilogram of moving mass to drive a leg of length ``d`` (J/kg).

    Args:
        d (float): Leg distance (m).
        veh (VehicleParams): Vehicle kinematics.
        phys (PhysicsParams): Gravity and rolling coefficient.

    Returns:
        float: ``(a_acc + g c_r) x_acc + g c_r x_cruise``, zero iff ``d == 0``.

    Examples:
        >>> leg_energy_per_mass(100, veh, phys)
        21.08375
    """
    traction, rolling = leg_energy_components(d, veh, phys)
    return traction + rolling


def numeric_leg_energy(
        d: float,
        veh: VehicleParams,
        phys: PhysicsParams,
        dt: float = 1e-4,
        ) -> float:
    """
    Time-stepped evaluation of the leg energy integral (J/kg).

    The speed and acceleration are sampled on a uniform time grid over the
    whole leg and ``max(0, (a(t) + g c_r) v(t))`` is integrated with the
    trapezoidal rule. Converges to :func:`leg_energy_per_mass` as ``dt -> 0``
    with an error of order ``dt``.

    Args:
        d (float): Leg distance (m).
        veh (VehicleParams): Vehicle kinematics.
        phys (PhysicsParams): Gravity and rolling coefficient.
        dt (float, optional): Time step (s). Defaults to 1e-4.

    Raises:
        MassFlowException: Negative distance or non positive time step.
    """
    if not dt > 0:
        raise MassFlowException(f'Time step must be positive, got {dt}')
    prof = leg_profile(d, veh)
    if d == 0:
        return 0.0

    t_acc = prof.v_peak / veh.a_acc
    t_cruise = prof.x_cruise / prof.v_peak
    t_brake = t_acc + t_cruise
    t_end = t_brake + prof.v_peak / veh.a_dec

    t = np.arange(int(math.ceil(t_end / dt)) + 1) * dt
    accel = np.where(t < t_acc, veh.a_acc, np.where(t < t_brake, 0.0, -veh.a_dec))
    speed = np.where(
        t < t_acc,
        veh.a_acc * t,
        np.where(t < t_brake, prof.v_peak,
                 np.maximum(0.0, prof.v_peak - veh.a_dec * (t - t_brake))))
    power = np.maximum(0.0, (accel + phys.g * phys.c_r) * speed)
    return float(trapezoid(power, t))


def stop_penalty(veh: VehicleParams, phys: PhysicsParams) -> float:
    """
    Extra energy per unit mass caused by one intermediate stop between
    trapezoidal legs, ``v_max^2 / 2 * (1 - g c_r / a_dec)`` (J/kg).

    Examples:
        >>> stop_penalty(veh, phys)
        11.27375
    """
    return veh.v_max ** 2 / 2 * (1 - phys.g * phys.c_r / veh.a_dec)


def node_positions(inst: Instance) -> np.ndarray:
    "Positions of nodes 0..n+1 along the loop, the depot at 0 and at ``loop_length``."
    return np.concatenate(([0.0], inst.positions, [float(inst.loop_length)]))


def energy_matrix(inst: Instance) -> EnergyMatrix:
    """
    Per unit mass energy C_ij and distance D_ij of every forward arc.

    Args:
        inst (Instance): Valid instance.

    Returns:
        EnergyMatrix: Arrays of shape ``(n + 2, n + 2)``.

    Examples:
        >>> em = energy_matrix(inst)
        >>> em.cost[0, 1]
        16.17875
    """
    pos = node_positions(inst)
    size = inst.n + 2
    dist = np.zeros((size, size))
    traction = np.zeros((size, size))
    rolling = np.zeros((size, size))
    for i in range(size):
        for j in range(i + 1, size):
            dist[i, j] = pos[j] - pos[i]
            traction[i, j], rolling[i, j] = leg_energy_components(
                dist[i, j], inst.vehicle, inst.physics)
    return EnergyMatrix(size, traction + rolling, dist, traction, rolling)


def export_energy_csv(em: EnergyMatrix) -> str:
    """
    Energy matrix as CSV text, header ``i,j,dist_m,cost_j_per_kg``, one
    row per forward arc in row-major order, 9 significant digits.
    """
    buffer = io.StringIO()
    csv_writer = csv.writer(buffer, lineterminator='\n')
    csv_writer.writerow(['i', 'j', 'dist_m', 'cost_j_per_kg'])
    for i, j in em.arcs():
        csv_writer.writerow([i, j, f'{em.dist[i, j]:.9g}', f'{em.cost[i, j]:.9g}'])
    return buffer.getvalue()


__all__ = [
    'leg_profile',
    'leg_energy_components',
    'leg_energy_per_mass',
    'numeric_leg_energy',
    'stop_penalty',
    'node_positions',
    'energy_matrix',
    'export_energy_csv',
]
