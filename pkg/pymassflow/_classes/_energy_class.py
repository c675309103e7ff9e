"""
This file contains the classes produced by the energy model
i.e. the motion profile of one leg and the per-arc energy matrix
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MotionProfile:
    """Accelerate, cruise, decelerate profile of one leg.

    Attributes:
        d_total: Leg distance (m).
        x_acc: Distance covered while accelerating (m).
        x_cruise: Distance covered at constant speed (m).
        x_dec: Distance covered while braking (m).
        v_peak: Highest speed reached (m/s).
    """
    d_total: float
    x_acc: float
    x_cruise: float
    x_dec: float
    v_peak: float

    @property
    def triangular(self) -> bool:
        "True when the leg is too short to reach the cruise phase."
        return self.x_cruise == 0.0


@dataclass(frozen=True, eq=False)
class EnergyMatrix:
    """Per unit mass energy and distance of every forward arc.

    Entries ``[i, j]`` with ``0 <= i < j <= n + 1`` are populated, node 0
    and node n+1 being the depot at the start and the end of the tour.
    Other entries are zero.

    Attributes:
        n_nodes: n + 2.
        cost: C_ij (J/kg).
        dist: D_ij (m).
        traction: Acceleration part of C_ij (J/kg).
        rolling: Rolling resistance part of C_ij (J/kg).
    """
    n_nodes: int
    cost: np.ndarray
    dist: np.ndarray
    traction: np.ndarray
    rolling: np.ndarray

    @property
    def n(self) -> int:
        "Number of stations."
        return self.n_nodes - 2

    def arcs(self) -> list[tuple[int, int]]:
        "Forward arcs ``(i, j)`` in row-major order."
        return [(i, j) for i in range(self.n_nodes) for j in range(i + 1, self.n_nodes)]
