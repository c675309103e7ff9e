"""
This file contains the dataclasses describing a supplying instance
i.e. the line layout, the tow train and the physics constants
"""
from dataclasses import dataclass, field

import numpy as np

from ..constants import DEFAULT_G, DEFAULT_C_R


@dataclass(frozen=True)
class PhysicsParams:
    "Gravitational acceleration (m/s^2) and rolling coefficient"
    g: float = DEFAULT_G
    c_r: float = DEFAULT_C_R


@dataclass(frozen=True)
class VehicleParams:
    """Tow train kinematics and capacity.

    Attributes:
        m_v: Empty vehicle mass (kg).
        cap_boxes: Capacity A in boxes per tour.
        v_max: Maximum speed (m/s).
        a_acc: Acceleration magnitude (m/s^2).
        a_dec: Deceleration magnitude (m/s^2).
    """
    m_v: float
    cap_boxes: int
    v_max: float
    a_acc: float
    a_dec: float


@dataclass(frozen=True)
class Station:
    """Workstation on the fixed route.

    Attributes:
        index: Position in the route, 1..n.
        position: Distance from the depot along the route (m).
        box_mass: Mass of one box (kg).
        storage_cap: Boxes the station can hold.
        initial_inventory: Boxes held before period 1.
        demand: Boxes consumed per period, length NT.
    """
    index: int
    position: float
    box_mass: float
    storage_cap: int
    initial_inventory: int
    demand: tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    "Complete supplying instance, immutable after construction"
    stations: tuple[Station, ...]
    vehicle: VehicleParams
    physics: PhysicsParams = field(default_factory=PhysicsParams)
    nt: int = 1
    loop_length: float = 0.0

    @property
    def n(self) -> int:
        "Number of workstations."
        return len(self.stations)

    @property
    def positions(self) -> np.ndarray:
        "Station positions (m), index 0 is station 1."
        return np.array([s.position for s in self.stations], dtype=float)

    @property
    def box_masses(self) -> np.ndarray:
        "Box mass per station (kg)."
        return np.array([s.box_mass for s in self.stations], dtype=float)

    @property
    def storage_caps(self) -> np.ndarray:
        "Storage capacity per station (boxes)."
        return np.array([s.storage_cap for s in self.stations], dtype=int)

    @property
    def initial_inventories(self) -> np.ndarray:
        "Initial inventory per station (boxes)."
        return np.array([s.initial_inventory for s in self.stations], dtype=int)

    @property
    def demands(self) -> np.ndarray:
        "Demand matrix of shape (n, NT)."
        return np.array([list(s.demand) for s in self.stations], dtype=int).reshape(self.n, self.nt)
