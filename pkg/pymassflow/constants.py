"""Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms."""

from enum import IntEnum
from typing import Literal


class OBJECTIVE(IntEnum):
    """
    Objective selector for the supplying model.

    Attributes:
        ENERGY: Minimise the energy spent moving mass along each arc (J).
        DISTANCE: Minimise the travelled distance of the selected arcs (m).

    Examples:
        >>> model = build_model(inst, em, OBJECTIVE.ENERGY)
        >>> model = build_model(inst, em, 'distance')
    """
    ENERGY = 0
    DISTANCE = 1


Objective_L = Literal['energy', 'distance']
Objective_M = {'energy': OBJECTIVE.ENERGY, 'distance': OBJECTIVE.DISTANCE}


class VAR_KIND(IntEnum):
    """
    Variable domain of a model column.

    Attributes:
        CONTINUOUS: Real valued between its bounds.
        INTEGER: Integer valued between its bounds.
        BINARY: Integer valued in {0, 1}.
    """
    CONTINUOUS = 0
    INTEGER = 1
    BINARY = 2


class RELATION(IntEnum):
    """
    Sense of a linear constraint row.

    Attributes:
        LE: lhs <= rhs
        EQ: lhs == rhs
        GE: lhs >= rhs
    """
    LE = -1
    EQ = 0
    GE = 1


class VAR_ROLE:
    """
    Role tags used to key model columns by their structured identity
    ``(role, i, j, t)``.

    Attributes:
        MASS: Mass flow M_ij^t on arc (i, j) in kg.
        DELIVERY: Boxes Z_i^t left at station i.
        INVENTORY: Inventory IL_i^t at the end of period t.
        ARC: Arc selection phi_ij^t.
        STOP: Stop indicator X_i^t.
        TOUR: Tour indicator Y^t.
    """
    MASS = 'M'
    DELIVERY = 'Z'
    INVENTORY = 'IL'
    ARC = 'PHI'
    STOP = 'X'
    TOUR = 'Y'


class FAMILY:
    """
    Constraint families of the mass-flow model, one per equation group.
    Row names and violations are tagged with these values.

    Attributes:
        DEMAND_FLOW: Inventory balance with demand satisfaction.
        VEHICLE_CAP: Boxes per tour limited by the vehicle capacity.
        STORAGE_CAP: Station storage never exceeded.
        TOUR_COUPLING: Delivered mass equals the mass-flow difference at a station.
        VEHICLE_MASS_RETURN: Vehicle mass reaches the closing depot node.
        STOP_LINK: Deliveries require a stop.
        ARC_DEGREE: One incoming and one outgoing arc per stop and per tour.
        MASS_ARC_LINK: Mass may only flow on a selected arc.
        DOMAIN: Bounds and integrality of every variable.
        STOP_TOUR: Optional valid inequality X_i^t <= Y^t.
    """
    DEMAND_FLOW = 'demand_flow'
    VEHICLE_CAP = 'vehicle_cap'
    STORAGE_CAP = 'storage_cap'
    TOUR_COUPLING = 'tour_coupling'
    VEHICLE_MASS_RETURN = 'vehicle_mass_return'
    STOP_LINK = 'stop_link'
    ARC_DEGREE = 'arc_degree'
    MASS_ARC_LINK = 'mass_arc_link'
    DOMAIN = 'domain'
    STOP_TOUR = 'stop_tour'


family_list = [
    FAMILY.DEMAND_FLOW,
    FAMILY.VEHICLE_CAP,
    FAMILY.STORAGE_CAP,
    FAMILY.TOUR_COUPLING,
    FAMILY.VEHICLE_MASS_RETURN,
    FAMILY.STOP_LINK,
    FAMILY.ARC_DEGREE,
    FAMILY.MASS_ARC_LINK,
    FAMILY.DOMAIN,
]


class SOLVE_STATUS:
    """
    Termination status reported by the branch-and-bound solver.

    Attributes:
        OPTIMAL: Incumbent proven optimal within the gap tolerance.
        FEASIBLE: Incumbent found but a limit stopped the proof.
        INFEASIBLE: The model has no integer feasible point.
        LIMIT: A limit was hit before any incumbent was found.
    """
    OPTIMAL = 'optimal'
    FEASIBLE = 'feasible'
    INFEASIBLE = 'infeasible'
    LIMIT = 'limit'


class LP_STATUS:
    """
    Termination status of a single LP relaxation solve.

    Attributes:
        OPTIMAL: Optimal basic solution found.
        INFEASIBLE: No point satisfies the rows and bounds.
        UNBOUNDED: The objective decreases without limit.
    """
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    UNBOUNDED = 'unbounded'


class PROFILE(IntEnum):
    """
    Demand profiles understood by the instance generator.

    Attributes:
        UNIFORM: Independent uniform draws per station and period.
        PERIODIC: A base pattern per station repeated over the horizon.
    """
    UNIFORM = 0
    PERIODIC = 1


Profile_L = Literal['uniform', 'periodic']
Profile_M = {'uniform': PROFILE.UNIFORM, 'periodic': PROFILE.PERIODIC}


class EXPORT_FORMAT(IntEnum):
    """
    Text formats produced by the ``export`` command.

    Attributes:
        MPS: Fixed-form MPS.
        LP: CPLEX LP format.
        ENERGY_CSV: Energy matrix as CSV.
    """
    MPS = 0
    LP = 1
    ENERGY_CSV = 2


ExportFormat_L = Literal['mps', 'lp', 'energy-csv']
ExportFormat_M = {
    'mps': EXPORT_FORMAT.MPS,
    'lp': EXPORT_FORMAT.LP,
    'energy-csv': EXPORT_FORMAT.ENERGY_CSV,
}


class EXIT_CODE(IntEnum):
    """
    Process exit codes of the command-line interface.

    Attributes:
        OK: Optimal solve, clean validation or successful export.
        INVALID: Unreadable input or validation failures.
        LIMIT: A limit stopped the search, with or without an incumbent.
        INFEASIBLE: No feasible plan exists.
    """
    OK = 0
    INVALID = 1
    LIMIT = 2
    INFEASIBLE = 3


LogLevel_L = Literal['quiet', 'info', 'debug']

# Physics defaults applied when an instance omits the physics block.
DEFAULT_G = 9.81
DEFAULT_C_R = 0.01

# Relative tolerance used when checking model rows and solution values.
FEASIBILITY_TOL = 1e-6
INTEGRALITY_TOL = 1e-6

# Oracle search-space guard.
ORACLE_MAX_STATIONS = 4
ORACLE_MAX_PERIODS = 3
ORACLE_MAX_STORAGE = 4


__all__ = [
    'OBJECTIVE',
    'Objective_L',
    'Objective_M',
    'VAR_KIND',
    'RELATION',
    'VAR_ROLE',
    'FAMILY',
    'family_list',
    'SOLVE_STATUS',
    'LP_STATUS',
    'PROFILE',
    'Profile_L',
    'Profile_M',
    'EXPORT_FORMAT',
    'ExportFormat_L',
    'ExportFormat_M',
    'EXIT_CODE',
    'LogLevel_L',
    'DEFAULT_G',
    'DEFAULT_C_R',
    'FEASIBILITY_TOL',
    'INTEGRALITY_TOL',
    'ORACLE_MAX_STATIONS',
    'ORACLE_MAX_PERIODS',
    'ORACLE_MAX_STORAGE',
]
