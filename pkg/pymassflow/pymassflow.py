"""Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms."""

from . import constants as _constants
from . import energy as _energy
from . import formats as _formats
from . import instance as _instance
from . import model as _model
from . import oracle as _oracle
from . import solution as _solution
from . import solver as _solver
from . import validate as _validate
from ._classes._energy_class import EnergyMatrix, MotionProfile
from ._classes._instance_class import Instance, PhysicsParams, Station, VehicleParams
from ._classes._model_class import MilpModel, Solution
from ._classes._report_class import RunReport
from ._config import override_instance_directory, override_workers, set_log_level
from .common import (
    MassFlowException,
    InstanceError,
    ModelError,
    SolverError,
    InfeasibleError,
    IntegralityError,
    OracleLimitError,
    FormatError,
    LimitWarning,
    DualityWarning,
    _get_literal,
)
from .constants import *
from .energy import *
from .formats import *
from .instance import *
from .model import *
from .oracle import *
from .solution import *
from .solver import *
from .validate import *
from .version import VERSION


def solve_instance(
        inst: Instance,
        objective: OBJECTIVE | Objective_L = 'energy',
        limits: SolveLimits | None = None,
        ) -> tuple[Solution | None, SolveStats]:
    """Build the model of an instance and solve it by branch-and-bound.

    Args:
        inst (Instance): Instance to solve.
        objective (OBJECTIVE | str, optional): ``'energy'`` or ``'distance'``.
        limits (SolveLimits, optional): Solver limits, see :func:`solve_bb`.

    Returns:
        tuple[Solution | None, SolveStats]: As :func:`solve_bb`.

    Examples:
        >>> import pymassflow as pmf
        >>> sol, stats = pmf.solve_instance(pmf.load_bundled('single_station'))
        >>> sol.objective_value
        3559.325
    """
    kind = OBJECTIVE(_get_literal(objective, Objective_M))
    return solve_bb(build_model(inst, energy_matrix(inst), kind), limits)


__all__ = list(_constants.__all__) + list(_energy.__all__) + list(_formats.__all__) \
    + list(_instance.__all__) + list(_model.__all__) + list(_oracle.__all__) \
    + list(_solution.__all__) + list(_solver.__all__) + list(_validate.__all__) + [
        'MassFlowException',
        'InstanceError',
        'ModelError',
        'SolverError',
        'InfeasibleError',
        'IntegralityError',
        'OracleLimitError',
        'FormatError',
        'LimitWarning',
        'DualityWarning',
        'EnergyMatrix',
        'MotionProfile',
        'Instance',
        'PhysicsParams',
        'Station',
        'VehicleParams',
        'RunReport',
        'set_log_level',
        'override_instance_directory',
        'override_workers',
        'solve_instance',
        'VERSION',
    ]
