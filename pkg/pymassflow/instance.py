"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

Instance parsing, rendering, validation and generation.

An instance file is a UTF-8 JSON object::

    {
      "stations": [{"position_m": 50, "box_mass_kg": 10, "storage_cap": 2,
                    "initial_inventory": 0, "demand": [2]}],
      "vehicle": {"mass_kg": 100, "cap_boxes": 2, "v_max_mps": 5,
                  "accel_mps2": 1, "decel_mps2": 1},
      "physics": {"g": 9.81, "c_r": 0.01},
      "nt": 1,
      "loop_length_m": 100
    }
"""
import json
import logging
import os

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import maximum_flow

from ._classes._instance_class import Instance, PhysicsParams, Station, VehicleParams
from ._config import _conf
from .common import InstanceError, _get_literal
from .constants import DEFAULT_C_R, DEFAULT_G, PROFILE, Profile_L, Profile_M

logger = logging.getLogger(__name__)

_TOP_KEYS = {'stations', 'vehicle', 'physics', 'nt', 'loop_length_m'}
_TOP_REQUIRED = {'stations', 'vehicle', 'nt', 'loop_length_m'}
_STATION_KEYS = {'position_m', 'box_mass_kg', 'storage_cap', 'initial_inventory', 'demand'}
_STATION_REQUIRED = {'position_m', 'box_mass_kg', 'storage_cap', 'demand'}
_VEHICLE_KEYS = {'mass_kg', 'cap_boxes', 'v_max_mps', 'accel_mps2', 'decel_mps2'}
_PHYSICS_KEYS = {'g', 'c_r'}


def _check_keys(obj, allowed: set, required: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise InstanceError(f'{where} must be a JSON object')
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise InstanceError(f'unknown key(s) {unknown} in {where}')
    missing = sorted(required - set(obj))
    if missing:
        raise InstanceError(f'missing required field(s) {missing} in {where}')


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceError(f'{where} must be a number, got {value!r}')
    return value


def _count(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(f'{where} must be an integer, got {value!r}')
    return value


def parse_instance(text: str) -> Instance:
    """
    Parse an instance from its JSON text.

    Physics defaults (``g=9.81``, ``c_r=0.01``) are applied when the
    ``physics`` block or one of its fields is omitted; ``initial_inventory``
    defaults to 0.

    Args:
        text (str): Instance file contents.

    Raises:
        InstanceError: Syntax error (with line/column), unknown or missing
            keys, wrong value types or a demand vector whose length is not NT.

    Returns:
        Instance: Fully populated instance.

    Examples:
        >>> from pymassflow import parse_instance
        >>> inst = parse_instance(open('single_station.json').read())
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise InstanceError(f'syntax error: {err.msg}', (err.lineno, err.colno)) from err

    _check_keys(raw, _TOP_KEYS, _TOP_REQUIRED, 'instance')
    nt = _count(raw['nt'], 'nt')

    vehicle_raw = raw['vehicle']
    _check_keys(vehicle_raw, _VEHICLE_KEYS, _VEHICLE_KEYS, 'vehicle')
    vehicle = VehicleParams(
        m_v=_number(vehicle_raw['mass_kg'], 'vehicle.mass_kg'),
        cap_boxes=_count(vehicle_raw['cap_boxes'], 'vehicle.cap_boxes'),
        v_max=_number(vehicle_raw['v_max_mps'], 'vehicle.v_max_mps'),
        a_acc=_number(vehicle_raw['accel_mps2'], 'vehicle.accel_mps2'),
        a_dec=_number(vehicle_raw['decel_mps2'], 'vehicle.decel_mps2'),
    )

    physics_raw = raw.get('physics', {})
    _check_keys(physics_raw, _PHYSICS_KEYS, set(), 'physics')
    physics = PhysicsParams(
        g=_number(physics_raw.get('g', DEFAULT_G), 'physics.g'),
        c_r=_number(physics_raw.get('c_r', DEFAULT_C_R), 'physics.c_r'),
    )

    if not isinstance(raw['stations'], list):
        raise InstanceError('stations must be a JSON array')
    stations = []
    for k, station_raw in enumerate(raw['stations'], start=1):
        where = f'stations[{k - 1}]'
        _check_keys(station_raw, _STATION_KEYS, _STATION_REQUIRED, where)
        demand = station_raw['demand']
        if not isinstance(demand, list):
            raise InstanceError(f'{where}.demand must be a JSON array')
        if len(demand) != nt:
            raise InstanceError(
                f'demand length mismatch in {where}: {len(demand)} entries, nt={nt}')
        stations.append(Station(
            index=k,
            position=_number(station_raw['position_m'], f'{where}.position_m'),
            box_mass=_number(station_raw['box_mass_kg'], f'{where}.box_mass_kg'),
            storage_cap=_count(station_raw['storage_cap'], f'{where}.storage_cap'),
            initial_inventory=_count(station_raw.get('initial_inventory', 0),
                                     f'{where}.initial_inventory'),
            demand=tuple(_count(d, f'{where}.demand') for d in demand),
        ))

    return Instance(
        stations=tuple(stations),
        vehicle=vehicle,
        physics=physics,
        nt=nt,
        loop_length=_number(raw['loop_length_m'], 'loop_length_m'),
    )


def render_instance(inst: Instance) -> str:
    """
    Render an instance as JSON text accepted by :func:`parse_instance`.

    ``parse_instance(render_instance(inst)) == inst`` for every instance.

    Args:
        inst (Instance): Instance to render.

    Returns:
        str: JSON text with a trailing newline.
    """
    raw = {
        'stations': [
            {
                'position_m': s.position,
                'box_mass_kg': s.box_mass,
                'storage_cap': s.storage_cap,
                'initial_inventory': s.initial_inventory,
                'demand': list(s.demand),
            }
            for s in inst.stations
        ],
        'vehicle': {
            'mass_kg': inst.vehicle.m_v,
            'cap_boxes': inst.vehicle.cap_boxes,
            'v_max_mps': inst.vehicle.v_max,
            'accel_mps2': inst.vehicle.a_acc,
            'decel_mps2': inst.vehicle.a_dec,
        },
        'physics': {'g': inst.physics.g, 'c_r': inst.physics.c_r},
        'nt': inst.nt,
        'loop_length_m': inst.loop_length,
    }
    return json.dumps(raw, indent=2) + '\n'


def load_instance(path: str) -> Instance:
    """Read and parse an instance file.

    Raises:
        InstanceError: File cannot be read or parsed.
    """
    try:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    except OSError as err:
        raise InstanceError(f'cannot read instance "{path}": {err.strerror}') from err
    return parse_instance(text)


def load_bundled(name: str) -> Instance:
    """
    Load one of the reference instances shipped with the package.

    Args:
        name (str): ``'single_station'``, ``'counterexample_distance_vs_energy'``
            or ``'periodic_demo'``.

    Examples:
        >>> from pymassflow import load_bundled
        >>> inst = load_bundled('single_station')
    """
    return load_instance(os.path.join(_conf.instance_directory, f'{name}.json'))


def bundled_names() -> list[str]:
    "Names of the instances found in the bundled instance directory."
    return sorted(f[:-5] for f in os.listdir(_conf.instance_directory) if f.endswith('.json'))


def _net_of_initial_stock(inst: Instance) -> tuple[np.ndarray, np.ndarray]:
    """Demands and storage left for delivered boxes once the initial stock is used first.

    Boxes are identical, so consuming the initial stock first loses nothing.
    Returns ``(demands, caps)``, both of shape ``(n, nt)``.
    """
    demands = inst.demands.copy()
    caps = np.repeat(inst.storage_caps[:, None], inst.nt, axis=1)
    for k, s in enumerate(inst.stations):
        left = s.initial_inventory
        for t in range(inst.nt):
            caps[k, t] -= left
            used = min(left, demands[k, t])
            demands[k, t] -= used
            left -= used
    return demands, caps


def _capacity_infeasible_period(inst: Instance) -> int | None:
    """First period t for which periods 1..t admit no delivery schedule.

    Deliveries are a flow: source -> period node (capacity A) -> station
    stock node (station, t) -> demand sink, with stock carried to the next
    period. Stock nodes are split so that Z^t + IL^{t-1} <= c_i holds.
    Returns None when the whole horizon is schedulable.
    """
    n, nt = inst.n, inst.nt
    demands, caps = _net_of_initial_stock(inst)
    cap_a = inst.vehicle.cap_boxes
    big = int(demands.sum() + 1)

    for horizon in range(1, nt + 1):
        # nodes: 0 source, 1 sink, periods, stock-in, stock-out
        period_node = {t: 2 + t - 1 for t in range(1, horizon + 1)}
        base = 2 + horizon
        stock_in = {(i, t): base + 2 * ((i - 1) * horizon + (t - 1))
                    for i in range(1, n + 1) for t in range(1, horizon + 1)}
        n_nodes = base + 2 * n * horizon
        rows, cols, vals = [], [], []

        def arc(u, v, c):
            rows.append(u)
            cols.append(v)
            vals.append(int(c))

        for t in range(1, horizon + 1):
            arc(0, period_node[t], cap_a)
            for i in range(1, n + 1):
                s_in = stock_in[(i, t)]
                arc(period_node[t], s_in, big)
                arc(s_in, s_in + 1, caps[i - 1, t - 1])
                arc(s_in + 1, 1, demands[i - 1, t - 1])
                if t < horizon:
                    arc(s_in + 1, stock_in[(i, t + 1)], big)

        graph = scipy.sparse.csr_matrix(
            (np.array(vals, dtype=np.int32), (rows, cols)), shape=(n_nodes, n_nodes))
        flow = maximum_flow(graph, 0, 1).flow_value
        if flow < int(demands[:, :horizon].sum()):
            return horizon
    return None


def structural_issues(inst: Instance) -> list[str]:
    "Violations of the structural rules of an instance, schedule existence aside."
    issues = []
    veh, phys = inst.vehicle, inst.physics

    if inst.n < 1:
        issues.append('instance needs at least one station')
    if inst.nt < 1:
        issues.append('nt must be at least 1')
    if not phys.g > 0:
        issues.append('physics.g must be positive')
    if not 0 < phys.c_r < 1:
        issues.append('physics.c_r must lie in (0, 1)')
    for name, value in (('mass_kg', veh.m_v), ('cap_boxes', veh.cap_boxes),
                        ('v_max_mps', veh.v_max), ('accel_mps2', veh.a_acc),
                        ('decel_mps2', veh.a_dec)):
        if not value > 0:
            issues.append(f'vehicle.{name} must be positive')
    if veh.a_dec > 0 and phys.g > 0 and not veh.a_dec > phys.g * phys.c_r:
        issues.append('vehicle.decel_mps2 must exceed g * c_r')

    previous = 0.0
    for k, s in enumerate(inst.stations, start=1):
        if s.index != k:
            issues.append(f'station {k}: index {s.index} out of sequence')
        if not s.position > previous:
            issues.append(f'station {k}: position must be strictly increasing from the depot')
        previous = max(previous, s.position)
        if not s.box_mass > 0:
            issues.append(f'station {k}: box mass must be positive')
        if s.storage_cap < 0:
            issues.append(f'station {k}: negative storage capacity')
        if s.initial_inventory < 0:
            issues.append(f'station {k}: negative initial inventory')
        if s.initial_inventory > s.storage_cap:
            issues.append(f'station {k}: inventory exceeds storage')
        if len(s.demand) != inst.nt:
            issues.append(f'station {k}: demand length mismatch')
        if any(d < 0 for d in s.demand):
            issues.append(f'station {k}: negative demand')
    if inst.n and not inst.loop_length > previous:
        issues.append('loop_length_m must exceed the position of the last station')
    return issues


def validate_instance(inst: Instance) -> list[str]:
    """
    Check every structural rule of an instance and the existence of a
    delivery schedule.

    Schedule existence is only checked on structurally valid instances.

    Args:
        inst (Instance): Instance to check.

    Returns:
        list[str]: Violations, empty when the instance is valid.

    Examples:
        >>> from pymassflow import validate_instance
        >>> validate_instance(inst)
        []
    """
    return structural_issues(inst) or schedule_issues(inst)


def schedule_issues(inst: Instance) -> list[str]:
    """
    Reasons a structurally valid instance admits no delivery schedule.

    Returns:
        list[str]: Empty when every demand can be met, otherwise the demands
        exceeding storage or the first period no schedule can reach.
    """
    issues = []
    # Z^t + IL^{t-1} <= c and IL^t >= 0 imply d^t <= c at every period.
    for k, s in enumerate(inst.stations, start=1):
        for t, d in enumerate(s.demand, start=1):
            if d > s.storage_cap:
                issues.append(
                    f'station {k}: demand {d} exceeds storage {s.storage_cap} at period {t}')
    if issues:
        return issues

    t_bad = _capacity_infeasible_period(inst)
    if t_bad is not None:
        issues.append(f'capacity infeasible at period {t_bad}')
    return issues


def max_transport_mass(inst: Instance) -> float:
    """
    Largest mass the vehicle can move, ``m_v + A * max_i m_i`` (kg).

    Used as the big-M of the mass/arc linking rows.

    Examples:
        >>> max_transport_mass(inst)
        180.0
    """
    if inst.vehicle.cap_boxes == 0 or inst.n == 0:
        return float(inst.vehicle.m_v)
    return float(inst.vehicle.m_v + inst.vehicle.cap_boxes * inst.box_masses.max())


def generate_instance(
        seed: int,
        n: int,
        nt: int,
        profile: PROFILE | Profile_L = 'uniform',
        ) -> Instance:
    """
    Generate a random valid instance.

    The result is a pure function of the arguments. Storage capacities are
    kept within 1..3 boxes so generated instances stay within reach of the
    exhaustive oracle.

    Args:
        seed (int): Random seed.
        n (int): Number of stations, at least 1.
        nt (int): Number of periods, at least 1.
        profile (PROFILE | str): ``'uniform'`` draws every demand
            independently; ``'periodic'`` repeats a base pattern per station.

    Raises:
        MassFlowException: Unknown profile name.
        InstanceError: ``n`` or ``nt`` below 1.

    Examples:
        >>> from pymassflow import generate_instance
        >>> inst = generate_instance(1, n=3, nt=2, profile='periodic')
    """
    profile = _get_literal(profile, Profile_M)
    if profile not in (PROFILE.UNIFORM, PROFILE.PERIODIC):
        raise InstanceError(f'unknown profile {profile!r}')
    if n < 1 or nt < 1:
        raise InstanceError(f'n and nt must be at least 1, got n={n}, nt={nt}')

    rng = np.random.default_rng(seed)
    gaps = rng.integers(15, 61, size=n + 1)
    positions = np.cumsum(gaps[:n]).astype(float)
    loop_length = float(positions[-1] + gaps[n])
    box_masses = rng.choice([5.0, 8.0, 10.0, 12.0, 15.0, 20.0], size=n)
    caps = rng.integers(1, 4, size=n)
    initial = np.array([rng.integers(0, c + 1) for c in caps])

    if profile == PROFILE.UNIFORM:
        demands = np.array([rng.integers(0, c + 1, size=nt) for c in caps])
    else:
        period = int(rng.integers(1, 3))
        base = np.array([rng.integers(0, c + 1, size=period) for c in caps])
        demands = np.tile(base, (1, -(-nt // period)))[:, :nt]

    # Just-in-time delivery is always possible with A >= the largest per-period demand.
    cap_boxes = int(max(1, demands.sum(axis=0).max()) + rng.integers(0, 3))

    stations = tuple(
        Station(
            index=k + 1,
            position=float(positions[k]),
            box_mass=float(box_masses[k]),
            storage_cap=int(caps[k]),
            initial_inventory=int(initial[k]),
            demand=tuple(int(d) for d in demands[k]),
        )
        for k in range(n)
    )
    inst = Instance(
        stations=stations,
        vehicle=VehicleParams(m_v=100.0, cap_boxes=cap_boxes, v_max=5.0, a_acc=1.0, a_dec=1.0),
        physics=PhysicsParams(),
        nt=nt,
        loop_length=loop_length,
    )
    logger.debug('generated instance seed=%d n=%d nt=%d profile=%s', seed, n, nt, profile.name)
    return inst


__all__ = [
    'parse_instance',
    'render_instance',
    'load_instance',
    'load_bundled',
    'bundled_names',
    'structural_issues',
    'validate_instance',
    'schedule_issues',
    'max_transport_mass',
    'generate_instance',
]
