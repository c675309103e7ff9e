"This file contains the run report printed by the command-line interface"

import math
from dataclasses import asdict, dataclass, field

from tabulate import tabulate

from ._general import SolveStats


def _strict_json(value):
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _strict_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_strict_json(v) for v in value]
    return value


@dataclass
class RunReport:
    """Outcome of one ``solve`` run.

    Attributes:
        n: Number of stations.
        nt: Number of periods.
        objective: ``'energy'`` or ``'distance'``.
        method: ``'bb'`` or ``'oracle'``.
        status: Solve status.
        objective_value: Recomputed objective (J or m).
        energy: Recomputed energy of the solution (J).
        tour_count: Periods with a tour.
        stops: Stations visited, one list per period.
        tours: Per period tour summaries, see ``Solution.tour_summaries``.
        stats: Branch-and-bound statistics, None for the oracle.
        breakdown: Per period energy split, see ``tour_energy_breakdown``.
    """
    n: int
    nt: int
    objective: str
    method: str
    status: str
    objective_value: float | None = None
    energy: float | None = None
    tour_count: int = 0
    stops: list[list[int]] = field(default_factory=list)
    tours: list[dict] = field(default_factory=list)
    stats: SolveStats | None = None
    breakdown: list[dict] = field(default_factory=list)

    def key_values(self) -> list[str]:
        "Machine readable ``key=value`` lines."
        pairs = [
            ('n', self.n), ('nt', self.nt), ('objective', self.objective),
            ('method', self.method), ('status', self.status),
            ('objective_value', self.objective_value), ('energy_j', self.energy),
            ('tour_count', self.tour_count),
        ]
        if self.stats is not None:
            pairs += [
                ('nodes', self.stats.nodes_explored),
                ('lp_iterations', self.stats.lp_iterations),
                ('best_bound', self.stats.best_bound),
                ('root_bound', self.stats.root_bound),
                ('wall_time_s', round(self.stats.wall_time, 6)),
            ]
        return [f'{k}={"" if v is None else v}' for k, v in pairs]

    def render(self) -> str:
        "Human readable tables followed by the ``key=value`` section."
        parts = [f'{self.objective} objective, {self.method}: {self.status}']
        if self.breakdown:
            rows = [[r['t'], ' '.join(map(str, self.stops[r['t'] - 1])) or '-',
                     self.tours[r['t'] - 1]['boxes'] if self.tours else None,
                     r['energy'], r['vehicle'], r['payload'], r['traction'], r['rolling'],
                     r['stop_penalty']]
                    for r in self.breakdown]
            parts.append(tabulate(
                rows,
                headers=['t', 'stops', 'boxes', 'energy J', 'vehicle J', 'payload J',
                         'traction J', 'rolling J', 'stop J'],
                tablefmt='simple', floatfmt='.3f', missingval='-'))
        parts.append('\n'.join(self.key_values()))
        return '\n\n'.join(parts) + '\n'

    def to_dict(self) -> dict:
        "JSON ready dictionary, non-finite numbers as None."
        return _strict_json(asdict(self))
