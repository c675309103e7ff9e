"""
Copyright (C) 2025-2025 pyMassFlow developers. See LICENSE file for terms.

Command-line entry point::

    pymassflow solve --instance single_station --method oracle
    pymassflow compare --instance counterexample_distance_vs_energy
    pymassflow export --instance single_station --format mps
    pymassflow validate --instance periodic_demo --solution sol.json
    pymassflow gen --seed 1 --stations 3 --periods 2 --profile periodic

``--instance`` takes a file path or the name of a bundled instance. The
exit code is the only machine contract, see :class:`EXIT_CODE`.
"""
import argparse
import json
import logging
import os
import sys
import warnings

from tabulate import tabulate

from ._classes._energy_class import EnergyMatrix
from ._classes._general import SolveLimits, SolveStats
from ._classes._instance_class import Instance
from ._classes._model_class import Solution
from ._classes._report_class import RunReport
from ._config import _conf, set_log_level
from .common import InfeasibleError, InstanceError, LimitWarning, MassFlowException, \
    _get_literal
from .constants import (
    EXIT_CODE,
    EXPORT_FORMAT,
    ExportFormat_M,
    OBJECTIVE,
    Objective_M,
    SOLVE_STATUS,
)
from .energy import energy_matrix, export_energy_csv
from .formats import export_lp, export_mps
from .instance import (
    bundled_names,
    generate_instance,
    load_bundled,
    load_instance,
    render_instance,
    schedule_issues,
    structural_issues,
)
from .model import build_model
from .oracle import enumerate_optimal, solution_from_plan
from .solution import solution_from_json, solution_to_json
from .solver import solve_bb
from .validate import check_feasibility, recompute_objective, tour_energy_breakdown, \
    violations_tsv

logger = logging.getLogger(__name__)


def _load(source: str) -> Instance:
    "Instance from a file path or a bundled name, structurally valid."
    if os.path.isfile(source):
        inst = load_instance(source)
    elif source in bundled_names():
        inst = load_bundled(source)
    else:
        raise InstanceError(f'no instance file or bundled instance named "{source}"')
    issues = structural_issues(inst)
    if issues:
        raise InstanceError('invalid instance: ' + '; '.join(issues))
    return inst


def _load_solvable(source: str) -> Instance:
    inst = _load(source)
    issues = schedule_issues(inst)
    if issues:
        raise InfeasibleError('no feasible delivery schedule: ' + '; '.join(issues))
    return inst


def _write(path: str | None, text: str) -> None:
    if path is None or path == '-':
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)
    logger.info('wrote %s', path)


def _limits(args, kind: OBJECTIVE) -> SolveLimits:
    try:
        return SolveLimits(
            time_limit=args.time_limit,
            node_limit=args.node_limit,
            workers=args.workers or _conf.workers,
            lexicographic_ties=kind == OBJECTIVE.DISTANCE,
        )
    except ValueError as err:
        raise MassFlowException(str(err)) from err


def _solve(
        inst: Instance,
        em: EnergyMatrix,
        kind: OBJECTIVE,
        method: str,
        limits: SolveLimits,
        ) -> tuple[Solution | None, str, SolveStats | None]:
    "Solution, status and statistics; statistics are None for the oracle."
    if method == 'oracle':
        plan, _ = enumerate_optimal(inst, em, kind)
        return solution_from_plan(inst, em, plan, kind), SOLVE_STATUS.OPTIMAL, None
    model = build_model(inst, em, kind)
    with warnings.catch_warnings():
        # The status carries the limit outcome.
        warnings.simplefilter('ignore', LimitWarning)
        sol, stats = solve_bb(model, limits)
    return sol, stats.status, stats


def _exit_code(status: str) -> EXIT_CODE:
    if status == SOLVE_STATUS.OPTIMAL:
        return EXIT_CODE.OK
    if status == SOLVE_STATUS.INFEASIBLE:
        return EXIT_CODE.INFEASIBLE
    return EXIT_CODE.LIMIT


def _report(inst, em, kind, method, sol, status, stats) -> RunReport:
    report = RunReport(
        n=inst.n,
        nt=inst.nt,
        objective=kind.name.lower(),
        method=method,
        status=status,
        stats=stats,
    )
    if sol is not None:
        report.objective_value = recompute_objective(inst, em, sol, kind)
        report.energy = recompute_objective(inst, em, sol, OBJECTIVE.ENERGY)
        report.tour_count = sol.tour_count
        report.stops = [sol.stops(t) for t in range(1, inst.nt + 1)]
        report.tours = sol.tour_summaries()
        report.breakdown = tour_energy_breakdown(inst, em, sol)
    return report


def cmd_solve(args) -> int:
    """
    Solve an instance and print its run report.

    Writes the solution to ``--out`` and the report as JSON to ``--report``
    when given. Returns 0 on a proven optimum and 2 when a limit stopped the
    search.
    """
    kind = OBJECTIVE(_get_literal(args.objective, Objective_M))
    inst = _load_solvable(args.instance)
    em = energy_matrix(inst)
    sol, status, stats = _solve(inst, em, kind, args.method, _limits(args, kind))
    report = _report(inst, em, kind, args.method, sol, status, stats)
    sys.stdout.write(report.render())
    if sol is not None and args.out:
        _write(args.out, solution_to_json(sol))
    if args.report:
        _write(args.report, json.dumps(report.to_dict(), indent=2, allow_nan=False) + '\n')
    return _exit_code(status)


def energy_ratio(energy_of_distance_run: float, energy_of_energy_run: float) -> float:
    "Ratio of the two energies, 1 when both are zero."
    if energy_of_energy_run == 0:
        return 1.0 if energy_of_distance_run == 0 else float('inf')
    return energy_of_distance_run / energy_of_energy_run


def cmd_compare(args) -> int:
    """
    Solve under both objectives and compare the energy each solution spends.

    The distance run is tie-broken towards the smallest deliveries, so
    its stop pattern is the one a distance-minded planner would pick.
    """
    inst = _load_solvable(args.instance)
    em = energy_matrix(inst)
    rows = []
    energies = {}
    codes = []
    for kind in (OBJECTIVE.ENERGY, OBJECTIVE.DISTANCE):
        sol, status, stats = _solve(inst, em, kind, args.method, _limits(args, kind))
        codes.append(_exit_code(status))
        name = kind.name.lower()
        if sol is None:
            rows.append([name, status, None, None, None])
            continue
        energies[name] = recompute_objective(inst, em, sol, OBJECTIVE.ENERGY)
        rows.append([name, status, recompute_objective(inst, em, sol, OBJECTIVE.DISTANCE),
                     energies[name], sol.tour_count])

    sys.stdout.write(tabulate(rows, headers=['objective', 'status', 'distance m', 'energy J',
                                             'tours'],
                              tablefmt='simple', floatfmt='.3f', missingval='-') + '\n\n')
    lines = [f'energy_run_energy_j={energies.get("energy", "")}',
             f'distance_run_energy_j={energies.get("distance", "")}']
    if len(energies) == 2:
        lines.append(f'energy_ratio={energy_ratio(energies["distance"], energies["energy"]):.9g}')
    sys.stdout.write('\n'.join(lines) + '\n')
    return max(codes)


def cmd_export(args) -> int:
    "Write the model as MPS or LP, or the energy matrix as CSV."
    fmt = _get_literal(args.format, ExportFormat_M)
    inst = _load(args.instance)
    em = energy_matrix(inst)
    if fmt == EXPORT_FORMAT.ENERGY_CSV:
        text = export_energy_csv(em)
    else:
        model = build_model(inst, em, args.objective)
        text = export_mps(model) if fmt == EXPORT_FORMAT.MPS else export_lp(model)
    _write(args.out, text)
    return EXIT_CODE.OK


def cmd_validate(args) -> int:
    "Check a solution file, printing violations as TSV. Returns 1 on any violation."
    inst = _load(args.instance)
    try:
        with open(args.solution, encoding='utf-8') as f:
            text = f.read()
    except OSError as err:
        raise MassFlowException(
            f'cannot read solution "{args.solution}": {err.strerror}') from err
    violations = check_feasibility(inst, solution_from_json(text, inst), args.tolerance)
    sys.stdout.write(violations_tsv(violations))
    if violations:
        logger.info('%d violation(s)', len(violations))
        return EXIT_CODE.INVALID
    return EXIT_CODE.OK


def cmd_gen(args) -> int:
    "Generate a random instance; the same arguments always give the same file."
    inst = generate_instance(args.seed, args.stations, args.periods, args.profile)
    _write(args.out, render_instance(inst))
    return EXIT_CODE.OK


def _add_solve_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--method', choices=['bb', 'oracle'], default='bb',
                        help='branch-and-bound or exhaustive enumeration')
    parser.add_argument('--time-limit', type=float, default=SolveLimits.time_limit,
                        help='wall time limit in seconds')
    parser.add_argument('--node-limit', type=int, default=SolveLimits.node_limit,
                        help='branch-and-bound node limit')
    parser.add_argument('--workers', type=int, default=None,
                        help='threads evaluating open nodes')


def build_parser() -> argparse.ArgumentParser:
    "Argument parser of the ``pymassflow`` command."
    parser = argparse.ArgumentParser(
        prog='pymassflow',
        description='Energy-optimal supplying of an assembly line by a tow train.')
    parser.add_argument('--log', choices=['quiet', 'info', 'debug'], default=None,
                        help='verbosity, defaults to $MASSFLOW_LOG or info')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', help='solve an instance')
    p.add_argument('--instance', required=True, help='instance file or bundled name')
    p.add_argument('--objective', choices=list(Objective_M), default='energy')
    _add_solve_options(p)
    p.add_argument('--out', help='solution JSON file')
    p.add_argument('--report', help='run report JSON file')
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser('compare', help='energy of the distance optimum against the energy optimum')
    p.add_argument('--instance', required=True, help='instance file or bundled name')
    _add_solve_options(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser('export', help='export the model or the energy matrix')
    p.add_argument('--instance', required=True, help='instance file or bundled name')
    p.add_argument('--format', choices=list(ExportFormat_M), default='mps')
    p.add_argument('--objective', choices=list(Objective_M), default='energy')
    p.add_argument('--out', help='output file, standard output by default')
    p.set_defaults(func=cmd_export)

    p = sub.add_parser('validate', help='check a solution file against an instance')
    p.add_argument('--instance', required=True, help='instance file or bundled name')
    p.add_argument('--solution', required=True, help='solution JSON file')
    p.add_argument('--tolerance', type=float, default=1e-6, help='relative row tolerance')
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser('gen', help='generate a random instance')
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--stations', type=int, required=True)
    p.add_argument('--periods', type=int, required=True)
    p.add_argument('--profile', choices=['uniform', 'periodic'], default='uniform')
    p.add_argument('--out', help='output file, standard output by default')
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    """
    Run the command line.

    Args:
        argv (list[str], optional): Arguments without the program name.
            Defaults to ``sys.argv[1:]``.

    Returns:
        int: Process exit code.
    """
    args = build_parser().parse_args(argv)
    try:
        set_log_level(args.log)
        return int(args.func(args))
    except InfeasibleError as err:
        logger.error('%s', err)
        return int(EXIT_CODE.INFEASIBLE)
    except MassFlowException as err:
        logger.error('%s', err)
        return int(EXIT_CODE.INVALID)


if __name__ == '__main__':
    sys.exit(main())
