"""Command-line front end: ``mfpc <subcommand>``.

Exit codes: 0 success, 1 infeasible solution or violation, 2 usage error,
3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import bench
from .generator import GeneratorError, GenParams, generate, grid_params
from .greedy import DEFAULT_RESTARTS
from .instance import (
    InstanceFormatError, check_feasible, read_instance, read_solution, serialize_solution, write_instance,
)
from .model import build_model, export_lp

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _cmd_generate(args):
    params = GenParams(args.nodes, args.arc_density, args.conflict_density, args.capacity_regime, args.seed)
    write_instance(generate(params), args.out)
    print(f"{args.out}: n={params.n} m={params.m} w={params.w}")
    return EXIT_OK


def _cmd_generate_grid(args):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for params in grid_params(args.seed):
        path = out_dir / f"{params.instance_id}.txt"
        write_instance(generate(params), path)
        print(f"{path}: n={params.n} m={params.m} w={params.w}")
    return EXIT_OK


def _cmd_solve(args):
    inst = read_instance(args.instance)
    outcome = bench.solve_method(inst, args.method, args.time_limit, args.seed, args.restarts, args.node_limit)
    record = bench.make_record(Path(args.instance).stem, inst, args.method, outcome, args.seed)
    writer = csv.writer(sys.stdout)
    writer.writerow(bench.CSV_HEADER)
    writer.writerow(record.row())
    if args.out:
        Path(args.out).write_text(serialize_solution(outcome.best))
    return EXIT_OK


def _cmd_verify(args):
    inst = read_instance(args.instance)
    sol = read_solution(args.solution, inst.arc_count)
    verdict = check_feasible(inst, sol)
    print(f"total {sol.total}")
    if verdict.ok:
        print("feasible")
        return EXIT_OK
    print(f"infeasible: {len(verdict.violations)} violation(s)")
    for v in verdict.violations:
        print(f"  {v.kind}: {v.detail}")
    return EXIT_INFEASIBLE


def _cmd_export(args):
    text = export_lp(build_model(read_instance(args.instance)))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_bench(args):
    methods = [m for m in args.methods.split(",") if m]
    records = bench.run_bench(args.instances, methods, args.time_limit, args.out, args.seed,
                              args.restarts, args.solutions_dir)
    if args.out is None:
        writer = csv.writer(sys.stdout)
        writer.writerow(bench.CSV_HEADER)
        for r in records:
            writer.writerow(r.row())
    if args.best_known:
        rows = bench.gap_table(records, bench.read_best_known(args.best_known))
        for row in rows:
            print(f"{row['instance_id']} {row['method']}: gap_lb {row['gap_lb']:.2f}% gap_ub {row['gap_ub']:.2f}%",
                  file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfpc", description="Maximum flow with conflict constraints.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate one benchmark instance")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--arc-density", type=float, required=True)
    p.add_argument("--conflict-density", type=float, required=True)
    p.add_argument("--capacity-regime", type=int, choices=(1, 2), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("generate-grid", help="generate the 160-instance grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_generate_grid)

    p = sub.add_parser("solve", help="solve one instance and print a result row")
    p.add_argument("instance")
    p.add_argument("--method", choices=bench.METHODS, default="bnb")
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--node-limit", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--out", help="write the best solution here")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("export", help="export the MILP model in LP format")
    p.add_argument("instance")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("bench", help="run methods over instance files and write CSV")
    p.add_argument("instances", nargs="+")
    p.add_argument("--methods", default="bnb,greedy", help="comma-separated: " + ",".join(bench.METHODS))
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--out")
    p.add_argument("--solutions-dir")
    p.add_argument("--best-known", help="CSV with instance_id,bk_lb,bk_ub for gap reporting")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (bench.UnknownMethodError, GeneratorError) as exc:
        print(f"mfpc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if isinstance(exc, InstanceFormatError):
            print(f"mfpc: parse error: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"mfpc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"mfpc: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
