"""Command line: ``districting {solve,score,gen}``.

Exit codes: 0 feasible plan, 2 best plan infeasible, 1 bad input.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .arr import ArrConfig, run_arr
from .generate import grid_instance, random_planar_instance
from .instance_io import (
    InstanceError,
    InstanceFiles,
    evaluate_plan,
    load_instance,
    read_assignment,
    write_assignment,
    write_instance,
)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2


def _instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nodes", type=Path, required=True, help="CSV with columns id,population")
    p.add_argument("--edges", type=Path, required=True, help="CSV with columns source,target")
    p.add_argument("--patches", type=Path, help="extra source,target edges joining components")
    p.add_argument("--districts", "-k", type=int, required=True)
    p.add_argument("--deviation", default="0.05", help="max relative deviation from mean population")


def _files(args: argparse.Namespace) -> InstanceFiles:
    return InstanceFiles(args.nodes, args.edges, args.patches)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="districting", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run adaptive randomized rounding")
    _instance_args(p)
    p.add_argument("--max-trials", type=int, default=1000)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("down", "up"), default="down")
    p.add_argument("--reset-divisor", type=int, default=20)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", type=Path, default=Path("."))

    p = sub.add_parser("score", help="evaluate an existing assignment")
    _instance_args(p)
    p.add_argument("--assignment", type=Path, required=True, help="CSV with columns id,district")
    p.add_argument("--out", type=Path, help="also write the report here")

    p = sub.add_parser("gen", help="write a synthetic instance")
    p.add_argument("kind", choices=("grid", "random-planar"))
    p.add_argument("--rows", type=int, default=10)
    p.add_argument("--cols", type=int, default=10)
    p.add_argument("--n", type=int, default=100, help="node count for random-planar")
    p.add_argument("--target-edges", type=int, help="thin random-planar down to this many edges")
    p.add_argument("--populations", choices=("unit", "random"), default="unit")
    p.add_argument("--pop-min", type=int, default=1000)
    p.add_argument("--pop-max", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", type=Path, default=Path("."))
    return parser


def cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(_files(args), args.districts, args.deviation)
    cfg = ArrConfig(
        max_trials=args.max_trials,
        mode=args.mode,
        reset_run_divisor=args.reset_divisor,
        rng_seed=args.seed,
        restarts=args.restarts,
        workers=args.workers,
    )
    t0 = time.perf_counter()
    res = run_arr(inst, cfg)
    elapsed = time.perf_counter() - t0

    report = evaluate_plan(inst, res.plan)
    report.first_feasible_trial = res.trace.first_feasible_trial
    report.total_trials = res.total_trials
    report.rng_seed = args.seed
    report.wall_time = elapsed

    args.out_dir.mkdir(parents=True, exist_ok=True)
    write_assignment(inst.graph, res.plan, args.out_dir / "assignment.csv")
    report.write(args.out_dir / "report.txt")
    print("\n".join(report.lines()))
    print(f"wall_time_s={elapsed:.3f}", file=sys.stderr)
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_score(args: argparse.Namespace) -> int:
    inst = load_instance(_files(args), args.districts, args.deviation)
    plan = read_assignment(args.assignment, inst.graph, inst.k)
    report = evaluate_plan(inst, plan)
    if args.out:
        report.write(args.out)
    print("\n".join(report.lines()))
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_gen(args: argparse.Namespace) -> int:
    pop_range = (args.pop_min, args.pop_max)
    if args.kind == "grid":
        g = grid_instance(args.rows, args.cols, args.populations == "random", args.seed, pop_range)
    else:
        if args.populations == "unit":
            pop_range = (1, 1)
        g = random_planar_instance(args.n, args.seed, args.target_edges, pop_range)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    write_instance(g, args.out_dir / "nodes.csv", args.out_dir / "edges.csv")
    print(f"nodes={g.node_count}\nedges={g.edge_count}")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "score": cmd_score, "gen": cmd_gen}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InstanceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
