"""Command-line front end: ``solve``, ``check`` and ``gen``."""

from __future__ import annotations

import argparse
import contextlib
import inspect
import sys
from typing import List, Optional

from . import benchgen
from .checker import check_files
from .cnf import DimacsError, parse_order, read_dimacs
from .schedule import ScheduleError, parse_schedule
from .solver import MODES, SAT, UNKNOWN, UNSAT, solve
from .trace import DIALECTS, Trace

EXIT_SAT, EXIT_UNSAT, EXIT_UNKNOWN, EXIT_ERROR = 10, 20, 30, 1


def _read(path: str) -> str:
    with open(path) as f:
        return f.read()


def cmd_solve(args) -> int:
    cnf = read_dimacs(args.cnf)
    ordering = None
    if args.order:
        ordering = parse_order(_read(args.order), cnf.num_vars)
    seed = args.seed
    if ordering is None and seed is None and args.mode == "bucket":
        seed = 0
    schedule = None
    if args.mode == "scheduled":
        if not args.schedule:
            print("error: scheduled mode requires --schedule", file=sys.stderr)
            return EXIT_ERROR
        schedule = parse_schedule(_read(args.schedule))
    elif args.schedule:
        print("warning: --schedule ignored outside scheduled mode", file=sys.stderr)

    with contextlib.ExitStack() as stack:
        out = stack.enter_context(open(args.proof, "w")) if args.proof else None
        trace = Trace(out, dialect=args.lrat_dialect, max_steps=args.max_steps)
        solver = solve(cnf, args.mode, trace=trace, ordering=ordering, seed=seed,
                       schedule=schedule, max_nodes=args.max_nodes,
                       delete_inputs=args.delete_inputs)
    verdict = solver.verdict
    stats = solver.stats()
    print("s %s" % ("UNSATISFIABLE" if verdict.status == UNSAT else
                    "SATISFIABLE" if verdict.status == SAT else "UNKNOWN"))
    if verdict.status == SAT and args.verbose:
        w = verdict.witness
        print("v " + " ".join(str(v if w[v] else -v) for v in sorted(w)) + " 0")
    if verdict.status == UNKNOWN and verdict.reason:
        print("c %s" % verdict.reason)
    for line in stats.lines():
        print(line)
    if args.verbose:
        for key, value in sorted(stats.extra.items()):
            print("%s=%d" % (key, value))
    return {UNSAT: EXIT_UNSAT, SAT: EXIT_SAT}.get(verdict.status, EXIT_UNKNOWN)


def cmd_check(args) -> int:
    result = check_files(args.cnf, args.lrat)
    if result.accepted:
        print(result.describe())
        if args.verbose:
            print("non-fresh-pivots=%d" % result.non_fresh_pivots)
        return 0
    print(result.describe(), file=sys.stderr)
    return 1


def cmd_gen(args) -> int:
    gen = benchgen.FAMILIES[args.family]
    kwargs = {}
    if args.seed is not None:
        if "seed" not in inspect.signature(gen).parameters:
            print("error: family %s takes no seed" % args.family, file=sys.stderr)
            return EXIT_ERROR
        kwargs["seed"] = args.seed
    bundle = gen(args.n, **kwargs)
    if args.output:
        for path in bundle.write(args.output):
            print(path)
    else:
        bundle.cnf.write(sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bddproof", description="BDD-based SAT solver with LRAT proofs")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a DIMACS CNF")
    s.add_argument("cnf")
    s.add_argument("--mode", choices=MODES, default="bucket")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--order", metavar="FILE", help="variable ordering, one variable per line (top first)")
    g.add_argument("--seed", type=int, help="random variable ordering seed")
    s.add_argument("--schedule", metavar="FILE")
    s.add_argument("--proof", metavar="FILE", help="write the LRAT proof here")
    s.add_argument("--max-nodes", type=int, metavar="N")
    s.add_argument("--max-steps", type=int, metavar="N")
    s.add_argument("--lrat-dialect", choices=DIALECTS, default="empty-hints")
    s.add_argument("--delete-inputs", action="store_true",
                   help="delete each input clause once its BDD is built")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="check an LRAT proof against a CNF")
    c.add_argument("cnf")
    c.add_argument("lrat")
    c.add_argument("-v", "--verbose", action="store_true")
    c.set_defaults(func=cmd_check)

    gen = sub.add_parser("gen", help="generate a benchmark instance")
    gen.add_argument("family", choices=sorted(benchgen.FAMILIES))
    gen.add_argument("-n", type=int, required=True, help="size parameter (m for Urquhart)")
    gen.add_argument("--seed", type=int)
    gen.add_argument("-o", "--output", metavar="STEM", help="write STEM.cnf (+ .order/.sched)")
    gen.set_defaults(func=cmd_gen)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, DimacsError, ScheduleError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
