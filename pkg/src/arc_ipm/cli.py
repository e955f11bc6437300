"""``arc-ipm`` command line: list problems, solve one, run a suite, build a profile.

Exit codes: 0 on success, 2 when a solve does not converge, 3 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys

from . import bench, problems
from .errors import ArcIpmError, IoError, UnknownProblem
from .solvers import Method, SolverConfig, solve
from .step import StepParams

EXIT_OK = 0
EXIT_UNATTAINED = 2
EXIT_USAGE = 3

TRACE_HEADER = ("iteration", "merit", "mu", "sigma", "alpha", "alpha_tilde", "hat_active", "backtracks", "merit_new")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arc-ipm", description="Arc-search and line-search interior-point solvers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list-problems", help="print the built-in problems and their tags")

    p = sub.add_parser("solve", help="solve one built-in problem")
    p.add_argument("--problem", required=True)
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.ARC.value)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--beta", type=float, default=0.1)
    p.add_argument("--fd-eps", type=float, default=1e-4)
    p.add_argument("--trace", help="write per-iteration records to this CSV file")

    b = sub.add_parser("bench", help="run a suite and write run records")
    b.add_argument("--suite", default="all", help="qcqp, others, all or a comma-separated list of names")
    b.add_argument("--methods", default="arc,line")
    b.add_argument("--out", required=True)

    f = sub.add_parser("profile", help="performance profile from a run-record CSV")
    f.add_argument("--input", required=True)
    f.add_argument("--metric", choices=bench.METRICS, default="iters")
    f.add_argument("--out", required=True)
    return parser


def _config(args) -> SolverConfig:
    try:
        step = StepParams(delta=args.delta, beta=args.beta)
        return SolverConfig(method=Method(args.method), tol=args.tol, max_iter=args.max_iter,
                            step=step, fd_eps=args.fd_eps)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write_trace(path, trace):
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(TRACE_HEADER)
            for rec in trace:
                row = dataclasses.asdict(rec)
                writer.writerow([bench._fmt(row[k]) for k in TRACE_HEADER])
    except OSError as exc:
        raise IoError(path, exc) from exc


def _cmd_list(args) -> int:
    for name in problems.available():
        prob_tag = problems.tag_of(name).value
        print(f"{name:10s} {prob_tag}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    cfg = _config(args)
    prob = problems.get(args.problem)
    rep = solve(prob, cfg)
    print(f"problem={rep.problem} method={rep.method.value} status={rep.status_label} "
          f"objective={rep.objective:.10g} iterations={rep.iterations} merit={rep.merit_final:.3e} "
          f"time_s={rep.wall_time:.4f}")
    if rep.reason:
        print(f"reason: {rep.reason}")
    if args.trace:
        _write_trace(args.trace, rep.trace)
    return EXIT_OK if rep.converged else EXIT_UNATTAINED


def _cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    try:
        methods = [Method(m) for m in methods]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    suite = args.suite if args.suite.lower() in bench.SUITES else [s.strip() for s in args.suite.split(",")]
    records = bench.run_suite(suite, methods)
    bench.emit_csv(records, args.out)
    for rec in records:
        print(f"{rec.problem:10s} {rec.method:15s} {rec.status:15s} obj={rec.objective:.6g} it={rec.iterations}")
    return EXIT_OK


def _cmd_profile(args) -> int:
    records = bench.read_records(args.input)
    curves = bench.performance_profile(records, args.metric)
    bench.emit_csv(curves, args.out)
    for c in curves:
        print(f"{c.method}: {len(c.points)} points, final fraction {c.points[-1][1]:.3f}")
    return EXIT_OK


_COMMANDS = {"list-problems": _cmd_list, "solve": _cmd_solve, "bench": _cmd_bench, "profile": _cmd_profile}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, UnknownProblem, IoError, ValueError) as exc:
        print(f"arc-ipm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArcIpmError as exc:
        print(f"arc-ipm: error: {exc}", file=sys.stderr)
        return EXIT_UNATTAINED


if __name__ == "__main__":
    sys.exit(main())
