"""Suite runs, performance profiles and CSV artifacts.

A profile follows the usual recipe: for problem ``p`` and method ``s`` the
ratio ``r = metric[p, s] / min_s metric[p, s]`` is formed, an unsolved pair
gets ``r = inf``, and the curve value at ``tau`` is the fraction of problems
with ``r <= tau``.  The tau grid is the sorted set of finite ratios.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from typing import Dict, Iterable, List, Sequence, Union

from . import problems
from .errors import EmptyInput, InvalidArguments, IoError
from .solvers import Method, SolverConfig, solve

RUN_HEADER = ("problem", "method", "status", "objective", "iterations", "time_s", "tag")
PROFILE_HEADER = ("method", "tau", "fraction")
SUITES = ("qcqp", "others", "all")
METRICS = ("iters", "time")


@dataclasses.dataclass(frozen=True)
class RunRecord:
    problem: str
    method: str
    status: str
    objective: float
    iterations: int
    time_s: float
    tag: str

    @property
    def solved(self) -> bool:
        return self.status == "Converged"


@dataclasses.dataclass(frozen=True)
class ProfileCurve:
    method: str
    points: tuple  # ((tau, fraction), ...)

    def value_at(self, tau: float) -> float:
        """Right-continuous step value; 0 left of the first grid point."""
        out = 0.0
        for t, frac in self.points:
            if t <= tau:
                out = frac
            else:
                break
        return out


def resolve_suite(suite: Union[str, Iterable[str]]) -> List[str]:
    if isinstance(suite, str):
        key = suite.lower()
        if key == "qcqp":
            return problems.names_with_tag(problems.Tag.QCQP)
        if key == "others":
            return problems.names_with_tag(problems.Tag.OTHER)
        if key == "all":
            return problems.available()
        suite = [suite]
    names = list(suite)
    for name in names:
        problems.tag_of(name)  # raises UnknownProblem
    return names


def run_suite(suite, methods, cfg: SolverConfig = SolverConfig()) -> List[RunRecord]:
    """Solve every (problem, method) pair; all names are checked before the first solve."""
    methods = [Method(m) for m in methods]
    if not methods:
        raise InvalidArguments("method set is empty")
    names = resolve_suite(suite)
    records = []
    for name in names:
        prob = problems.get(name)
        tag = problems.tag_of(name).value
        for method in methods:
            rep = solve(prob, dataclasses.replace(cfg, method=method))
            records.append(RunRecord(name, method.value, rep.status_label, rep.objective,
                                     rep.iterations, rep.wall_time, tag))
    return sort_records(records)


def sort_records(records: Iterable[RunRecord]) -> List[RunRecord]:
    return sorted(records, key=lambda r: (r.problem, r.method))


def _metric(rec: RunRecord, metric: str) -> float:
    if metric == "iters":
        return float(rec.iterations)
    if metric == "time":
        return float(rec.time_s)
    raise InvalidArguments(f"unknown metric {metric!r}; expected one of {', '.join(METRICS)}")


def profile_ratios(records: Sequence[RunRecord], metric: str = "iters") -> Dict[str, Dict[str, float]]:
    """method -> problem -> ratio, over the problems that enter the profile.

    A problem enters when at least one method solves it; with exactly two
    methods this is the same as dropping problems both methods failed.
    """
    if metric not in METRICS:
        raise InvalidArguments(f"unknown metric {metric!r}; expected one of {', '.join(METRICS)}")
    table: Dict[str, Dict[str, RunRecord]] = {}
    methods = []
    for rec in records:
        table.setdefault(rec.problem, {})[rec.method] = rec
        if rec.method not in methods:
            methods.append(rec.method)
    ratios = {m: {} for m in sorted(methods)}
    for prob, row in table.items():
        solved = [_metric(r, metric) for r in row.values() if r.solved]
        if not solved:
            continue
        best = min(solved)
        for m in ratios:
            rec = row.get(m)
            if rec is None or not rec.solved:
                ratios[m][prob] = math.inf
            elif best > 0:
                ratios[m][prob] = _metric(rec, metric) / best
            else:
                # zero-cost best (e.g. 0 iterations): equal costs tie at 1
                ratios[m][prob] = 1.0 if _metric(rec, metric) == 0 else math.inf
    if not any(ratios[m] for m in ratios):
        raise EmptyInput("no problem is solved by any method")
    return ratios


def performance_profile(records: Sequence[RunRecord], metric: str = "iters") -> List[ProfileCurve]:
    if not records:
        raise EmptyInput("no run records")
    ratios = profile_ratios(records, metric)
    grid = sorted({r for per in ratios.values() for r in per.values() if math.isfinite(r)})
    curves = []
    for method, per in ratios.items():
        count = len(per)
        values = sorted(per.values())
        points = tuple((tau, sum(1 for r in values if r <= tau) / count) for tau in grid)
        curves.append(ProfileCurve(method, points))
    return curves


# ---------------------------------------------------------------------------
# CSV

def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".10g")
    return str(x)


def _write_rows(path, header, rows):
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(header)
            writer.writerows([[_fmt(v) for v in row] for row in rows])
    except OSError as exc:
        raise IoError(path, exc) from exc


def emit_csv(items, path) -> None:
    """Write run records or profile curves; the item type picks the header."""
    items = list(items)
    if items and isinstance(items[0], ProfileCurve):
        rows = [(c.method, tau, frac) for c in sorted(items, key=lambda c: c.method) for tau, frac in c.points]
        _write_rows(path, PROFILE_HEADER, rows)
        return
    rows = [dataclasses.astuple(r) for r in sort_records(items)]
    _write_rows(path, RUN_HEADER, rows)


def read_records(path) -> List[RunRecord]:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != RUN_HEADER:
                raise InvalidArguments(f"{path}: expected header {','.join(RUN_HEADER)}")
            return [RunRecord(row["problem"], row["method"], row["status"], float(row["objective"]),
                              int(row["iterations"]), float(row["time_s"]), row["tag"]) for row in reader]
    except OSError as exc:
        raise IoError(path, exc) from exc


def read_curves(path) -> List[ProfileCurve]:
    try:
        with open(path, newline="") as fh:
            grouped: Dict[str, list] = {}
            for row in csv.DictReader(fh):
                grouped.setdefault(row["method"], []).append((float(row["tau"]), float(row["fraction"])))
    except OSError as exc:
        raise IoError(path, exc) from exc
    return [ProfileCurve(m, tuple(pts)) for m, pts in grouped.items()]
