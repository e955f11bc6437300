"""Arc-search, simplified arc-search and line-search interior-point loops."""

from __future__ import annotations

import dataclasses
import enum
import logging
import time
from typing import List, Optional

import numpy as np

from .errors import NumericalFailure, SingularKkt, StepFailure
from .kkt import IterateV, contract_third_order, jacobian, residual
from .model import DEFAULT_FD_EPS, ProblemDef
from .newton import (ArcDerivatives, SecondOrderMode, factorize, solve_first_order, solve_second_order,
                     solve_simplified_second_order)
from .step import MeritReference, StepParams, centering_sigma, merit_slope, select_step

logger = logging.getLogger(__name__)


class Method(str, enum.Enum):
    ARC = "arc"
    ARC_SIMPLIFIED = "arc-simplified"
    LINE = "line"


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    ITERATION_LIMIT = "IterationLimit"
    UNATTAINED = "Unattained"


@dataclasses.dataclass(frozen=True)
class InitStrategy:
    """Starting point rule: x = x0, y = 0, w = z = multiplier, s = max(g(x0), slack_floor)."""

    slack_floor: float = 1.0
    multiplier: float = 1.0


@dataclasses.dataclass(frozen=True)
class SolverConfig:
    method: Method = Method.ARC
    tol: float = 1e-8
    max_iter: int = 1000
    step: StepParams = dataclasses.field(default_factory=StepParams)
    fd_eps: float = DEFAULT_FD_EPS
    init: InitStrategy = dataclasses.field(default_factory=InitStrategy)

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.fd_eps > 0:
            raise ValueError("fd_eps must be positive")


@dataclasses.dataclass(frozen=True)
class IterationRecord:
    iteration: int
    merit: float
    mu: float
    sigma: float
    alpha: float
    alpha_tilde: float
    hat_active: bool
    backtracks: int
    merit_new: float
    # largest |w - z| at the accepted point
    wz_gap: float


@dataclasses.dataclass
class SolveReport:
    problem: str
    method: Method
    status: Status
    iterations: int
    objective: float
    merit_final: float
    wall_time: float
    x: np.ndarray
    final: IterateV
    trace: List[IterationRecord]
    reason: Optional[str] = None

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    @property
    def status_label(self) -> str:
        return self.status.value


def initialize(prob: ProblemDef, init: InitStrategy = InitStrategy()) -> IterateV:
    x = np.array(prob.x0, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        g = np.asarray(prob.ineq_constraints(x), dtype=float)
    if not np.all(np.isfinite(g)):
        raise NumericalFailure(f"{prob.name}: g(x0) is not finite")
    ones = np.full(prob.p, init.multiplier)
    return IterateV(x=x, y=np.zeros(prob.m), w=ones.copy(), s=np.maximum(g, init.slack_floor), z=ones.copy())


def _derivatives(prob, v, res, fact, sigma, cfg) -> ArcDerivatives:
    vdot = solve_first_order(fact, res, sigma)
    if cfg.method is Method.ARC:
        rhs = contract_third_order(prob, v, vdot.x, vdot.y, vdot.z, vdot.s, cfg.fd_eps)
        return ArcDerivatives(vdot, solve_second_order(fact, rhs), SecondOrderMode.FULL_SECOND_ORDER)
    if cfg.method is Method.ARC_SIMPLIFIED:
        return ArcDerivatives(vdot, solve_simplified_second_order(fact, vdot.z, vdot.s), SecondOrderMode.SIMPLIFIED)
    return ArcDerivatives(vdot, IterateV.zeros(fact.dims), SecondOrderMode.NONE)


def _run(prob: ProblemDef, cfg: SolverConfig, callback=None) -> SolveReport:
    v = initialize(prob, cfg.init)
    trace: List[IterationRecord] = []
    status, reason = Status.ITERATION_LIMIT, None

    start = time.perf_counter()
    try:
        res = residual(prob, v)
        ref = MeritReference.at(v, res)
        for k in range(cfg.max_iter + 1):
            if res.merit <= cfg.tol:
                status = Status.CONVERGED
                break
            if k == cfg.max_iter:
                break
            fact = factorize(jacobian(prob, v))
            sigma = centering_sigma(res)
            d = _derivatives(prob, v, res, fact, sigma, cfg)
            out = select_step(prob, v, d, res, ref, cfg.step, sigma, merit_slope(res, sigma))
            if callback is not None:
                callback(k, v, d, res, out)
            trace.append(IterationRecord(
                iteration=k, merit=res.merit, mu=res.mu, sigma=sigma, alpha=out.alpha,
                alpha_tilde=out.alpha_tilde, hat_active=out.hat_active, backtracks=out.backtracks_used,
                merit_new=out.merit_new, wz_gap=float(np.max(np.abs(out.trial.w - out.trial.z), initial=0.0)),
            ))
            v, res = out.trial, out.trial_residual
    except (SingularKkt, StepFailure, NumericalFailure) as exc:
        status, reason = Status.UNATTAINED, f"{type(exc).__name__} at iteration {len(trace)}: {exc}"
        logger.info("%s/%s stopped: %s", prob.name, cfg.method.value, reason)
    elapsed = time.perf_counter() - start

    try:
        objective = float(prob.objective(v.x))
    except (ArithmeticError, ValueError):
        objective = float("nan")
    merit = residual(prob, v).merit if status is not Status.UNATTAINED else _safe_merit(prob, v)
    return SolveReport(
        problem=prob.name, method=cfg.method, status=status, iterations=len(trace), objective=objective,
        merit_final=merit, wall_time=elapsed, x=v.x.copy(), final=v, trace=trace, reason=reason,
    )


def _safe_merit(prob, v):
    try:
        return residual(prob, v).merit
    except NumericalFailure:
        return float("nan")


def solve_arc(prob: ProblemDef, cfg: SolverConfig = SolverConfig(), callback=None) -> SolveReport:
    """Arc-search loop; ``cfg.method`` selects the full or simplified second derivative."""
    if cfg.method is Method.LINE:
        raise ValueError("solve_arc needs method arc or arc-simplified")
    return _run(prob, cfg, callback)


def solve_line(prob: ProblemDef, cfg: SolverConfig = SolverConfig(method=Method.LINE), callback=None) -> SolveReport:
    """Line-search loop: the same step control with vddot = 0, i.e. v - vdot sin(a)."""
    if cfg.method is not Method.LINE:
        raise ValueError("solve_line needs method line")
    return _run(prob, cfg, callback)


def solve(prob: ProblemDef, cfg: SolverConfig = SolverConfig(), callback=None) -> SolveReport:
    if cfg.method is Method.LINE:
        return solve_line(prob, cfg, callback)
    return solve_arc(prob, cfg, callback)
