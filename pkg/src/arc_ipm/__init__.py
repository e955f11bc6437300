"""Infeasible arc-search interior-point method for nonlinear programming.

Quick start::

    from arc_ipm import problems, solve, SolverConfig, Method
    report = solve(problems.get("HS22"), SolverConfig(method=Method.ARC))
"""

from . import problems
from .bench import ProfileCurve, RunRecord, emit_csv, performance_profile, run_suite
from .errors import (ArcIpmError, EmptyInput, InvalidArguments, IoError, NumericalFailure, SingularKkt,
                     StepFailure, UnknownProblem)
from .kkt import IterateV, KktJacobian, KktResidual, jacobian, residual
from .model import ProblemDef, symbolic_problem, validate_problem
from .solvers import InitStrategy, Method, SolveReport, SolverConfig, Status, solve, solve_arc, solve_line
from .step import StepParams

__version__ = "0.1.0"

__all__ = [
    "ArcIpmError", "EmptyInput", "InitStrategy", "InvalidArguments", "IoError", "IterateV", "KktJacobian",
    "KktResidual", "Method", "NumericalFailure", "ProblemDef", "ProfileCurve", "RunRecord", "SingularKkt",
    "SolveReport", "SolverConfig", "Status", "StepFailure", "StepParams", "UnknownProblem", "emit_csv",
    "jacobian", "performance_profile", "problems", "residual", "run_suite", "solve", "solve_arc",
    "solve_line", "symbolic_problem", "validate_problem",
]
