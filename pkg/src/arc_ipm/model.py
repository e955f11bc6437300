"""NLP problem definition, derivative checks and the finite-difference third derivative.

A problem has the form ``min f(x)  s.t.  h(x) = 0,  g(x) >= 0`` with
``x`` in R^n, ``h`` in R^m and ``g`` in R^p (p >= 1).  Jacobians use the
column layout ``[grad h_1, ..., grad h_m]`` (shape n x m).
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional, Sequence

import numpy as np
import sympy

from .errors import InvalidArguments, NumericalFailure

DEFAULT_FD_EPS = 1e-4

Vector = np.ndarray
Matrix = np.ndarray


@dataclasses.dataclass(frozen=True)
class ProblemDef:
    name: str
    n: int
    m: int
    p: int
    objective: Callable[[Vector], float]
    eq_constraints: Callable[[Vector], Vector]
    ineq_constraints: Callable[[Vector], Vector]
    obj_gradient: Callable[[Vector], Vector]
    obj_hessian: Callable[[Vector], Matrix]
    eq_jacobian: Callable[[Vector], Matrix]
    ineq_jacobian: Callable[[Vector], Matrix]
    eq_hessians: Callable[[Vector, int], Matrix]
    ineq_hessians: Callable[[Vector, int], Matrix]
    x0: Vector
    known_objective: Optional[float] = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArguments(f"{self.name}: n must be positive")
        # m <= n rather than m < n: HS8 has two equalities in two unknowns
        if not 0 <= self.m <= self.n:
            raise InvalidArguments(f"{self.name}: need 0 <= m <= n, got m={self.m}, n={self.n}")
        if self.p < 1:
            raise InvalidArguments(f"{self.name}: at least one inequality is required (p >= 1)")
        x0 = np.array(self.x0, dtype=float)
        if x0.shape != (self.n,):
            raise InvalidArguments(f"{self.name}: x0 has shape {x0.shape}, expected ({self.n},)")
        x0.flags.writeable = False
        object.__setattr__(self, "x0", x0)


def fd_hessian_directional(prob: ProblemDef, L_hessian: Callable[[Vector], Matrix], x: Vector,
                           eps_hat: float = DEFAULT_FD_EPS):
    """Forward differences of a Hessian along each coordinate.

    Returns a function ``i -> (H(x + eps_hat e_i) - H(x)) / eps_hat`` which
    approximates the partial derivative of the Hessian with respect to x_i.
    The base Hessian is evaluated once; each coordinate costs one more
    evaluation.
    """
    if not eps_hat > 0:
        raise InvalidArguments("eps_hat must be positive")
    x = np.asarray(x, dtype=float)
    base = np.asarray(L_hessian(x), dtype=float)
    if not np.all(np.isfinite(base)):
        raise NumericalFailure(f"{prob.name}: non-finite Hessian at base point", coordinate=None)

    def partial(i: int) -> Matrix:
        xp = x.copy()
        xp[i] += eps_hat
        shifted = np.asarray(L_hessian(xp), dtype=float)
        if not np.all(np.isfinite(shifted)):
            raise NumericalFailure(f"{prob.name}: non-finite Hessian at x + eps*e_{i}", coordinate=i)
        return (shifted - base) / eps_hat

    return partial


# ---------------------------------------------------------------------------
# validation against central differences

@dataclasses.dataclass
class LevelCheck:
    level: str
    max_rel_error: float
    passed: bool


@dataclasses.dataclass
class ValidationReport:
    problem: str
    tol: float
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def error(self, level: str) -> float:
        for c in self.checks:
            if c.level == level:
                return c.max_rel_error
        raise KeyError(level)


def _central_jacobian(fun, x, h):
    """Central-difference Jacobian of a vector (or scalar) function; column k is d fun / d x_k."""
    cols = []
    for k in range(x.size):
        step = h * max(1.0, abs(x[k]))
        xp, xm = x.copy(), x.copy()
        xp[k] += step
        xm[k] -= step
        cols.append((np.asarray(fun(xp), dtype=float) - np.asarray(fun(xm), dtype=float)) / (2 * step))
    return np.stack(cols, axis=-1)


def validate_problem(prob: ProblemDef, tol: float = 1e-5, atol: float = 1e-8,
                     step: float = 1e-6, seed: int = 0) -> ValidationReport:
    """Cross-check analytic derivatives against central differences.

    Points checked: ``x0`` and two deterministic perturbations of it.  A level
    passes when ``||analytic - fd|| <= tol * ||fd|| + atol`` at every point.
    Never raises on a mismatch; failures are carried in the report.
    """
    if not tol > 0:
        raise InvalidArguments("tol must be positive")
    rng = np.random.default_rng(seed)
    x0 = np.array(prob.x0, dtype=float)
    points = [x0] + [x0 + 0.1 * rng.uniform(-1.0, 1.0, prob.n) for _ in range(2)]

    def pairs(x):
        yield "gradient", prob.obj_gradient(x), _central_jacobian(prob.objective, x, step)
        yield "hessian", prob.obj_hessian(x), _central_jacobian(prob.obj_gradient, x, step)
        if prob.m:
            # central Jacobian of h has rows h_j; the layout is its transpose
            yield "eq_jacobian", prob.eq_jacobian(x), _central_jacobian(prob.eq_constraints, x, step).T
            for j in range(prob.m):
                yield "eq_hessian", prob.eq_hessians(x, j), _central_jacobian(
                    lambda t, j=j: prob.eq_jacobian(t)[:, j], x, step)
        yield "ineq_jacobian", prob.ineq_jacobian(x), _central_jacobian(prob.ineq_constraints, x, step).T
        for i in range(prob.p):
            yield "ineq_hessian", prob.ineq_hessians(x, i), _central_jacobian(
                lambda t, i=i: prob.ineq_jacobian(t)[:, i], x, step)

    worst: dict = {}
    ok: dict = {}
    for x in points:
        for level, analytic, fd in pairs(x):
            analytic = np.asarray(analytic, dtype=float)
            diff = np.linalg.norm(analytic - fd)
            scale = np.linalg.norm(fd)
            rel = diff / scale if scale > 0 else diff
            if not np.isfinite(rel):
                rel = np.inf
            worst[level] = max(worst.get(level, 0.0), rel)
            ok[level] = ok.get(level, True) and bool(diff <= tol * scale + atol)
    checks = [LevelCheck(level, worst[level], ok[level]) for level in worst]
    return ValidationReport(prob.name, tol, checks)


# ---------------------------------------------------------------------------
# building problems from sympy expressions

def _lambdify_array(symbols, exprs, shape):
    fn = sympy.lambdify([symbols], sympy.Array(exprs).reshape(*shape) if shape else exprs, "numpy")

    def call(x):
        return np.array(fn(np.asarray(x, dtype=float)), dtype=float).reshape(shape)

    return call


def symbolic_problem(name: str, n: int, build, x0: Sequence[float],
                     known_objective: Optional[float] = None) -> ProblemDef:
    """Create a ProblemDef from expressions written over sympy symbols.

    ``build(x)`` receives a tuple of ``n`` symbols and returns ``(f, h, g)``
    where ``h`` and ``g`` are lists of expressions.  Gradients and Hessians
    are differentiated symbolically once, then compiled to numpy callables.
    """
    xs = sympy.symbols(f"x1:{n + 1}", real=True)
    f, h, g = build(xs)
    h, g = list(h), list(g)
    m, p = len(h), len(g)

    grad_f = [sympy.diff(f, v) for v in xs]
    hess_f = [[sympy.diff(gf, v) for v in xs] for gf in grad_f]
    # column layout: entry (k, j) = d h_j / d x_k
    jac_h = [[sympy.diff(hj, v) for hj in h] for v in xs]
    jac_g = [[sympy.diff(gi, v) for gi in g] for v in xs]
    hess_h = [[[sympy.diff(hj, a, b) for b in xs] for a in xs] for hj in h]
    hess_g = [[[sympy.diff(gi, a, b) for b in xs] for a in xs] for gi in g]

    f_fn = sympy.lambdify([xs], f, "numpy")
    h_fn = _lambdify_array(xs, h, (m,)) if m else (lambda x: np.zeros(0))
    g_fn = _lambdify_array(xs, g, (p,))
    grad_fn = _lambdify_array(xs, grad_f, (n,))
    hess_fn = _lambdify_array(xs, hess_f, (n, n))
    jac_h_fn = _lambdify_array(xs, jac_h, (n, m)) if m else (lambda x: np.zeros((n, 0)))
    jac_g_fn = _lambdify_array(xs, jac_g, (n, p))
    hess_h_fns = [_lambdify_array(xs, H, (n, n)) for H in hess_h]
    hess_g_fns = [_lambdify_array(xs, H, (n, n)) for H in hess_g]

    return ProblemDef(
        name=name, n=n, m=m, p=p,
        objective=lambda x: float(f_fn(np.asarray(x, dtype=float))),
        eq_constraints=h_fn,
        ineq_constraints=g_fn,
        obj_gradient=grad_fn,
        obj_hessian=hess_fn,
        eq_jacobian=jac_h_fn,
        ineq_jacobian=jac_g_fn,
        eq_hessians=lambda x, j: hess_h_fns[j](x),
        ineq_hessians=lambda x, i: hess_g_fns[i](x),
        x0=np.asarray(x0, dtype=float),
        known_objective=known_objective,
    )
