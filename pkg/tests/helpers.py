"""Small problems and fixture builders shared by the test modules."""

import dataclasses

import numpy as np

from arc_ipm import problems
from arc_ipm.model import symbolic_problem
from arc_ipm.solvers import Method, SolverConfig, solve


def toy_problem():
    """f = |x|^2 / 2, h = x1 - 1, g = x2."""
    return symbolic_problem("TOY", 2, lambda x: ((x[0] ** 2 + x[1] ** 2) / 2, [x[0] - 1], [x[1]]), (1.0, 1.0))


def affine_qp():
    """Quadratic objective with affine constraints: every curvature block of the second-order system vanishes."""
    def build(x):
        x1, x2, x3 = x
        f = (x1 - 1) ** 2 + 2 * (x2 + 0.5) ** 2 + x3 ** 2 + x1 * x3
        return f, [x1 + x2 + x3 - 1], [x1, x2 + 1, 3 - x3]
    return symbolic_problem("AFFINE_QP", 3, build, (0.5, 0.5, 0.5))


def collect_steps(name, method=Method.ARC, limit=None):
    """Run a solve and return the per-iteration (v, d, res, outcome) tuples."""
    seen = []

    def cb(k, v, d, res, out):
        seen.append((v, d, res, out))

    solve(problems.get(name), SolverConfig(method=method), callback=cb)
    return seen[:limit] if limit else seen


def with_method(cfg, method):
    return dataclasses.replace(cfg, method=method)


def random_direction(rng, v):
    return type(v)(*(rng.standard_normal(b.shape) for b in v.blocks()))


def central_jvp(fun, vec, u, tau=1e-6):
    return (np.asarray(fun(vec + tau * u)) - np.asarray(fun(vec - tau * u))) / (2 * tau)
