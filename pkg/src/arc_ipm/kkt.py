"""Primal-dual iterate, KKT residual F(v), its Jacobian and the merit function.

The iterate is ``v = (x, y, w, s, z)``: primal ``x``, equality multipliers
``y``, inequality multipliers ``w``, slacks ``s`` and complementarity
multipliers ``z``.  The residual blocks are

    grad_x L = grad f + Jh y - Jg w
    h(x)
    g(x) - s
    w - z
    z * s
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import NumericalFailure
from .model import DEFAULT_FD_EPS, ProblemDef, fd_hessian_directional

BLOCK_NAMES = ("x", "y", "w", "s", "z")


@dataclasses.dataclass(frozen=True)
class IterateV:
    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    s: np.ndarray
    z: np.ndarray

    @property
    def dims(self):
        return self.x.size, self.y.size, self.w.size

    def blocks(self):
        return (self.x, self.y, self.w, self.s, self.z)

    def as_vector(self) -> np.ndarray:
        return np.concatenate(self.blocks())

    @classmethod
    def from_vector(cls, vec, dims) -> "IterateV":
        n, m, p = dims
        vec = np.asarray(vec, dtype=float)
        cuts = np.cumsum([n, m, p, p])
        return cls(*np.split(vec, cuts))

    @classmethod
    def zeros(cls, dims) -> "IterateV":
        n, m, p = dims
        return cls.from_vector(np.zeros(n + m + 3 * p), dims)

    def __add__(self, other):
        return IterateV(*(a + b for a, b in zip(self.blocks(), other.blocks())))

    def __sub__(self, other):
        return IterateV(*(a - b for a, b in zip(self.blocks(), other.blocks())))

    def __mul__(self, scalar):
        return IterateV(*(a * scalar for a in self.blocks()))

    __rmul__ = __mul__


@dataclasses.dataclass(frozen=True)
class KktResidual:
    grad_lag_x: np.ndarray
    eq_res: np.ndarray
    ineq_res: np.ndarray
    dual_res: np.ndarray
    comp_res: np.ndarray
    merit: float
    mu: float

    def blocks(self):
        return (self.grad_lag_x, self.eq_res, self.ineq_res, self.dual_res, self.comp_res)

    def as_vector(self) -> np.ndarray:
        return np.concatenate(self.blocks())

    @property
    def p(self) -> int:
        return self.comp_res.size


@dataclasses.dataclass(frozen=True)
class KktJacobian:
    matrix: np.ndarray
    dims: tuple

    def block_slices(self):
        """Row/column slices for the five blocks, in (x, y, w, s, z) order."""
        n, m, p = self.dims
        bounds = np.cumsum([0, n, m, p, p, p])
        return {name: slice(int(a), int(b)) for name, a, b in zip(BLOCK_NAMES, bounds[:-1], bounds[1:])}

    def block(self, row: str, col: str) -> np.ndarray:
        sl = self.block_slices()
        return self.matrix[sl[row], sl[col]]


@dataclasses.dataclass(frozen=True)
class SecondOrderRhs:
    """Right-hand side of the second-derivative system, block by block."""

    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    s: np.ndarray
    z: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate((self.x, self.y, self.w, self.s, self.z))


def _finite(name, *arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NumericalFailure(f"non-finite values in {name}")


def lagrangian_grad_x(prob: ProblemDef, v: IterateV) -> np.ndarray:
    grad = prob.obj_gradient(v.x) + prob.eq_jacobian(v.x) @ v.y - prob.ineq_jacobian(v.x) @ v.w
    _finite("grad_x L", grad)
    return grad


def lagrangian_hessian(prob: ProblemDef, x, y, w) -> np.ndarray:
    H = np.array(prob.obj_hessian(x), dtype=float)
    for j in range(prob.m):
        if y[j] != 0.0:
            H += y[j] * prob.eq_hessians(x, j)
    for i in range(prob.p):
        if w[i] != 0.0:
            H -= w[i] * prob.ineq_hessians(x, i)
    return H


def merit_of(blocks) -> float:
    return float(sum(np.dot(b, b) for b in blocks))


def residual(prob: ProblemDef, v: IterateV) -> KktResidual:
    """Evaluate F(v), the merit ||F(v)||^2 and the duality measure z's/p."""
    grad = lagrangian_grad_x(prob, v)
    h = np.asarray(prob.eq_constraints(v.x), dtype=float)
    g = np.asarray(prob.ineq_constraints(v.x), dtype=float)
    blocks = (grad, h, g - v.s, v.w - v.z, v.z * v.s)
    _finite("F(v)", *blocks)
    return KktResidual(*blocks, merit=merit_of(blocks), mu=float(v.z @ v.s) / prob.p)


def jacobian(prob: ProblemDef, v: IterateV) -> KktJacobian:
    """Dense F'(v) of size (n+m+3p) square."""
    n, m, p = prob.n, prob.m, prob.p
    x = v.x
    H = lagrangian_hessian(prob, x, v.y, v.w)
    Jh = np.asarray(prob.eq_jacobian(x), dtype=float).reshape(n, m)
    Jg = np.asarray(prob.ineq_jacobian(x), dtype=float).reshape(n, p)
    N = n + m + 3 * p
    K = np.zeros((N, N))
    ix, iy, iw, is_, iz = (slice(0, n), slice(n, n + m), slice(n + m, n + m + p),
                           slice(n + m + p, n + m + 2 * p), slice(n + m + 2 * p, N))
    eye = np.eye(p)
    K[ix, ix] = 0.5 * (H + H.T)
    K[ix, iy] = Jh
    K[ix, iw] = -Jg
    K[iy, ix] = Jh.T
    K[iw, ix] = Jg.T
    K[iw, is_] = -eye
    K[is_, iw] = eye
    K[is_, iz] = -eye
    K[iz, is_] = np.diag(v.z)
    K[iz, iz] = np.diag(v.s)
    _finite("F'(v)", K)
    return KktJacobian(K, (n, m, p))


def third_order_term(prob: ProblemDef, v: IterateV, xdot, eps_hat: float = DEFAULT_FD_EPS) -> np.ndarray:
    """(grad^3_x L) xdot xdot from forward differences of the Lagrangian Hessian.

    Uses n + 1 Hessian evaluations; the third-derivative tensor itself is
    never stored.
    """
    hess = lambda t: lagrangian_hessian(prob, t, v.y, v.w)  # noqa: E731
    partial = fd_hessian_directional(prob, hess, v.x, eps_hat)
    out = np.zeros(prob.n)
    for i in np.flatnonzero(xdot):
        out += xdot[i] * (partial(int(i)) @ xdot)
    return out


def contract_third_order(prob: ProblemDef, v: IterateV, xdot, ydot, zdot, sdot,
                         eps_hat: float = DEFAULT_FD_EPS) -> SecondOrderRhs:
    """Right-hand side of the second-order system.

    Blocks: -(L''')xx - 2 sum ydot_j H_j xdot + 2 sum zdot_i G_i xdot;
    -(xdot' H_j xdot)_j; -(xdot' G_i xdot)_i; 0; -2 zdot*sdot.
    """
    x = v.x
    Hh = [np.asarray(prob.eq_hessians(x, j), dtype=float) for j in range(prob.m)]
    Hg = [np.asarray(prob.ineq_hessians(x, i), dtype=float) for i in range(prob.p)]
    Hh_xd = [H @ xdot for H in Hh]
    Hg_xd = [H @ xdot for H in Hg]

    top = -third_order_term(prob, v, xdot, eps_hat)
    for j in range(prob.m):
        top -= 2.0 * ydot[j] * Hh_xd[j]
    for i in range(prob.p):
        top += 2.0 * zdot[i] * Hg_xd[i]
    eq = -np.array([xdot @ hx for hx in Hh_xd])
    ineq = -np.array([xdot @ gx for gx in Hg_xd])
    rhs = SecondOrderRhs(top, eq.reshape(prob.m), ineq.reshape(prob.p), np.zeros(prob.p), -2.0 * zdot * sdot)
    _finite("second-order right-hand side", rhs.as_vector())
    return rhs
