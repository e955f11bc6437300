"""One LU factorization of F'(v) per iteration, reused for the first- and second-order solves."""

from __future__ import annotations

import dataclasses
import enum
import warnings

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from .errors import NumericalFailure, SingularKkt
from .kkt import IterateV, KktJacobian, KktResidual, SecondOrderRhs

PIVOT_RTOL = 1e-12
LINEAR_RESIDUAL_TOL = 1e-8


class SecondOrderMode(enum.Enum):
    FULL_SECOND_ORDER = "full"
    SIMPLIFIED = "simplified"
    NONE = "none"


@dataclasses.dataclass(frozen=True)
class KktFactorization:
    lu: np.ndarray
    piv: np.ndarray
    matrix: np.ndarray
    cond_estimate: float
    dims: tuple

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        u = scipy.linalg.lu_solve((self.lu, self.piv), rhs, check_finite=False)
        resid = np.linalg.norm(self.matrix @ u - rhs) / max(1.0, np.linalg.norm(rhs))
        if not np.isfinite(resid) or resid >= LINEAR_RESIDUAL_TOL:
            raise NumericalFailure(f"linear solve residual {resid:.3e} exceeds {LINEAR_RESIDUAL_TOL:g}")
        return u

    def reconstruct(self) -> np.ndarray:
        """P L U, for spot checks against the original matrix."""
        N = self.lu.shape[0]
        L = np.tril(self.lu, -1) + np.eye(N)
        U = np.triu(self.lu)
        A = L @ U
        # undo the LAPACK row interchanges in reverse order
        for i in reversed(range(N)):
            j = self.piv[i]
            if j != i:
                A[[i, j]] = A[[j, i]]
        return A


@dataclasses.dataclass(frozen=True)
class ArcDerivatives:
    vdot: IterateV
    vddot: IterateV
    mode: SecondOrderMode


def factorize(J: KktJacobian) -> KktFactorization:
    """LU with partial pivoting; raises SingularKkt on a tiny relative pivot."""
    A = np.asarray(J.matrix if isinstance(J, KktJacobian) else J, dtype=float)
    dims = J.dims if isinstance(J, KktJacobian) else None
    if not np.all(np.isfinite(A)):
        raise NumericalFailure("KKT matrix has non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    anorm = np.linalg.norm(A, 1)
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    rcond = float(rcond) if info == 0 else 0.0
    scale = max(np.max(np.abs(A)), np.finfo(float).tiny)
    if pivots.size and pivots.min() < PIVOT_RTOL * scale:
        raise SingularKkt(f"KKT matrix is singular (min pivot {pivots.min():.3e}, rcond {rcond:.3e})",
                          cond_estimate=rcond)
    return KktFactorization(lu, piv, A, rcond, dims)


def first_order_rhs(res: KktResidual, sigma: float) -> np.ndarray:
    rhs = res.as_vector().copy()
    p = res.p
    rhs[-p:] -= sigma * res.mu
    return rhs


def solve_first_order(fact: KktFactorization, res: KktResidual, sigma: float) -> IterateV:
    """Solve F'(v) vdot = F(v) - sigma mu e_bar (e_bar: ones on the complementarity block)."""
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma}")
    return IterateV.from_vector(fact.solve(first_order_rhs(res, sigma)), fact.dims)


def solve_second_order(fact: KktFactorization, rhs: SecondOrderRhs) -> IterateV:
    return IterateV.from_vector(fact.solve(rhs.as_vector()), fact.dims)


def simplified_rhs(dims, zdot, sdot) -> SecondOrderRhs:
    n, m, p = dims
    return SecondOrderRhs(np.zeros(n), np.zeros(m), np.zeros(p), np.zeros(p), -2.0 * zdot * sdot)


def solve_simplified_second_order(fact: KktFactorization, zdot, sdot) -> IterateV:
    """Second derivative with every curvature term dropped except -2 zdot*sdot."""
    return solve_second_order(fact, simplified_rhs(fact.dims, zdot, sdot))
