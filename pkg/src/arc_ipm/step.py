"""Step-angle selection along the ellipse v(a) = v - vdot sin(a) + vddot (1 - cos(a)).

The accepted angle is the first of ``a_t, a_t r, a_t r^2, ...`` (``a_t`` the
analytic fraction-to-boundary angle) at which both the neighborhood test
``m_hat(a) >= 0`` and the sufficient-decrease test on the merit hold.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Optional

import numpy as np

from .errors import NumericalFailure, StepFailure
from .kkt import IterateV, KktResidual, residual
from .newton import ArcDerivatives

HALF_PI = 0.5 * math.pi
SIGMA_FLOOR = 1e-6
SIGMA_CEIL = 0.49


@dataclasses.dataclass(frozen=True)
class StepParams:
    delta: float = 1e-3
    beta: float = 0.1
    gamma: float = 0.5
    backtrack_ratio: float = 0.7
    max_backtracks: int = 60

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if not 0.0 < self.beta <= 0.5:
            raise ValueError("beta must lie in (0, 1/2]")
        if not 0.5 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [1/2, 1]")
        if not 0.0 < self.backtrack_ratio < 1.0:
            raise ValueError("backtrack_ratio must lie in (0, 1)")
        if self.max_backtracks < 0:
            raise ValueError("max_backtracks must be non-negative")


@dataclasses.dataclass(frozen=True)
class MeritReference:
    """Quantities frozen at the starting point: min(z0*s0) and phi(v0)."""

    min_comp0: float
    merit0: float

    @classmethod
    def at(cls, v0: IterateV, res0: KktResidual) -> "MeritReference":
        return cls(float(np.min(v0.z * v0.s)), res0.merit)


@dataclasses.dataclass(frozen=True)
class StepOutcome:
    alpha: float
    alpha_tilde: float
    alpha_hat: float
    alpha_check: float
    trial: IterateV
    trial_residual: KktResidual
    merit_new: float
    backtracks_used: int
    hat_active: bool


# ---------------------------------------------------------------------------
# geometry

def ellipse_point(v: IterateV, d: ArcDerivatives, alpha: float) -> IterateV:
    sa, ca = math.sin(alpha), _one_minus_cos(alpha)
    return IterateV(*(b - bd * sa + bdd * ca for b, bd, bdd in zip(v.blocks(), d.vdot.blocks(), d.vddot.blocks())))


def component_product_identity(z_i, s_i, zdot_i, sdot_i, zddot_i, sddot_i, sigma, mu, alpha):
    """Closed form of z_i(a) s_i(a), valid when the last rows of both Newton systems hold."""
    sa, ca = math.sin(alpha), _one_minus_cos(alpha)
    return (z_i * s_i * (1.0 - sa) + sigma * mu * sa
            - (zdot_i * sddot_i + zddot_i * sdot_i) * sa * ca
            + (zddot_i * sddot_i - zdot_i * sdot_i) * ca * ca)


def _one_minus_cos(alpha):
    # 2 sin^2(a/2) avoids cancellation for small angles
    half = math.sin(0.5 * alpha)
    return 2.0 * half * half


def alpha_component(w: float, wdot: float, wddot: float, delta: float) -> float:
    """Largest angle in (0, pi/2] keeping w - wdot sin(a) + wddot (1 - cos(a)) >= delta w on [0, a].

    Split into seven sign cases of (wdot, wddot).  The condition is
    rewritten as ``c >= wdot sin(a) + wddot cos(a)`` with
    ``c = (1 - delta) w + wddot``.  Arcsines of ``c / r`` are taken as
    ``atan2(c, sqrt(r^2 - c^2))`` with ``r^2 - c^2`` expanded to avoid
    cancellation when ``|wddot|`` dwarfs ``w``.
    """
    slack = (1.0 - delta) * w
    c = slack + wddot
    if wdot == 0.0 and wddot == 0.0:
        return HALF_PI
    # r^2 - c^2 where r = hypot(wdot, wddot)
    gap = max(wdot * wdot - slack * (slack + 2.0 * wddot), 0.0)
    if wdot == 0.0:
        if c >= 0.0:
            return HALF_PI
        return min(HALF_PI, math.atan2(math.sqrt(gap), -c))
    if wddot == 0.0:
        if wdot <= slack:
            return HALF_PI
        return min(HALF_PI, math.atan2(slack, math.sqrt((wdot - slack) * (wdot + slack))))
    r = math.hypot(wdot, wddot)
    if wdot > 0.0 and wddot > 0.0:
        if c >= r:
            return HALF_PI
        return min(HALF_PI, math.atan2(c, math.sqrt(gap)) - math.atan2(wddot, wdot))
    if wdot > 0.0:
        if c >= r:
            return HALF_PI
        return min(HALF_PI, math.atan2(c, math.sqrt(gap)) + math.atan2(-wddot, wdot))
    if wddot < 0.0:
        if c >= 0.0:
            return HALF_PI
        return min(HALF_PI, math.pi - math.atan2(-c, math.sqrt(gap)) - math.atan2(-wddot, -wdot))
    # wdot < 0 < wddot: the arc moves away from the boundary
    return HALF_PI


def alpha_tilde(v: IterateV, d: ArcDerivatives, delta: float) -> float:
    angle = HALF_PI
    for base, first, second in ((v.w, d.vdot.w, d.vddot.w), (v.s, d.vdot.s, d.vddot.s)):
        for b, b1, b2 in zip(base, first, second):
            angle = min(angle, alpha_component(float(b), float(b1), float(b2), delta))
    return angle


# ---------------------------------------------------------------------------
# acceptance tests

def m_hat(v0, merit0: float, trial: IterateV, merit_trial: float, gamma: float) -> float:
    """Neighborhood measure; ``v0`` is the starting iterate or its min(z0*s0)."""
    min_comp0 = float(np.min(v0.z * v0.s)) if isinstance(v0, IterateV) else float(v0)
    return float(np.min(trial.z * trial.s)) - gamma * min_comp0 * (merit_trial / merit0)


def merit_slope(res: KktResidual, sigma: float) -> float:
    """Decrease rate -d/da phi(v(a)) at a = 0, i.e. 2 F'(F - sigma mu e_bar) = 2(phi - sigma mu z's)."""
    return 2.0 * (res.merit - sigma * res.mu * res.mu * res.p)


def armijo_decrease(merit0: float, merit_trial: float, sigma: float, mu: float, p: int,
                    beta: float, alpha: float, directional: float) -> bool:
    """Sufficient decrease ``phi(v(a)) <= phi(v) - beta sin(a) * directional``.

    When it holds, the guaranteed bound ``phi(v(a)) <= phi(v)(1 - 2 beta (1 - sigma) sin a)``
    is checked too; a violation means ``directional`` was not the true slope.
    """
    sa = math.sin(alpha)
    accepted = merit_trial <= merit0 - beta * sa * directional
    if accepted:
        bound = merit0 * (1.0 - 2.0 * beta * (1.0 - sigma) * sa)
        if merit_trial > bound + 1e-12 * merit0:
            raise NumericalFailure(
                f"decrease bound violated: {merit_trial:.6e} > {bound:.6e} (sigma={sigma}, mu={mu}, p={p})")
    return bool(accepted)


def centering_sigma(res: KktResidual) -> float:
    """(1/8) min(1, phi p / mu^2), clamped into [1e-6, 0.49]."""
    if res.mu <= 0.0:
        return SIGMA_FLOOR
    raw = 0.125 * min(1.0, res.merit * res.p / res.mu**2)
    return min(max(raw, SIGMA_FLOOR), SIGMA_CEIL)


def _boundary_ok(trial: IterateV, v: IterateV, d: ArcDerivatives, delta: float) -> bool:
    for new, old, first, second in ((trial.w, v.w, d.vdot.w, d.vddot.w), (trial.s, v.s, d.vdot.s, d.vddot.s)):
        slack = 1e-10 * np.maximum.reduce([np.abs(old), np.abs(first), np.abs(second)])
        if np.any(new < delta * old - slack) or np.any(new <= 0.0):
            return False
    return True


def select_step(prob, v: IterateV, d: ArcDerivatives, res: KktResidual, ref: MeritReference,
                params: StepParams, sigma: float, directional: Optional[float] = None) -> StepOutcome:
    """Backtrack from the analytic boundary angle until m_hat >= 0 and sufficient decrease hold."""
    if directional is None:
        directional = merit_slope(res, sigma)
    a_tilde = alpha_tilde(v, d, params.delta)
    if not a_tilde > 0.0:
        raise StepFailure("fraction-to-boundary angle is zero")
    floor = params.delta * 1e-6 * res.merit

    flags = []  # (alpha, hat_ok, check_ok)
    alpha = a_tilde
    hat_active = False
    for j in range(params.max_backtracks + 1):
        trial = ellipse_point(v, d, alpha)
        if not _boundary_ok(trial, v, d, params.delta):
            raise NumericalFailure(f"fraction-to-boundary violated at alpha={alpha:.3e} <= alpha_tilde")
        try:
            trial_res = residual(prob, trial)
        except NumericalFailure:
            flags.append((alpha, False, False))
            alpha *= params.backtrack_ratio
            continue
        hat_ok = m_hat(ref.min_comp0, ref.merit0, trial, trial_res.merit, params.gamma) >= 0.0
        predicted = params.beta * math.sin(alpha) * directional
        check_ok = predicted > floor and armijo_decrease(
            res.merit, trial_res.merit, sigma, res.mu, res.p, params.beta, alpha, directional)
        flags.append((alpha, hat_ok, check_ok))
        if hat_ok and check_ok:
            return StepOutcome(
                alpha=alpha,
                alpha_tilde=a_tilde,
                alpha_hat=_run_top(flags, 1),
                alpha_check=_run_top(flags, 2),
                trial=trial,
                trial_residual=trial_res,
                merit_new=trial_res.merit,
                backtracks_used=j,
                hat_active=hat_active,
            )
        hat_active = hat_active or not hat_ok
        alpha *= params.backtrack_ratio
    raise StepFailure(f"no acceptable step angle after {params.max_backtracks} backtracks")


def _run_top(flags, k):
    """Largest tested angle reachable from the accepted one through trials that passed test ``k``."""
    top = flags[-1][0]
    for entry in reversed(flags[:-1]):
        if not entry[k]:
            break
        top = entry[0]
    return top
