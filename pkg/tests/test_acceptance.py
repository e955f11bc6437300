"""Acceptance criteria, one printed PASS/FAIL line each.

Run under pytest (the lines are repeated in an "acceptance criteria" summary
section) or as a script: ``python3 tests/test_acceptance.py``.
"""

import functools
import math
import statistics
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from arc_ipm import problems  # noqa: E402
from arc_ipm.bench import RunRecord, performance_profile  # noqa: E402
from arc_ipm.kkt import IterateV, jacobian, residual, third_order_term  # noqa: E402
from arc_ipm.solvers import Method, SolverConfig, initialize, solve  # noqa: E402
from arc_ipm.step import (StepParams, alpha_component, centering_sigma, component_product_identity,  # noqa: E402
                          ellipse_point, merit_slope)

from anglegrid import GRID_STEP, SIGN_CASES, grid_angle, random_case  # noqa: E402
from helpers import central_jvp, collect_steps, random_direction  # noqa: E402

# tolerances pinned from the acceptance text
OBJ_TOL_4DP = 1e-3
RUNTIME_BUDGET_S = 5.0
COMP_TOL = 1e-10
WZ_TOL = 1e-10
N_COMP_FIXTURES = 100
N_ANGLE_CASES = 1000
JVP_RTOL = 1e-4
SLOPE_RTOL = 1e-3

CRITERION1 = {
    "MARATOS": -1.0000, "HS8": -1.0000, "HS12": -30.0000, "HS22": 1.0000, "HS30": 0.9999,
    "HS40": -0.2500, "HS63": 961.7152, "HS65": 0.9535, "HS78": -2.9197, "BT11": 0.8249,
}
METHODS = (Method.ARC, Method.LINE, Method.ARC_SIMPLIFIED)


# lines collected for the pytest terminal summary (see conftest.py)
REPORT_LINES = []


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    REPORT_LINES.append(line)
    print(line)
    return ok


@functools.lru_cache(maxsize=None)
def all_runs():
    """Every built-in problem under every method, with the reference settings (tol 1e-8, at most 1000 iterations, eps 1e-4)."""
    out = {}
    for name in problems.available():
        prob = problems.get(name)
        for method in METHODS:
            out[name, method] = solve(prob, SolverConfig(method=method, tol=1e-8, max_iter=1000, fd_eps=1e-4))
    return out


def criterion_1():
    misses = []
    start = time.perf_counter()
    for name, target in CRITERION1.items():
        prob = problems.get(name)
        for method in METHODS:
            rep = solve(prob, SolverConfig(method=method))
            if not rep.converged or abs(rep.objective - target) > OBJ_TOL_4DP:
                misses.append(f"{name}/{method.value} {rep.status_label} obj={rep.objective:.4f}")
    elapsed = time.perf_counter() - start
    ok = not misses and elapsed < RUNTIME_BUDGET_S
    detail = f"{30 - len(misses)}/30 runs within {OBJ_TOL_4DP:g} of the table in {elapsed:.2f}s"
    if misses:
        detail += "; misses: " + ", ".join(misses)
    return report(1, ok, detail)


def criterion_2():
    runs = all_runs()
    qcqp = problems.names_with_tag(problems.Tag.QCQP)
    both = [p for p in qcqp if runs[p, Method.ARC].converged and runs[p, Method.LINE].converged]
    arc_total = sum(runs[p, Method.ARC].iterations for p in both)
    line_total = sum(runs[p, Method.LINE].iterations for p in both)
    out_of_band, skipped = [], []
    for (name, method), rep in runs.items():
        ref = problems.published_result(name, method.value)
        if not rep.converged:
            skipped.append(f"{name}/{method.value}")
            continue
        if abs(rep.iterations - ref[1]) > 3 + 2 * ref[1]:
            out_of_band.append(f"{name}/{method.value} {rep.iterations} vs {ref[1]}")
    ok = arc_total < line_total and not out_of_band
    detail = (f"QCQP arc {arc_total} < line {line_total} iterations over {len(both)} problems solved by both; "
              f"{len(runs) - len(skipped) - len(out_of_band)}/{len(runs) - len(skipped)} converged runs inside "
              f"+-(3 + 2 x published count)")
    if out_of_band:
        detail += "; outside: " + ", ".join(out_of_band)
    if skipped:
        detail += "; not converged: " + ", ".join(skipped)
    return report(2, ok, detail)


def _time_per_iteration(name, method, repeats=5):
    prob = problems.get(name)
    samples = []
    for _ in range(repeats):
        rep = solve(prob, SolverConfig(method=method))
        if rep.iterations:
            samples.append(rep.wall_time / rep.iterations)
    return statistics.median(samples)


def criterion_3():
    others = problems.names_with_tag(problems.Tag.OTHER)
    big = [n for n in others if problems.get(n).n >= 10]
    arc = sum(_time_per_iteration(n, Method.ARC) for n in others)
    simple = sum(_time_per_iteration(n, Method.ARC_SIMPLIFIED) for n in others)
    dix_arc = _time_per_iteration("DIXCHLNG", Method.ARC)
    dix_simple = _time_per_iteration("DIXCHLNG", Method.ARC_SIMPLIFIED)
    ok = bool(big) and simple < arc and dix_simple < dix_arc
    return report(3, ok, f"Others subset (n >= 10: {', '.join(big)}) simplified {1e3 * simple:.2f} ms/it vs "
                         f"arc {1e3 * arc:.2f} ms/it summed; DIXCHLNG {1e3 * dix_simple:.2f} vs "
                         f"{1e3 * dix_arc:.2f} ms/it")


def criterion_4():
    rng = np.random.default_rng(2024)
    pools = []
    for name in ("HS22", "HS65", "HS43", "HS77", "BT11", "HS78", "DIXCHLNG"):
        for method in (Method.ARC, Method.ARC_SIMPLIFIED):
            pools.extend(collect_steps(name, method))
    origin_exact = all(
        all(np.array_equal(a, b) for a, b in zip(ellipse_point(v, d, 0.0).blocks(), v.blocks()))
        for v, d, _, _ in pools)
    worst = 0.0
    for k in rng.choice(len(pools), size=N_COMP_FIXTURES, replace=len(pools) < N_COMP_FIXTURES):
        v, d, res, out = pools[int(k)]
        sigma = centering_sigma(res)
        alpha = float(rng.uniform(0.0, out.alpha_tilde))
        trial = ellipse_point(v, d, alpha)
        i = int(rng.integers(v.z.size))
        formula = component_product_identity(v.z[i], v.s[i], d.vdot.z[i], d.vdot.s[i], d.vddot.z[i], d.vddot.s[i],
                                              sigma, res.mu, alpha)
        worst = max(worst, abs(formula - trial.z[i] * trial.s[i]) / max(1.0, abs(trial.z[i] * trial.s[i])))
    wz = max((r.wz_gap for rep in all_runs().values() for r in rep.trace), default=0.0)
    ok = origin_exact and worst <= COMP_TOL and wz <= WZ_TOL
    return report(4, ok, f"v(0) == v bitwise on {len(pools)} steps: {origin_exact}; product identity max error "
                         f"{worst:.2e} on {N_COMP_FIXTURES} fixtures; max |w - z| on accepted steps {wz:.2e}")


def criterion_5():
    rng = np.random.default_rng(5)
    cases = sorted(SIGN_CASES)
    worst, failures = 0.0, 0
    for k in range(N_ANGLE_CASES):
        w, wd, wdd, delta = random_case(rng, SIGN_CASES[cases[k % len(cases)]])
        err = abs(alpha_component(w, wd, wdd, delta) - grid_angle(w, wd, wdd, delta))
        worst = max(worst, err)
        failures += err > GRID_STEP * (1 + 1e-9)
    return report(5, failures == 0, f"{N_ANGLE_CASES - failures}/{N_ANGLE_CASES} cases over seven sign cases "
                                    f"within one grid step ({GRID_STEP:g}); worst gap {worst:.2e}")


def criterion_6():
    rng = np.random.default_rng(6)
    jvp_worst = 0.0
    for name in problems.available():
        prob = problems.get(name)
        v = initialize(prob)
        J = jacobian(prob, v).matrix
        F = lambda vec, prob=prob, dims=v.dims: residual(prob, IterateV.from_vector(vec, dims)).as_vector()  # noqa
        for _ in range(3):
            u = random_direction(rng, v).as_vector()
            fd = central_jvp(F, v.as_vector(), u)
            jvp_worst = max(jvp_worst, np.linalg.norm(J @ u - fd) / np.linalg.norm(fd))

    slope_worst, literal_worst, literal_count = 0.0, 0.0, 0
    for name in problems.available():
        prob = problems.get(name)
        for v, d, res, _ in collect_steps(name, Method.ARC, limit=3):
            sigma = centering_sigma(res)
            h = 1e-7
            fd = (res.merit - residual(prob, ellipse_point(v, d, h)).merit) / h
            slope_worst = max(slope_worst, abs(fd - merit_slope(res, sigma)) / abs(fd))
            if prob.p == 1:
                literal = 2.0 * (res.merit - sigma * res.mu**2 / res.p)
                literal_worst = max(literal_worst, abs(fd - literal) / abs(fd))
                literal_count += 1

    third_zero = True
    for name in problems.names_with_tag(problems.Tag.QCQP):
        prob = problems.get(name)
        v = initialize(prob)
        v = IterateV(v.x + rng.normal(size=prob.n), rng.normal(size=prob.m), v.w * 2, v.s, v.z * 2)
        third_zero &= not np.any(third_order_term(prob, v, rng.normal(size=prob.n), 1e-4))

    ok = jvp_worst < JVP_RTOL and slope_worst < SLOPE_RTOL and literal_worst < SLOPE_RTOL and third_zero
    return report(6, ok, f"JVP worst rel {jvp_worst:.1e}; slope 2(phi - sigma p mu^2) worst rel {slope_worst:.1e}; "
                         f"printed form 2(phi - sigma mu^2/p) worst rel {literal_worst:.1e} on {literal_count} "
                         f"p = 1 fixtures (the forms differ for p > 1); third-order term exactly zero on "
                         f"quadratics: {third_zero}")


def criterion_7():
    beta = StepParams().beta
    runs = [rep for rep in all_runs().values() if rep.converged]
    monotone = all(all(r.merit_new < r.merit for r in rep.trace) for rep in runs)
    bound_ok = all(r.merit_new <= r.merit * (1 - 2 * beta * (1 - r.sigma) * math.sin(r.alpha)) * (1 + 1e-12)
                   for rep in runs for r in rep.trace)
    steps = sum(len(rep.trace) for rep in runs)
    return report(7, monotone and bound_ok, f"{len(runs)} converged runs, {steps} steps: strict decrease {monotone}, "
                                            f"decrease bound {bound_ok}")


def criterion_8():
    hand = [RunRecord("P1", "A", "Converged", 0.0, 1, 1.0, "QCQP"), RunRecord("P1", "B", "Converged", 0.0, 2, 2.0, "QCQP"),
            RunRecord("P2", "A", "Converged", 0.0, 4, 4.0, "QCQP"), RunRecord("P2", "B", "Converged", 0.0, 2, 2.0, "QCQP")]
    exact = all(c.points == ((1.0, 0.5), (2.0, 1.0)) for c in performance_profile(hand, "time"))
    records = [RunRecord(name, m.value, rep.status_label, rep.objective, rep.iterations, rep.wall_time,
                         problems.tag_of(name).value) for (name, m), rep in all_runs().items()]
    shaped = True
    for metric in ("iters", "time"):
        for pair in ((Method.ARC, Method.LINE), METHODS):
            subset = [r for r in records if r.method in {m.value for m in pair}]
            for c in performance_profile(subset, metric):
                fr = [f for _, f in c.points]
                shaped &= all(b >= a for a, b in zip(fr, fr[1:])) and all(0.0 <= f <= 1.0 for f in fr)
    return report(8, exact and shaped, f"2x2 fixture exact: {exact}; suite curves monotone and <= 1: {shaped}")


def test_criterion_1_objectives():
    assert criterion_1()


def test_criterion_2_iteration_counts():
    assert criterion_2()


def test_criterion_3_simplified_speed():
    assert criterion_3()


def test_criterion_4_arc_geometry():
    assert criterion_4()


def test_criterion_5_step_angles():
    assert criterion_5()


def test_criterion_6_calculus():
    assert criterion_6()


def test_criterion_7_globalization():
    assert criterion_7()


def test_criterion_8_profiles():
    assert criterion_8()


if __name__ == "__main__":
    results = [fn() for fn in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
                               criterion_7, criterion_8)]
    sys.exit(0 if all(results) else 1)
