"""Acceptance criteria 1-9. Each test records one PASS/FAIL line, printed
in the terminal summary."""
import time

import numpy as np
import pytest

from irl1 import InstanceRecipe, LogPenalty, generate_instance
from irl1 import bench
from irl1.cli import main
from irl1.problem import ProblemInstance, grad_f, stationarity_residual
from irl1.prox import prox_scalar_log, prox_weighted_l1_box
from irl1.solvers import SOLVERS, MonitorViolation, SolverOptions, solve
from conftest import grid_min_log, grid_min_weighted_l1, record

LAM = 5e-4
ORDER = bench.SOLVER_ORDER


def check(criterion, ok, detail):
    record(criterion, ok, detail)
    assert ok, detail


# 1 -----------------------------------------------------------------------

def test_c1_prox_oracle():
    grid_min_weighted_l1(1.0, 0.1, 1.0, 0.0, 1.0, 0.5)  # compile outside the timer
    grid_min_log(1.0, 1.0, 0.1, 0.1, 0.0, 1.0, 0.5)
    rng = np.random.default_rng(2024)
    h = 1e-5
    t0 = time.perf_counter()
    worst = -np.inf
    for _ in range(1000):
        t, s, step = rng.uniform(-3, 3), rng.uniform(0, 2), rng.uniform(0.1, 10)
        u = prox_weighted_l1_box(np.array([t]), s, step)[0]
        val = 0.5 * step * (u - t) ** 2 + s * abs(u)
        worst = max(worst, val - grid_min_weighted_l1(t, s, step, min(0.0, t), max(0.0, t), h))
    for _ in range(1000):
        v, step = rng.uniform(-3, 3), rng.uniform(0.1, 10)
        lam, eps = rng.uniform(1e-4, 2), rng.uniform(0.01, 1)
        u = prox_scalar_log(v, step, lam, eps)
        val = 0.5 * step * (u - v) ** 2 + lam * (np.log(abs(u) + eps) - np.log(eps))
        worst = max(worst, val - grid_min_log(v, step, lam, eps, min(0.0, v), max(0.0, v), h))
    elapsed = time.perf_counter() - t0
    check(1, worst <= 1e-8 and elapsed < 5.0,
          f"prox vs grid oracle: worst excess {worst:.2e} (<= 1e-8), {elapsed:.2f} s (< 5 s)")


# 2 -----------------------------------------------------------------------

def test_c2_schedule_validity(capsys):
    t0 = time.perf_counter()
    rc = main(["validate-schedules"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out.strip().replace("\n", "; ")
    check(2, rc == 0 and elapsed < 1.0, f"{out}; {elapsed:.3f} s (< 1 s)")


# 3, 4, 5 ----------------------------------------------------------------

@pytest.fixture(scope="module")
def desk_runs():
    runs, violations = [], []
    t0 = time.perf_counter()
    for eps in (0.1, 0.5):
        for seed in range(10):
            p = generate_instance(InstanceRecipe(60, 256, seed=seed), LogPenalty(LAM, eps))
            reps = {}
            for name in ORDER:
                try:
                    reps[name] = solve(p, name, SolverOptions(monitor=True))
                except MonitorViolation as exc:
                    violations.append(str(exc))
            runs.append((p, reps))
    return runs, violations, time.perf_counter() - t0


def test_c3_potential_monitors(desk_runs):
    runs, violations, elapsed = desk_runs
    check(3, not violations and elapsed < 60.0,
          f"{len(runs)} instances x {len(ORDER)} solvers, {len(violations)} monitor "
          f"violations, {elapsed:.1f} s (< 60 s)")


def test_c4_termination_soundness(desk_runs):
    runs, _, _ = desk_runs
    worst, count = 0.0, 0
    for p, reps in runs:
        for rep in reps.values():
            if rep.converged:
                count += 1
                bound = 1e-4 * max(1.0, np.linalg.norm(rep.x_final)) * (1 + 1e-6)
                worst = max(worst, stationarity_residual(p, rep.x_final) / bound)
    check(4, count > 0 and worst <= 1.0,
          f"{count} converged runs, max residual / bound = {worst:.3f} (<= 1)")


def test_c5_cross_solver_agreement(desk_runs):
    runs, _, _ = desk_runs
    worst = 0.0
    for _, reps in runs:
        f = [r.fval for r in reps.values() if r.converged]
        worst = max(worst, (max(f) - min(f)) / min(f))
    check(5, worst <= 5e-3, f"max relative fval spread {worst:.2e} (<= 5e-3)")


# 6, 7 --------------------------------------------------------------------

def _table_row(eps):
    plan = bench.BenchmarkPlan(sizes=((720, 2560),), seeds=20, lam=LAM, epsilons=(eps,))
    t0 = time.perf_counter()
    rows = bench.run_plan(plan)
    elapsed = time.perf_counter() - t0
    agg = {a.solver: a for a in bench.aggregate(rows)}
    return agg, elapsed


def _fmt(agg):
    return ", ".join(f"{s} {agg[s].solve_seconds:.3f}s/{agg[s].fval:.4e}" for s in ORDER)


@pytest.mark.slow
def test_c6_table1_trend():
    agg, elapsed = _table_row(0.5)
    f_ok = all(3.0e-2 <= agg[s].fval <= 4.6e-2 for s in ORDER)
    t = {s: agg[s].solve_seconds for s in ORDER}
    t_ok = max(t["irl1e1"], t["irl1e3"]) < min(t["gist"], t["irl1ls"])
    conv = sum(agg[s].converged for s in ORDER)
    check(6, f_ok and t_ok and elapsed < 600,
          f"eps=0.5: {_fmt(agg)}; converged {conv}/100; {elapsed:.0f} s")


@pytest.mark.slow
def test_c7_table2_trend():
    agg, elapsed = _table_row(0.1)
    f_ok = all(abs(agg[s].fval - 9.33e-2) <= 0.2 * 9.33e-2 for s in ORDER)
    t = {s: agg[s].solve_seconds for s in ORDER}
    t_ok = max(t["irl1e1"], t["irl1e3"]) <= 1.2 * t["gist"]
    conv = sum(agg[s].converged for s in ORDER)
    check(7, f_ok and t_ok, f"eps=0.1: {_fmt(agg)}; converged {conv}/100; {elapsed:.0f} s")


# 8 -----------------------------------------------------------------------

SWEEP = ((60, 256), (180, 640), (360, 1280), (720, 2560))


def test_c8_gradient_and_lipschitz():
    rng = np.random.default_rng(8)
    worst_fd, worst_dl = 0.0, -np.inf
    for m, n in SWEEP:
        p = generate_instance(InstanceRecipe(m, n, seed=1), LogPenalty(LAM, 0.5))
        A, b, L = p.A, p.b, p.L

        def f(x):
            r = A @ x - b
            return 0.5 * float(r @ r)

        for _ in range(1000):
            x, y = rng.standard_normal(n), rng.standard_normal(n)
            d = y - x
            g = grad_f(p, x)
            h = 1e-3
            fd = (f(x + h * d) - f(x - h * d)) / (2 * h)
            an = float(g @ d)
            worst_fd = max(worst_fd, abs(fd - an) / abs(an))
            fx, fy = f(x), f(y)
            gap = fy - (fx + an + 0.5 * L * float(d @ d))
            worst_dl = max(worst_dl, gap / max(1.0, abs(fy)))
    check(8, worst_fd <= 1e-6 and worst_dl <= 1e-12,
          f"sizes {SWEEP}: max FD rel error {worst_fd:.2e} (<= 1e-6), "
          f"max descent-lemma gap {worst_dl:.2e} (<= 1e-12)")


# 9 -----------------------------------------------------------------------

def test_c9_zero_rhs():
    bad = []
    for m, n in ((1, 1), (9, 30), (60, 256)):
        A = np.random.default_rng(m).standard_normal((m, n))
        for eps in (0.1, 0.5):
            p = ProblemInstance(A, np.zeros(m), LogPenalty(LAM, eps))
            for name in SOLVERS:
                rep = solve(p, name, SolverOptions(monitor=True))
                if not (rep.iterations <= 1 and np.all(rep.x_final == 0) and rep.residual == 0.0
                        and rep.converged):
                    bad.append((m, n, eps, name))
    check(9, not bad, f"b = 0 on 3 sizes x 2 eps x 5 solvers, failures: {bad or 'none'}")
