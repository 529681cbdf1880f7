import numpy as np
import pytest
from scipy.optimize import brentq

from irl1 import InstanceRecipe, LogPenalty, generate_instance
from irl1.penalty import L1Penalty, MCPPenalty, SCADPenalty
from irl1.problem import ProblemInstance, objective, stationarity_residual
from irl1.prox import Box
from irl1.solvers import (
    SOLVERS, MonitorViolation, NumericalError, SolverOptions, h1_value, h3_value, solve,
)
from conftest import scalar_instance

ALL = sorted(SOLVERS)
MON = SolverOptions(monitor=True)


def _scalar_root():
    # stationary point of 0.5(x-1)^2 + 5e-4 log(1 + x/0.5) on x > 0
    return brentq(lambda x: (x - 1.0) + 5e-4 / (x + 0.5), 0.5, 1.5, xtol=1e-15)


def test_scalar_oracle_value():
    assert _scalar_root() == pytest.approx(0.9996665925596525, abs=1e-13)


@pytest.mark.parametrize("name", ALL)
def test_scalar_instance(name):
    rep = solve(scalar_instance(), name, SolverOptions(tol=1e-10, monitor=True))
    assert rep.converged
    assert rep.x_final[0] == pytest.approx(_scalar_root(), abs=1e-7)


@pytest.mark.parametrize("name", ALL)
def test_zero_rhs(name):
    p = ProblemInstance(np.random.default_rng(0).standard_normal((8, 20)), np.zeros(8),
                        LogPenalty(5e-4, 0.5))
    rep = solve(p, name, MON)
    assert rep.iterations <= 1 and rep.converged
    assert np.all(rep.x_final == 0) and rep.residual == 0.0


def test_unknown_solver():
    with pytest.raises(ValueError):
        solve(scalar_instance(), "nope")


@pytest.mark.parametrize("name", ALL)
def test_monitors_and_soundness(name, small_instances):
    for p in small_instances:
        rep = solve(p, name, MON)
        assert rep.converged
        scale = max(1.0, np.linalg.norm(rep.x_final))
        assert rep.residual <= 1e-4 * scale * (1 + 1e-6)
        assert rep.residual == stationarity_residual(p, rep.x_final)
        assert rep.fval == pytest.approx(objective(p, rep.x_final), rel=1e-12)
        if name.startswith("irl1e"):
            # BB curvature can be small at exit, so the line-search
            # baselines give no step bound of this form
            assert max(rep.recent_steps) < 10 * 1e-4 * scale
        assert len(rep.trace) == rep.iterations


def test_e1_trace_potential_nonincreasing(small_instances):
    rep = solve(small_instances[0], "irl1e1", MON)
    pots = [r.potential for r in rep.trace]
    assert np.all(np.diff(pots) <= 1e-9)
    assert max(r.param for r in rep.trace) < 1


def test_e3_trace_potential_nonincreasing(small_instances):
    rep = solve(small_instances[1], "irl1e3", MON)
    pots = [r.potential for r in rep.trace]
    assert np.all(np.diff(pots[1:]) <= 1e-9)


def test_theta_one_matches_unextrapolated(small_instances):
    p = small_instances[2]
    ref = solve(p, "irl1e1", SolverOptions(schedule=lambda k: 0.0, max_iter=40))
    one = dict(schedule=lambda k: 1.0, max_iter=40, validate_schedule=False)
    for name in ("irl1e2", "irl1e3"):
        rep = solve(p, name, SolverOptions(**one))
        np.testing.assert_allclose(rep.x_final, ref.x_final, rtol=0, atol=1e-12)


def test_invalid_schedule_rejected():
    with pytest.raises(ValueError):
        solve(scalar_instance(), "irl1e3", SolverOptions(schedule=lambda k: 1.0))


def test_bad_e1_schedule_trips_monitor(small_instances):
    with pytest.raises(MonitorViolation):
        solve(small_instances[0], "irl1e1", SolverOptions(monitor=True, schedule=lambda k: 1.5,
                                                          max_iter=200))


def test_max_iter_reports_not_converged(small_instances):
    for name in ALL:
        rep = solve(small_instances[0], name, SolverOptions(max_iter=3))
        assert rep.iterations == 3 and not rep.converged


def test_l_max_overflow_raises(small_instances):
    p = small_instances[0]
    with pytest.raises(NumericalError):
        solve(p, "gist", SolverOptions(L_max=1e-3, L_min=1e-8))


def test_gist_restrictions():
    p = ProblemInstance(np.eye(2), np.ones(2), L1Penalty(0.1))
    with pytest.raises(ValueError):
        solve(p, "gist")
    q = scalar_instance(box=Box.uniform(1, -1, 1))
    with pytest.raises(ValueError):
        solve(q, "gist")


def test_gist_monotone_variant_strictly_decreases():
    p = generate_instance(InstanceRecipe(40, 60, seed=3), LogPenalty(1e-12, 0.5))
    rep = solve(p, "gist", SolverOptions(M=0, monitor=True, max_iter=200))
    f = [objective(p, np.zeros(p.n))] + [r.fval for r in rep.trace]
    moving = [r.step_norm > 0 for r in rep.trace]
    for i, mv in enumerate(moving):
        if mv:
            assert f[i + 1] < f[i]


def test_irl1ls_acceptance_replay(small_instances):
    p = small_instances[1]
    opts = SolverOptions(monitor=True)
    rep = solve(p, "irl1ls", opts)
    hist = [objective(p, np.zeros(p.n))]
    for r in rep.trace:
        ref = max(hist[-(opts.M + 1):])
        assert r.fval <= ref - 0.5 * opts.c * r.step_norm ** 2 + 1e-12
        hist.append(r.fval)


@pytest.mark.parametrize("name", ["irl1e1", "irl1e2", "irl1e3", "irl1ls"])
def test_box_constrained(name, small_instances):
    p0 = small_instances[0]
    box = Box.uniform(p0.n, -0.3, 0.3)
    p = ProblemInstance(p0.A, p0.b, p0.penalty, box)
    rep = solve(p, name, MON)
    assert box.contains(rep.x_final)
    assert np.any(np.abs(rep.x_final) == 0.3)
    assert rep.residual <= 1e-4 * max(1.0, np.linalg.norm(rep.x_final)) * (1 + 1e-6)


@pytest.mark.parametrize("pen", [SCADPenalty(0.05, 3.7), MCPPenalty(0.05, 3.0), L1Penalty(0.05)],
                         ids=lambda p: p.name)
@pytest.mark.parametrize("name", ["irl1e1", "irl1e2", "irl1e3", "irl1ls"])
def test_other_penalties(pen, name, small_instances):
    p0 = small_instances[0]
    p = ProblemInstance(p0.A, p0.b, pen)
    rep = solve(p, name, MON)
    assert rep.converged
    assert rep.residual <= 1e-4 * max(1.0, np.linalg.norm(rep.x_final)) * (1 + 1e-6)


def test_potential_helpers(rng, small_instances):
    p = small_instances[0]
    x, y, w = (rng.standard_normal(p.n) for _ in range(3))
    F = objective(p, x)
    assert h1_value(p, x, x) == F
    assert h3_value(p, x, x, x) == F
    assert h1_value(p, x, y) - F == pytest.approx(0.5 * p.L * np.sum((x - y) ** 2), rel=1e-12)
    q = ProblemInstance(p.A, p.b, p.penalty, Box.uniform(p.n, -0.1, 0.1))
    assert h1_value(q, np.full(p.n, 1.0), np.zeros(p.n)) == np.inf


def test_options_validation():
    for bad in (dict(tol=0), dict(max_iter=0), dict(gamma=1.0), dict(tau=1.0), dict(L_min=2, L_max=1)):
        with pytest.raises(ValueError):
            SolverOptions(**bad)
