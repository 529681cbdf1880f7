"""Baselines with Barzilai-Borwein steps and a nonmonotone line search.

GIST takes a proximal step on the log penalty itself; IRL1ls linearizes the
penalty into weights first and takes a weighted soft-thresholding step.
Both accept a trial point when

    F(x+) <= max(F(x^{k-M}), ..., F(x^k)) - (c/2) ||x+ - x^k||^2

and otherwise multiply the curvature ``L_k`` by ``tau``.
"""
from collections import deque

import numpy as np

from .. import _kernels
from ..penalty import LogPenalty, weights
from ..problem import ProblemInstance
from ._common import NumericalError, SolverOptions, SolveReport, TraceRow, _Loop, norm

__all__ = ["solve_gist", "solve_irl1ls"]


def _bb_curvature(dx, dAx, L_min, L_max):
    den = float(dx @ dx)
    if den == 0.0:
        return L_min
    return min(L_max, max(float(dAx @ dAx) / den, L_min))


def _nonmonotone(run: _Loop, p: ProblemInstance, trial, use_weights: bool) -> SolveReport:
    opts = run.opts
    A, b, rho = run.A, run.b, run.rho
    c, tau = opts.c, opts.tau

    x = np.zeros(p.n)
    Ax = A @ x
    g = A.T @ (Ax - b)
    hist = deque([run.fval(x, Ax)], maxlen=opts.M + 1)
    x_prev = Ax_prev = None
    retries_total = 0

    crit = np.inf
    converged = False
    k = 0
    while k < opts.max_iter:
        Lk = 1.0 if k == 0 else _bb_curvature(x - x_prev, Ax - Ax_prev, opts.L_min, opts.L_max)
        ref = max(hist)
        s = weights(run.pen, x) if use_weights else None
        retries = 0
        while True:
            x_new = trial(x, g, Lk, s)
            Ax_new = A @ x_new
            f_new = run.fval(x_new, Ax_new)
            d = x_new - x
            dd = float(d @ d)
            run.check_finite(f_new)
            if f_new <= ref - 0.5 * c * dd:
                break
            Lk *= tau
            retries += 1
            if Lk > opts.L_max:
                raise NumericalError(f"{run.name}: line search exceeded L_max = {opts.L_max:g}")
        retries_total += retries

        g_new = A.T @ (Ax_new - b)
        step = np.sqrt(dd)
        extra = rho if use_weights else 0.0
        crit = (norm(g - g_new) + (Lk + extra) * step) / max(1.0, norm(x_new))
        run.check_finite(crit)
        run.steps.append(step)
        hist.append(f_new)

        if opts.monitor:
            # the reference value max(hist) can only go down
            pot = max(hist)
            if run.trace and pot > run.trace[-1].potential + opts.monitor_slack:
                run.violation(k, f"nonmonotone reference rose to {pot!r}")
            if f_new > ref - 0.5 * c * dd + opts.monitor_slack:
                run.violation(k, "accepted step violates the sufficient decrease test")
            run.trace.append(TraceRow(k + 1, f_new, pot, step, Lk, retries))

        x_prev, Ax_prev = x, Ax
        x, Ax, g = x_new, Ax_new, g_new
        k += 1
        if crit < opts.tol:
            converged = True
            break

    return run.finish(x, k, crit, converged, line_search_retries=retries_total)


def solve_gist(p: ProblemInstance, opts: SolverOptions | None = None) -> SolveReport:
    """GIST on the log penalty: trial points are exact log-penalty prox steps."""
    opts = opts or SolverOptions()
    pen = p.penalty
    if not isinstance(pen, LogPenalty):
        raise ValueError("GIST is implemented for the log penalty only")
    if not p.box.unbounded:
        raise ValueError("GIST is implemented for the unconstrained problem only")
    lam, eps = pen.lam, pen.eps

    def trial(x, g, Lk, s):
        return _kernels.log_prox(x - g / Lk, Lk, lam, eps)

    run = _Loop("gist", p, opts, need_L=False)
    return _nonmonotone(run, p, trial, use_weights=False)


def solve_irl1ls(p: ProblemInstance, opts: SolverOptions | None = None) -> SolveReport:
    """Reweighted l1 with BB initial curvature and nonmonotone backtracking."""
    opts = opts or SolverOptions()
    run = _Loop("irl1ls", p, opts, need_L=False)

    def trial(x, g, Lk, s):
        return run.prox(x - g / Lk, s, Lk)

    return _nonmonotone(run, p, trial, use_weights=True)
