"""Iteratively reweighted l1 with three kinds of extrapolation.

All three share the reweighting step ``s = phi'_+(|x^k|)`` and solve their
weighted-l1 subproblems in closed form through ``prox_weighted_l1_box``
with center ``point - grad / step``. Products with ``A`` are cached so each
iteration costs one product with ``A^T`` and one (IRL1e1, IRL1e2) or two
(IRL1e3) with ``A``.
"""
import numpy as np

from ..penalty import weights
from ..problem import ProblemInstance, objective
from ..schedules import (
    RESTART_EVERY, FistaState, adaptive_restart_test, beta_e1, decrease_coefficient_e2,
    decrease_coefficient_e3, theta_e2, theta_e3, validate_condition_e2,
    validate_condition_e3,
)
from ._common import SolverOptions, SolveReport, TraceRow, _Loop, norm

__all__ = ["solve_irl1e1", "solve_irl1e2", "solve_irl1e3", "h1_value", "h3_value"]


def h1_value(p: ProblemInstance, x, y) -> float:
    """``F(x) + (L/2)||x - y||^2``; infinite outside the box."""
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return objective(p, x) + 0.5 * p.L * float(d @ d)


def h3_value(p: ProblemInstance, x, y, w) -> float:
    """``F(x) + (L/2)||w - y||^2 + (L/2)||w - x||^2``; infinite outside the box."""
    x, y, w = (np.asarray(v, dtype=float) for v in (x, y, w))
    return objective(p, x) + 0.5 * p.L * (float((w - y) @ (w - y)) + float((w - x) @ (w - x)))


def solve_irl1e1(p: ProblemInstance, opts: SolverOptions | None = None) -> SolveReport:
    """FISTA-type extrapolation ``y^k = x^k + beta_k (x^k - x^{k-1})``.

    ``beta_k`` follows the FISTA recurrence restarted every 200 iterations
    and whenever ``<y^{k-1} - x^k, x^k - x^{k-1}> > 0``, unless
    ``opts.schedule`` supplies a fixed ``k -> beta_k``. Stops when
    ``(2L||x^{k+1} - y^k|| + rho||x^{k+1} - x^k||) / max(1, ||x^{k+1}||)``
    drops below ``opts.tol``.
    """
    opts = opts or SolverOptions()
    run = _Loop("irl1e1", p, opts)
    A, b, L, rho, pen = run.A, run.b, run.L, run.rho, run.pen

    x = np.zeros(p.n)
    x_prev = x.copy()
    Ax = A @ x
    Ax_prev = Ax.copy()
    y_prev = None
    state = FistaState()
    restarts = 0
    betas = []
    if opts.monitor:
        f_x = run.fval(x, Ax)
        h_prev = f_x

    crit = np.inf
    converged = False
    k = 0
    while k < opts.max_iter:
        if opts.schedule is not None:
            beta = float(opts.schedule(k))
        else:
            restart = y_prev is not None and adaptive_restart_test(y_prev, x, x_prev)
            if restart or state.iterations_since_restart >= RESTART_EVERY:
                restarts += 1
            beta, state = beta_e1(state, restart)
        s = weights(pen, x)
        y = x + beta * (x - x_prev)
        Ay = Ax + beta * (Ax - Ax_prev)
        g = A.T @ (Ay - b)
        x_new = run.prox(y - g / L, s, L)
        Ax_new = A @ x_new

        dxy = x_new - y
        dx = x_new - x
        step = norm(dx)
        crit = (2.0 * L * norm(dxy) + rho * step) / max(1.0, norm(x_new))
        run.check_finite(crit)
        run.steps.append(step)

        if opts.monitor:
            betas.append(beta)
            f_new = run.fval(x_new, Ax_new)
            h_new = f_new + 0.5 * L * step * step
            d_old = x - x_prev
            run.check_decrease(k, h_prev, h_new, 0.5 * L * (1.0 - beta * beta) * float(d_old @ d_old))
            run.trace.append(TraceRow(k + 1, f_new, h_new, step, beta))
            h_prev = h_new

        x_prev, x, Ax_prev, Ax, y_prev = x, x_new, Ax, Ax_new, y
        k += 1
        if crit < opts.tol:
            converged = True
            break

    if opts.monitor and betas and max(betas) >= 1.0:
        run.violation(k, f"sup beta = {max(betas)!r} is not below 1")
    return run.finish(x, k, crit, converged, restarts=restarts)


def _theta_schedule(opts, default, validator, **kw):
    theta = opts.schedule if opts.schedule is not None else default
    if opts.validate_schedule:
        sup, ok = validator(theta, **kw)
        if not ok:
            raise ValueError(f"extrapolation schedule fails its validity condition (sup = {sup!r})")
    return theta


def solve_irl1e2(p: ProblemInstance, opts: SolverOptions | None = None) -> SolveReport:
    """Auslender-Teboulle type extrapolation.

    ``y^k = (1-theta_k) x^k + theta_k z^k``, ``z^{k+1}`` from the weighted
    subproblem with curvature ``L theta_k`` centred at ``z^k``, and
    ``x^{k+1} = (1-theta_k) x^k + theta_k z^{k+1}``. The returned point is
    ``z^{k+1}``, the iterate the termination rule certifies.
    """
    opts = opts or SolverOptions()
    theta_fn = _theta_schedule(opts, theta_e2, validate_condition_e2, horizon=200)
    run = _Loop("irl1e2", p, opts)
    A, b, L, rho, pen = run.A, run.b, run.L, run.rho, run.pen

    x = np.zeros(p.n)
    z = x.copy()
    Ax = A @ x
    Az = Ax.copy()
    theta_prev = None
    if opts.monitor:
        x_prev = x.copy()
        h_prev = run.fval(x, Ax)

    crit = np.inf
    converged = False
    k = 0
    while k < opts.max_iter:
        theta = float(theta_fn(k))
        s = weights(pen, x)
        y = (1.0 - theta) * x + theta * z
        Ay = (1.0 - theta) * Ax + theta * Az
        g = A.T @ (Ay - b)
        step_z = L * theta
        z_new = run.prox(z - g / step_z, s, step_z)
        x_new = (1.0 - theta) * x + theta * z_new
        Az_new = A @ z_new
        Ax_new = (1.0 - theta) * Ax + theta * Az_new

        dx = x_new - x
        step = norm(dx)
        crit = (L * norm(z_new - y) + rho * norm(x - z_new) + L * norm(x_new - y)) \
            / max(1.0, norm(z_new))
        run.check_finite(crit)
        run.steps.append(step)

        if opts.monitor:
            f_new = run.fval_exact(x_new)
            h_new = f_new + 0.5 * L * step * step
            if k >= 1:
                d = x_prev - z
                coef = decrease_coefficient_e2(theta_prev, theta)
                run.check_decrease(k, h_prev, h_new, 0.5 * L * coef * float(d @ d))
            run.trace.append(TraceRow(k + 1, f_new, h_new, step, theta))
            h_prev = h_new
            x_prev = x

        x, z, Ax, Az = x_new, z_new, Ax_new, Az_new
        theta_prev = theta
        k += 1
        if crit < opts.tol:
            converged = True
            break

    return run.finish(z, k, crit, converged)


def solve_irl1e3(p: ProblemInstance, opts: SolverOptions | None = None) -> SolveReport:
    """Lan-Lu-Monteiro type extrapolation.

    Both ``z^{k+1}`` (curvature ``L theta_k`` around ``z^k``) and ``x^{k+1}``
    (curvature ``L`` around ``y^k``) come from the gradient at
    ``y^k = (1-theta_k) x^k + theta_k z^k``. The monitor tracks
    ``w^{k+1} = (1-theta_k) x^k + theta_k z^{k+1}`` for the potential.
    """
    opts = opts or SolverOptions()
    theta_fn = _theta_schedule(opts, theta_e3, validate_condition_e3,
                               gamma=opts.gamma, horizon=60)
    run = _Loop("irl1e3", p, opts)
    A, b, L, rho, pen = run.A, run.b, run.L, run.rho, run.pen
    gamma = opts.gamma

    x = np.zeros(p.n)
    z = x.copy()
    Ax = A @ x
    Az = Ax.copy()
    theta_prev = None
    if opts.monitor:
        x_prev = x.copy()
        w = None
        h_prev = None

    crit = np.inf
    converged = False
    k = 0
    while k < opts.max_iter:
        theta = float(theta_fn(k))
        s = weights(pen, x)
        y = (1.0 - theta) * x + theta * z
        Ay = (1.0 - theta) * Ax + theta * Az
        g = A.T @ (Ay - b)
        step_z = L * theta
        z_new = run.prox(z - g / step_z, s, step_z)
        x_new = run.prox(y - g / L, s, L)
        Az_new = A @ z_new
        Ax_new = A @ x_new

        dx = x_new - x
        step = norm(dx)
        crit = (2.0 * L * norm(x_new - y) + rho * step) / max(1.0, norm(x_new))
        run.check_finite(crit)
        run.steps.append(step)

        if opts.monitor:
            w_new = (1.0 - theta) * x + theta * z_new
            f_new = run.fval(x_new, Ax_new)
            a = w_new - x
            c = w_new - x_new
            h_new = f_new + 0.5 * L * (float(a @ a) + float(c @ c))
            if k >= 1:
                d1 = x_prev - z
                d2 = w - x
                coef = decrease_coefficient_e3(theta_prev, theta, gamma)
                run.check_decrease(k, h_prev, h_new,
                                   0.5 * L * coef * (float(d1 @ d1) + float(d2 @ d2)))
            run.trace.append(TraceRow(k + 1, f_new, h_new, step, theta))
            h_prev = h_new
            x_prev = x
            w = w_new

        x, z, Ax, Az = x_new, z_new, Ax_new, Az_new
        theta_prev = theta
        k += 1
        if crit < opts.tol:
            converged = True
            break

    return run.finish(x, k, crit, converged)
