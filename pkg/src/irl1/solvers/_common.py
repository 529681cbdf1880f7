import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import _kernels
from ..penalty import Penalty, big_phi
from ..problem import ProblemInstance, stationarity_residual


class NumericalError(ArithmeticError):
    """Non-finite iterate or a line search that ran past ``L_max``."""


class MonitorViolation(AssertionError):
    """A potential-decrease inequality failed by more than the slack."""


@dataclass
class SolverOptions:
    tol: float = 1e-4
    max_iter: int = 1_000_000
    monitor: bool = False
    monitor_slack: float = 1e-9
    gamma: float = 0.95
    # nonmonotone line search (GIST, IRL1ls)
    c: float = 1e-4
    tau: float = 2.0
    M: int = 4
    L_min: float = 1e-8
    L_max: float = 1e8
    # schedule overrides: k -> beta_k (IRL1e1) or k -> theta_k (IRL1e2/e3)
    schedule: Callable[[int], float] | None = None
    validate_schedule: bool = True

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.monitor_slack < 0:
            raise ValueError("monitor_slack must be nonnegative")
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")
        if not (self.c > 0 and self.tau > 1 and self.M >= 0):
            raise ValueError("line search needs c > 0, tau > 1, M >= 0")
        if not 0 < self.L_min < self.L_max:
            raise ValueError("need 0 < L_min < L_max")


@dataclass
class TraceRow:
    iteration: int
    fval: float
    potential: float
    step_norm: float
    param: float = float("nan")  # beta_k, theta_k or the accepted L_k
    retries: int = 0


@dataclass
class SolveReport:
    solver: str
    x_final: np.ndarray
    fval: float
    iterations: int
    residual: float
    criterion: float
    wall_time: float
    lipschitz_time: float
    converged: bool
    trace: list[TraceRow] | None = None
    recent_steps: list[float] = field(default_factory=list)
    restarts: int = 0
    line_search_retries: int = 0


class _Loop:
    """State shared by every solver loop: data, cached constants, timing
    and the optional monitor trace."""

    def __init__(self, name: str, p: ProblemInstance, opts: SolverOptions,
                 need_L: bool = True):
        self.name = name
        self.p = p
        self.opts = opts
        self.A = p.A
        self.b = p.b
        self.pen: Penalty = p.penalty
        self.lower, self.upper = p.box.bounds()
        self.L = p.L if need_L else float("nan")
        self.rho = self.pen.rho
        self.trace = [] if opts.monitor else None
        self.steps = deque(maxlen=10)
        self.t_start = time.perf_counter()

    def prox(self, t, s, step):
        return _kernels.soft_threshold_box(t, s / step, self.lower, self.upper)

    def fval(self, x, Ax):
        r = Ax - self.b
        return 0.5 * float(r @ r) + big_phi(self.pen, x)

    def fval_exact(self, x):
        return self.fval(x, self.A @ x)

    def check_finite(self, *values):
        for v in values:
            if not np.isfinite(v):
                raise NumericalError(f"{self.name}: non-finite value encountered")

    def violation(self, k, msg):
        raise MonitorViolation(f"{self.name}, iteration {k}: {msg}")

    def check_decrease(self, k, h_prev, h_new, required_drop):
        slack = self.opts.monitor_slack
        if h_new > h_prev + slack:
            self.violation(k, f"potential increased from {h_prev!r} to {h_new!r}")
        if h_prev - h_new < required_drop - slack:
            self.violation(k, f"potential drop {h_prev - h_new!r} below the "
                              f"guaranteed {required_drop!r}")

    def finish(self, x, iterations, criterion, converged, **extra):
        wall = time.perf_counter() - self.t_start
        x = np.array(x, dtype=float)
        return SolveReport(
            solver=self.name,
            x_final=x,
            fval=self.fval_exact(x),
            iterations=iterations,
            residual=stationarity_residual(self.p, x),
            criterion=criterion,
            wall_time=wall,
            lipschitz_time=self.p.lipschitz_time,
            converged=converged,
            trace=self.trace,
            recent_steps=list(self.steps),
            **extra,
        )


def norm(v) -> float:
    return float(np.sqrt(v @ v))
