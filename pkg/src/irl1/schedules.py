"""Extrapolation parameters for the three extrapolated solvers.

* type I uses FISTA momentum ``beta_k = theta_k (1/theta_{k-1} - 1)`` with
  fixed (every 200 iterations) and adaptive restarts;
* type II uses a period-100 table: 50 FISTA values, the last one repeated,
  then the first 49 mirrored back up to ``theta_99 = 1``;
* type III uses FISTA values frozen after index 56, shifted by six.

The validators evaluate the sup-conditions on ``theta`` that guarantee the
potential decrease of the type II and type III schemes.
"""
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "fista_next", "FistaState", "beta_e1", "adaptive_restart_test",
    "E2_TABLE", "E3_RHO", "theta_e2", "theta_e3",
    "validate_condition_e2", "validate_condition_e3",
    "replay_e1", "decrease_coefficient_e2", "decrease_coefficient_e3",
    "RESTART_EVERY", "DEFAULT_GAMMA", "DEFAULT_DELTA",
]

RESTART_EVERY = 200
DEFAULT_GAMMA = 0.95
DEFAULT_DELTA = 1e-8


def fista_next(theta: float) -> float:
    """``2 / (1 + sqrt(1 + 4/theta^2))``; strictly decreasing in the iteration."""
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (0, 1], got {theta!r}")
    out = 2.0 / (1.0 + math.sqrt(1.0 + 4.0 / (theta * theta)))
    assert out < theta
    return out


@dataclass(frozen=True)
class FistaState:
    theta_prev: float = 1.0
    theta: float = 1.0
    iterations_since_restart: int = 0


def beta_e1(state: FistaState, restart_requested: bool = False):
    """Emit ``beta_k`` and the state for the next iteration.

    A restart (fixed, after ``RESTART_EVERY`` emissions since the previous
    restart, or requested) resets ``theta_{k-1} = theta_k = 1`` first, so the
    emitted value is 0.
    """
    if restart_requested or state.iterations_since_restart >= RESTART_EVERY:
        state = FistaState()
    beta = state.theta * (1.0 / state.theta_prev - 1.0)
    nxt = FistaState(state.theta, fista_next(state.theta), state.iterations_since_restart + 1)
    return beta, nxt


def adaptive_restart_test(y_prev, x_curr, x_prev) -> bool:
    """True when ``<y^{k-1} - x^k, x^k - x^{k-1}> > 0``."""
    y_prev, x_curr, x_prev = (np.asarray(v, dtype=float) for v in (y_prev, x_curr, x_prev))
    if not (y_prev.shape == x_curr.shape == x_prev.shape):
        raise ValueError("restart test vectors must share one shape")
    return bool(np.dot(y_prev - x_curr, x_curr - x_prev) > 0.0)


def _build_e2_table() -> np.ndarray:
    t = np.empty(100)
    t[0] = 1.0
    for k in range(49):
        t[k + 1] = fista_next(t[k])
    t[50] = t[49]
    for k in range(51, 100):
        t[k] = t[99 - k]
    t.setflags(write=False)
    return t


def _build_e3_rho() -> np.ndarray:
    rho = np.empty(57)
    rho[0] = 1.0
    for k in range(56):
        rho[k + 1] = fista_next(rho[k])
    rho.setflags(write=False)
    return rho


E2_TABLE = _build_e2_table()
E3_RHO = _build_e3_rho()


def theta_e2(k: int) -> float:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return float(E2_TABLE[k % 100])


def theta_e3(k: int) -> float:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return float(E3_RHO[min(k + 6, 56)])


def _thetas(thetas, horizon):
    if callable(thetas):
        return np.array([thetas(k) for k in range(horizon + 1)])
    arr = np.asarray(thetas, dtype=float)
    if arr.size == 0:
        raise ValueError("empty theta sequence")
    if arr.size < horizon + 1:
        raise ValueError(f"need {horizon + 1} values for horizon {horizon}, got {arr.size}")
    return arr[:horizon + 1]


def validate_condition_e2(thetas, horizon: int = 200, delta: float = DEFAULT_DELTA):
    """``max_{1<=k<=horizon} theta_k^2 (1-theta_{k-1})^2 - theta_{k-1}^2``.

    ``thetas`` is either a sequence holding ``theta_0..theta_horizon`` or a
    callable ``k -> theta_k``. Returns ``(sup_value, sup_value <= -delta)``.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    t = _thetas(thetas, horizon)
    cur, prev = t[1:], t[:-1]
    vals = cur ** 2 * (1.0 - prev) ** 2 - prev ** 2
    sup = float(vals.max())
    return sup, sup <= -delta


def validate_condition_e3(thetas, gamma: float = DEFAULT_GAMMA, horizon: int = 60,
                          delta: float = DEFAULT_DELTA):
    """Sup over ``1<=k<=horizon`` of
    ``max(theta_k^2 (1-theta_{k-1})^2 / gamma - theta_{k-1}^2, theta_k^2/(1-gamma) - 1)``.

    Index 0 is excluded; the first type III value ``theta_0 = rho_6`` alone
    would violate the second term at ``gamma = 0.95``.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma!r}")
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    t = _thetas(thetas, horizon)
    cur, prev = t[1:], t[:-1]
    first = cur ** 2 * (1.0 - prev) ** 2 / gamma - prev ** 2
    second = cur ** 2 / (1.0 - gamma) - 1.0
    sup = float(np.maximum(first, second).max())
    return sup, sup <= -delta


def decrease_coefficient_e2(theta_prev: float, theta: float) -> float:
    """``theta_{k-1}^2 - theta_k^2 (1-theta_{k-1})^2``, the per-step margin."""
    return theta_prev ** 2 - theta ** 2 * (1.0 - theta_prev) ** 2


def decrease_coefficient_e3(theta_prev: float, theta: float, gamma: float) -> float:
    return min(theta_prev ** 2 - theta ** 2 * (1.0 - theta_prev) ** 2 / gamma,
               1.0 - theta ** 2 / (1.0 - gamma))


def replay_e1(restarts, steps: int) -> np.ndarray:
    """Beta sequence of ``steps`` emissions with adaptive restarts requested
    at the iteration indices in ``restarts``."""
    restarts = set(restarts)
    state = FistaState()
    out = np.empty(steps)
    for k in range(steps):
        out[k], state = beta_e1(state, k in restarts)
    return out
