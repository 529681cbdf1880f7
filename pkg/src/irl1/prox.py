"""Closed-form proximal kernels.

``prox_weighted_l1_box`` solves, componentwise,

    min_{lower <= y <= upper}  (step/2) * (y - t)**2 + s * |y|.

Each scalar objective is convex in ``y``, so its minimizer over an interval
is the clamp of the unconstrained minimizer (soft thresholding) onto that
interval. The reweighted subproblems of all extrapolated solvers are
brought into this form by completing the square around
``t = y - grad / step``.

``prox_scalar_log`` is the exact proximal map of the log penalty, found by
enumerating ``u = 0`` and the stationary points on the half-line carrying
the sign of ``v``.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = ["Box", "prox_weighted_l1_box", "prox_scalar_log", "prox_log", "project_box"]


@dataclass(frozen=True, eq=False)
class Box:
    """Coordinatewise bounds; ``Box()`` is the whole space."""

    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def __post_init__(self):
        if (self.lower is None) != (self.upper is None):
            raise ValueError("lower and upper must both be given or both omitted")
        if self.lower is None:
            return
        lo = np.ascontiguousarray(self.lower, dtype=float)
        hi = np.ascontiguousarray(self.upper, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("lower and upper must be 1-D arrays of equal length")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo > hi):
            raise ValueError("box requires lower <= upper componentwise")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def uniform(cls, n: int, lo: float, hi: float) -> "Box":
        return cls(np.full(n, float(lo)), np.full(n, float(hi)))

    @property
    def unbounded(self) -> bool:
        return self.lower is None or bool(
            np.all(self.lower == -np.inf) and np.all(self.upper == np.inf))

    def check_dim(self, n: int):
        if self.lower is not None and self.lower.shape[0] != n:
            raise ValueError(f"box has dimension {self.lower.shape[0]}, expected {n}")

    def contains(self, x) -> bool:
        if self.lower is None:
            return True
        x = np.asarray(x)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def bounds(self):
        """``(lower, upper)`` arrays, or ``(None, None)`` when unbounded."""
        if self.unbounded:
            return None, None
        return self.lower, self.upper


def prox_weighted_l1_box(t, s, step: float, box: Box | None = None) -> np.ndarray:
    """Minimize ``(step/2)||y - t||^2 + sum(s * |y|)`` over the box.

    Parameters
    ----------
    t : array
        Center of the quadratic.
    s : array or float
        Nonnegative weights.
    step : float
        Positive curvature of the quadratic.
    box : Box, optional
        Feasible set; ``None`` means the whole space.
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step!r}")
    t = np.ascontiguousarray(t, dtype=float)
    s = np.ascontiguousarray(np.broadcast_to(s, t.shape), dtype=float)
    if np.any(s < 0) or np.any(np.isnan(s)):
        raise ValueError("weights must be nonnegative")
    lower, upper = (None, None) if box is None else box.bounds()
    return _kernels.soft_threshold_box(t, s / step, lower, upper)


def prox_scalar_log(v: float, step: float, lam: float, eps: float) -> float:
    """Global minimizer of ``(step/2)(u - v)^2 + lam*(log(|u| + eps) - log(eps))``.

    Ties between candidates (objective values within 1e-12) resolve to the
    smaller magnitude.
    """
    for name, val in (("step", step), ("lambda", lam), ("eps", eps)):
        if not val > 0:
            raise ValueError(f"{name} must be positive, got {val!r}")
    return float(_kernels.log_prox_scalar(float(v), float(step), float(lam), float(eps)))


def prox_log(v, step: float, lam: float, eps: float) -> np.ndarray:
    """Componentwise ``prox_scalar_log``."""
    for name, val in (("step", step), ("lambda", lam), ("eps", eps)):
        if not val > 0:
            raise ValueError(f"{name} must be positive, got {val!r}")
    return _kernels.log_prox(v, step, lam, eps)


def project_box(x, box: Box | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if box is None or box.unbounded:
        return x.copy()
    return np.clip(x, box.lower, box.upper)
