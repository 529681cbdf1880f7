"""Concave separable sparsity penalties and their reweighting weights.

A penalty is a concave, nondecreasing ``phi: [0, inf) -> [0, inf)`` with
``phi(0) = 0`` and a finite right derivative at the origin. The solvers only
need three things from it: the value ``phi(t)``, the right derivative
``phi'_+(t)`` (the reweighting weight), and the Lipschitz modulus ``rho`` of
``t -> phi'_+(t)``, which enters the termination rules.
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = [
    "Penalty", "LogPenalty", "SCADPenalty", "MCPPenalty", "L1Penalty",
    "phi_value", "phi_weight", "weights", "big_phi",
]


class Penalty:
    """Base class; subclasses implement vectorized ``value`` and ``weight``."""

    name = "penalty"

    def value(self, t):
        raise NotImplementedError

    def weight(self, t):
        raise NotImplementedError

    @property
    def ell(self) -> float:
        """Right derivative of phi at the origin."""
        return float(self.weight(np.zeros(1))[0])

    @property
    def rho(self) -> float:
        """Lipschitz modulus of the weight function on [0, inf)."""
        raise NotImplementedError


def _positive(name, value):
    if not (np.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class LogPenalty(Penalty):
    """``phi(t) = lam * log(t + eps) - lam * log(eps)``."""

    lam: float
    eps: float
    name = "log"

    def __post_init__(self):
        _positive("lam", self.lam)
        _positive("eps", self.eps)

    def value(self, t):
        return self.lam * np.log1p(np.asarray(t, dtype=float) / self.eps)

    def weight(self, t):
        return self.lam / (np.asarray(t, dtype=float) + self.eps)

    @property
    def ell(self):
        return self.lam / self.eps

    @property
    def rho(self):
        return self.lam / self.eps ** 2


@dataclass(frozen=True)
class SCADPenalty(Penalty):
    """Smoothly clipped absolute deviation with threshold ``lam`` and shape ``a > 2``."""

    lam: float
    a: float
    name = "scad"

    def __post_init__(self):
        _positive("lam", self.lam)
        if not (np.isfinite(self.a) and self.a > 2):
            raise ValueError(f"SCAD requires a > 2, got {self.a!r}")

    def value(self, t):
        t = np.asarray(t, dtype=float)
        lam, a = self.lam, self.a
        mid = (2 * a * lam * t - t * t - lam * lam) / (2 * (a - 1))
        return np.where(t <= lam, lam * t,
                        np.where(t <= a * lam, mid, 0.5 * lam * lam * (a + 1)))

    def weight(self, t):
        # right derivative: at t = lam and t = a*lam the right branch is taken
        t = np.asarray(t, dtype=float)
        lam, a = self.lam, self.a
        return np.where(t < lam, lam,
                        np.where(t < a * lam, (a * lam - t) / (a - 1), 0.0))

    @property
    def ell(self):
        return self.lam

    @property
    def rho(self):
        return 1.0 / (self.a - 1)


@dataclass(frozen=True)
class MCPPenalty(Penalty):
    """Minimax concave penalty with level ``lam`` and concavity parameter ``b``."""

    lam: float
    b: float
    name = "mcp"

    def __post_init__(self):
        _positive("lam", self.lam)
        _positive("b", self.b)

    def value(self, t):
        t = np.asarray(t, dtype=float)
        lam, b = self.lam, self.b
        return np.where(t <= b * lam, lam * t - t * t / (2 * b), 0.5 * b * lam * lam)

    def weight(self, t):
        t = np.asarray(t, dtype=float)
        return np.maximum(self.lam - t / self.b, 0.0)

    @property
    def ell(self):
        return self.lam

    @property
    def rho(self):
        return 1.0 / self.b


@dataclass(frozen=True)
class L1Penalty(Penalty):
    """``phi(t) = lam * t``; the convex reference case."""

    lam: float
    name = "l1"

    def __post_init__(self):
        _positive("lam", self.lam)

    def value(self, t):
        return self.lam * np.asarray(t, dtype=float)

    def weight(self, t):
        return np.full(np.shape(t), float(self.lam))

    @property
    def ell(self):
        return self.lam

    @property
    def rho(self):
        return 0.0


def _check_nonneg(t):
    if not t >= 0:
        raise ValueError(f"penalty argument must be nonnegative, got {t!r}")


def phi_value(p: Penalty, t: float) -> float:
    _check_nonneg(t)
    return float(p.value(t))


def phi_weight(p: Penalty, t: float) -> float:
    _check_nonneg(t)
    return float(p.weight(t))


def weights(p: Penalty, x) -> np.ndarray:
    """Reweighting vector ``s_i = phi'_+(|x_i|)``."""
    x = np.asarray(x, dtype=float)
    if isinstance(p, LogPenalty):
        return _kernels.log_weights(x, p.lam, p.eps)
    return p.weight(np.abs(x))


def big_phi(p: Penalty, x) -> float:
    """Separable sum ``sum_i phi(|x_i|)``."""
    return float(np.sum(p.value(np.abs(np.asarray(x, dtype=float)))))
