"""Least-squares problem instances, random generation and stationarity checks."""
import struct
import time
from dataclasses import dataclass, field

import numpy as np

from .penalty import LogPenalty, Penalty, big_phi, weights
from .prox import Box

__all__ = [
    "ProblemInstance", "InstanceRecipe", "objective", "grad_f",
    "estimate_lipschitz", "generate_instance", "stationarity_residual",
    "dump_instance", "load_instance", "DegenerateMatrixError",
]

LIPSCHITZ_INFLATION = 1e-6
_MAGIC = b"IRL1"


class DegenerateMatrixError(ValueError):
    pass


@dataclass(eq=False)
class ProblemInstance:
    """``F(x) = 0.5*||Ax - b||^2 + sum_i phi(|x_i|)`` restricted to a box.

    ``L`` is the Lipschitz modulus of the least-squares gradient; it is
    estimated on first access unless supplied, and the estimation time is
    kept in ``lipschitz_time``.
    """

    A: np.ndarray
    b: np.ndarray
    penalty: Penalty
    box: Box = field(default_factory=Box)
    planted: np.ndarray | None = None
    _L: float | None = None
    lipschitz_time: float = 0.0

    def __post_init__(self):
        A = np.asfortranarray(self.A, dtype=float)
        b = np.ascontiguousarray(self.b, dtype=float)
        if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
            raise ValueError("A must be a nonempty 2-D matrix")
        if b.shape != (A.shape[0],):
            raise ValueError(f"b has shape {b.shape}, expected ({A.shape[0]},)")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("A and b must be finite")
        self.box.check_dim(A.shape[1])
        self.A, self.b = A, b

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def L(self) -> float:
        if self._L is None:
            t = time.perf_counter()
            self._L = estimate_lipschitz(self.A)
            self.lipschitz_time = time.perf_counter() - t
        return self._L

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"x has shape {x.shape}, expected ({self.n},)")
        return x


def objective(p: ProblemInstance, x) -> float:
    """``F(x)``, or ``inf`` when x leaves the box."""
    x = p._check(x)
    if not p.box.contains(x):
        return np.inf
    r = p.A @ x - p.b
    return 0.5 * float(r @ r) + big_phi(p.penalty, x)


def grad_f(p: ProblemInstance, x) -> np.ndarray:
    x = p._check(x)
    return p.A.T @ (p.A @ x - p.b)


def estimate_lipschitz(A, inflation: float = LIPSCHITZ_INFLATION,
                       rtol: float = 1e-10, max_iter: int = 5000) -> float:
    """Largest eigenvalue of ``A^T A`` by power iteration, inflated slightly.

    The iteration runs on the smaller Gram matrix. The result is the last
    Rayleigh quotient times ``1 + inflation``, so it majorizes the true
    value whenever the quotient is accurate to better than ``inflation``.
    """
    A = np.asarray(A, dtype=float)
    if A.size == 0 or not np.any(A):
        raise DegenerateMatrixError("cannot estimate the spectral norm of a zero matrix")
    m, n = A.shape
    k = min(m, n)
    if k <= 4000:
        G = A @ A.T if m <= n else A.T @ A
        apply = G.__matmul__
    elif m <= n:
        def apply(v):
            return A @ (A.T @ v)
    else:
        def apply(v):
            return A.T @ (A @ v)

    v = np.random.default_rng(0).standard_normal(k)
    v /= np.linalg.norm(v)
    mu = 0.0
    for _ in range(max_iter):
        w = apply(v)
        mu_new = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # start vector in the null space; restart along a coordinate
            v = np.zeros(k)
            v[np.argmax(np.sum(A * A, axis=1 if m <= n else 0))] = 1.0
            continue
        v = w / nw
        if abs(mu_new - mu) < rtol * abs(mu_new):
            mu = mu_new
            break
        mu = mu_new
    return mu * (1.0 + inflation)


@dataclass(frozen=True)
class InstanceRecipe:
    """Random sparse-recovery instance: Gaussian ``A`` with unit columns,
    ``r``-sparse Gaussian signal, ``b = A y + noise_scale * omega``."""

    m: int
    n: int
    seed: int = 0
    r: int | None = None
    noise_scale: float = 0.01

    def __post_init__(self):
        if self.m <= 0 or self.n <= 0:
            raise ValueError("m and n must be positive")
        if self.r is None:
            object.__setattr__(self, "r", self.m // 9)
        if self.r < 0 or self.r > self.n:
            raise ValueError(f"sparsity r={self.r} must lie in [0, n={self.n}]")
        if self.noise_scale < 0:
            raise ValueError("noise_scale must be nonnegative")


def generate_instance(recipe: InstanceRecipe, penalty: Penalty,
                      box: Box | None = None) -> ProblemInstance:
    """Draw an instance from ``recipe``; the result depends only on the recipe."""
    rng = np.random.default_rng(recipe.seed)
    m, n = recipe.m, recipe.n
    A = rng.standard_normal((m, n))
    A /= np.linalg.norm(A, axis=0)
    support = rng.choice(n, size=recipe.r, replace=False)
    y = np.zeros(n)
    y[support] = rng.standard_normal(recipe.r)
    omega = rng.standard_normal(m)
    b = A @ y + recipe.noise_scale * omega
    return ProblemInstance(A, b, penalty, box if box is not None else Box(), planted=y)


def stationarity_residual(p: ProblemInstance, x) -> float:
    """Euclidean distance from 0 to the limiting subdifferential of ``F`` at x.

    Per coordinate the subdifferential is ``g_i + s_i * d|x_i| + N_i`` with
    ``N_i`` the normal cone of the box interval. Writing the first two terms
    as an interval ``[lo, hi]``, a bound at the upper end of the box opens
    ``hi`` to ``+inf`` and a bound at the lower end opens ``lo`` to ``-inf``.
    """
    x = p._check(x)
    if not p.box.contains(x):
        raise ValueError("x lies outside the box")
    g = grad_f(p, x)
    s = weights(p.penalty, x)
    sgn = np.sign(x)
    zero = sgn == 0
    lo = np.where(zero, g - s, g + s * sgn)
    hi = np.where(zero, g + s, g + s * sgn)
    if p.box.lower is not None:
        lo = np.where(x <= p.box.lower, -np.inf, lo)
        hi = np.where(x >= p.box.upper, np.inf, hi)
    d = np.maximum(np.maximum(lo, -hi), 0.0)
    return float(np.linalg.norm(d))


def dump_instance(p: ProblemInstance, path, fmt: str | None = None):
    """Write ``(A, b)``.

    Binary layout (little-endian): ``b"IRL1"``, u32 m, u32 n, m*n f64 of A in
    column-major order, m f64 of b. The CSV form has a ``m,n`` header, a line
    with the two sizes, then m rows ``A[i, 0], ..., A[i, n-1], b[i]``.
    """
    fmt = fmt or ("csv" if str(path).endswith(".csv") else "bin")
    if fmt == "bin":
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<II", p.m, p.n))
            fh.write(np.asarray(p.A, dtype="<f8").tobytes(order="F"))
            fh.write(np.asarray(p.b, dtype="<f8").tobytes())
    elif fmt == "csv":
        with open(path, "w") as fh:
            fh.write("m,n\n")
            fh.write(f"{p.m},{p.n}\n")
            np.savetxt(fh, np.column_stack([p.A, p.b]), delimiter=",", fmt="%.17g")
    else:
        raise ValueError(f"unknown instance format {fmt!r}")


def load_instance(path, penalty: Penalty, box: Box | None = None,
                  fmt: str | None = None) -> ProblemInstance:
    fmt = fmt or ("csv" if str(path).endswith(".csv") else "bin")
    box = box if box is not None else Box()
    if fmt == "bin":
        with open(path, "rb") as fh:
            data = fh.read()
        if data[:4] != _MAGIC:
            raise ValueError(f"{path}: bad magic {data[:4]!r}")
        m, n = struct.unpack("<II", data[4:12])
        expected = 12 + 8 * (m * n + m)
        if len(data) != expected:
            raise ValueError(f"{path}: expected {expected} bytes, found {len(data)}")
        A = np.frombuffer(data, dtype="<f8", count=m * n, offset=12).reshape((m, n), order="F")
        b = np.frombuffer(data, dtype="<f8", count=m, offset=12 + 8 * m * n)
        return ProblemInstance(A.copy(order="F"), b.copy(), penalty, box)
    if fmt == "csv":
        with open(path) as fh:
            header = fh.readline().strip()
            if header != "m,n":
                raise ValueError(f"{path}: bad header {header!r}")
            m, n = (int(v) for v in fh.readline().split(","))
            rows = np.loadtxt(fh, delimiter=",", ndmin=2)
        if rows.shape != (m, n + 1):
            raise ValueError(f"{path}: expected {m}x{n + 1} values, found {rows.shape}")
        return ProblemInstance(rows[:, :n], rows[:, n], penalty, box)
    raise ValueError(f"unknown instance format {fmt!r}")


def log_problem(A, b, lam: float, eps: float, box: Box | None = None) -> ProblemInstance:
    """Shorthand for a log-penalty instance."""
    return ProblemInstance(A, b, LogPenalty(lam, eps), box if box is not None else Box())
