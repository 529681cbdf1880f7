"""Benchmark harness: random instance sweeps, seed averaging and CSV output."""
import csv
import logging
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import _kernels
from .penalty import LogPenalty
from .problem import InstanceRecipe, generate_instance
from .solvers import SOLVERS, NumericalError, SolverOptions, solve

log = logging.getLogger(__name__)

CSV_HEADER = ["m", "n", "solver", "seed", "lambda", "epsilon", "t0_seconds",
              "solve_seconds", "iterations", "fval", "residual", "converged"]
SOLVER_ORDER = ("gist", "irl1ls", "irl1e1", "irl1e2", "irl1e3")
DESK_SIZES = tuple((180 * i, 640 * i) for i in range(1, 5))
FULL_SIZES = tuple((720 * i, 2560 * i) for i in range(1, 11))
TIMING_COLUMNS = ("t0_seconds", "solve_seconds")


@dataclass
class BenchmarkRow:
    m: int
    n: int
    solver: str
    seed: int
    lam: float
    epsilon: float
    t0_seconds: float
    solve_seconds: float
    iterations: int
    fval: float
    residual: float
    converged: bool


@dataclass
class BenchmarkPlan:
    sizes: tuple = DESK_SIZES
    seeds: int = 20
    lam: float = 5e-4
    epsilons: tuple = (0.1, 0.5)
    solvers: tuple = SOLVER_ORDER
    tol: float = 1e-4
    max_iter: int = 1_000_000
    threads: int = 1
    first_seed: int = 0
    memory_budget: int = 4 * 2 ** 30
    seed_list: tuple | None = field(default=None)

    def __post_init__(self):
        unknown = set(self.solvers) - set(SOLVERS)
        if unknown:
            raise ValueError(f"unknown solvers: {sorted(unknown)}")
        if self.seeds < 1 and not self.seed_list:
            raise ValueError("need at least one seed")

    @property
    def seed_values(self):
        if self.seed_list is not None:
            return tuple(self.seed_list)
        return tuple(range(self.first_seed, self.first_seed + self.seeds))


def _solver_key(name):
    return SOLVER_ORDER.index(name) if name in SOLVER_ORDER else len(SOLVER_ORDER)


def _run_instance(plan: BenchmarkPlan, m: int, n: int, eps: float, seed: int):
    p = generate_instance(InstanceRecipe(m, n, seed=seed), LogPenalty(plan.lam, eps))
    p.L  # estimated once per instance; its time is t0
    opts = SolverOptions(tol=plan.tol, max_iter=plan.max_iter)
    rows = []
    for name in plan.solvers:
        try:
            rep = solve(p, name, opts)
            rows.append(BenchmarkRow(m, n, name, seed, plan.lam, eps, p.lipschitz_time,
                                     rep.wall_time, rep.iterations, rep.fval,
                                     rep.residual, rep.converged))
        except NumericalError as exc:
            log.warning("%s failed on m=%d n=%d eps=%g seed=%d: %s", name, m, n, eps, seed, exc)
            rows.append(BenchmarkRow(m, n, name, seed, plan.lam, eps, p.lipschitz_time,
                                     float("nan"), 0, float("nan"), float("nan"), False))
    return rows


def resolve_threads(requested: int) -> int:
    env = os.environ.get("IRL1_THREADS")
    if env:
        return max(1, int(env))
    return max(1, int(requested))


def run_plan(plan: BenchmarkPlan) -> list[BenchmarkRow]:
    for m, n in plan.sizes:
        need = 8 * m * n
        if need > plan.memory_budget:
            raise MemoryError(f"a {m}x{n} matrix needs {need / 2**30:.2f} GiB, "
                              f"over the {plan.memory_budget / 2**30:.2f} GiB budget")
    _kernels.warmup()
    tasks = [(m, n, eps, seed) for m, n in plan.sizes for eps in plan.epsilons
             for seed in plan.seed_values]
    threads = resolve_threads(plan.threads)
    if threads == 1:
        chunks = [_run_instance(plan, *t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda t: _run_instance(plan, *t), tasks))
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r.m, r.n, r.epsilon, r.seed, _solver_key(r.solver)))
    return rows


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def rows_to_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(getattr(r, f.name)) for f in fields(BenchmarkRow)])


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        rows_to_csv(rows, fh)


def read_csv(source) -> list[BenchmarkRow]:
    """Parse rows from a path or an open text file."""
    if hasattr(source, "read"):
        return _parse_rows(source)
    with open(source, newline="") as fh:
        return _parse_rows(fh)


def _parse_rows(fh):
    reader = csv.reader(fh)
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    out = []
    for rec in reader:
        m, n, solver, seed, lam, eps, t0, ts, it, fv, res, conv = rec
        out.append(BenchmarkRow(int(m), int(n), solver, int(seed), float(lam), float(eps),
                                float(t0), float(ts), int(it), float(fv), float(res),
                                conv == "true"))
    return out


@dataclass
class AggregateRow:
    m: int
    n: int
    epsilon: float
    solver: str
    lam: float
    count: int
    t0_seconds: float
    solve_seconds: float
    iterations: float
    fval: float
    residual: float
    converged: int


def aggregate(rows) -> list[AggregateRow]:
    """Means over seeds, one entry per ``(m, n, epsilon, solver)``."""
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to aggregate")
    groups = defaultdict(list)
    for r in rows:
        groups[(r.m, r.n, r.epsilon, r.solver)].append(r)
    out = []
    for (m, n, eps, solver), grp in groups.items():
        lams = {r.lam for r in grp}
        if len(lams) > 1:
            raise ValueError(f"mixed lambda values {sorted(lams)} in group {(m, n, eps, solver)}")
        out.append(AggregateRow(
            m, n, eps, solver, grp[0].lam, len(grp),
            float(np.mean([r.t0_seconds for r in grp])),
            float(np.mean([r.solve_seconds for r in grp])),
            float(np.mean([r.iterations for r in grp])),
            float(np.mean([r.fval for r in grp])),
            float(np.mean([r.residual for r in grp])),
            sum(r.converged for r in grp),
        ))
    out.sort(key=lambda a: (a.m, a.n, a.epsilon, a.solver))
    return out


def render_table(agg: list[AggregateRow]) -> str:
    """One block per (lambda, epsilon); each line holds t0, then the mean
    time and the mean fval of every solver."""
    solvers = sorted({a.solver for a in agg}, key=_solver_key)
    by_key = defaultdict(dict)
    for a in agg:
        by_key[(a.lam, a.epsilon, a.m, a.n)][a.solver] = a
    lines = []
    current = None
    for (lam, eps, m, n) in sorted(by_key):
        if (lam, eps) != current:
            current = (lam, eps)
            if lines:
                lines.append("")
            lines.append(f"lambda = {lam:g}, epsilon = {eps:g}")
            head = f"{'m':>6} {'n':>7} {'t0':>7} | " + " ".join(f"{s:>8}" for s in solvers)
            head += " | " + " ".join(f"{s:>11}" for s in solvers)
            lines.append(head)
        cells = by_key[(lam, eps, m, n)]
        t0 = next(iter(cells.values())).t0_seconds
        line = f"{m:>6} {n:>7} {t0:>7.2f} | "
        line += " ".join(f"{cells[s].solve_seconds:>8.2f}" if s in cells else f"{'-':>8}"
                         for s in solvers)
        line += " | " + " ".join(f"{cells[s].fval:>11.4e}" if s in cells else f"{'-':>11}"
                                 for s in solvers)
        lines.append(line)
    return "\n".join(lines)
