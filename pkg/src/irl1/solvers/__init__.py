"""The five solver loops and their shared option/report types."""
from ._common import (
    MonitorViolation, NumericalError, SolveReport, SolverOptions, TraceRow,
)
from .extrapolated import h1_value, h3_value, solve_irl1e1, solve_irl1e2, solve_irl1e3
from .linesearch import solve_gist, solve_irl1ls

SOLVERS = {
    "irl1e1": solve_irl1e1,
    "irl1e2": solve_irl1e2,
    "irl1e3": solve_irl1e3,
    "gist": solve_gist,
    "irl1ls": solve_irl1ls,
}


def solve(p, solver: str, opts: SolverOptions | None = None) -> SolveReport:
    try:
        fn = SOLVERS[solver]
    except KeyError:
        raise ValueError(f"unknown solver {solver!r}; choose from {sorted(SOLVERS)}") from None
    return fn(p, opts)


__all__ = [
    "SOLVERS", "solve", "SolverOptions", "SolveReport", "TraceRow",
    "NumericalError", "MonitorViolation", "h1_value", "h3_value",
    "solve_irl1e1", "solve_irl1e2", "solve_irl1e3", "solve_gist", "solve_irl1ls",
]
