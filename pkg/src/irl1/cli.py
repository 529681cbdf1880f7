"""Command line entry point: ``irl1 {solve,bench,table,validate-schedules}``."""
import argparse
import logging
import sys

import numpy as np

from . import _kernels, bench
from .penalty import LogPenalty
from .problem import InstanceRecipe, generate_instance, load_instance
from .prox import Box
from .schedules import (
    DEFAULT_GAMMA, theta_e2, theta_e3, validate_condition_e2, validate_condition_e3,
)
from .solvers import SOLVERS, NumericalError, SolverOptions, solve


def _float_list(text):
    return [float(v) for v in text.split(",") if v]


def _name_list(text):
    names = [v.strip() for v in text.split(",") if v.strip()]
    unknown = [v for v in names if v not in SOLVERS]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown solvers {unknown}; choose from {sorted(SOLVERS)}")
    return names


def _sizes(text):
    out = []
    for item in text.split(","):
        try:
            m, n = item.lower().split("x")
            out.append((int(m), int(n)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad size {item!r}; expected MxN") from None
    return out


def _box(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad box {text!r}; expected LO,HI") from None
    if not lo <= 0 <= hi:
        raise argparse.ArgumentTypeError("the box must contain the origin")
    return lo, hi


def cmd_solve(args):
    pen = LogPenalty(args.lam, args.epsilon)
    if args.instance:
        p = load_instance(args.instance, pen)
        if args.box:
            p = type(p)(p.A, p.b, pen, Box.uniform(p.n, *args.box))
    else:
        box = Box.uniform(args.n, *args.box) if args.box else None
        p = generate_instance(InstanceRecipe(args.m, args.n, seed=args.seed), pen, box)
    p.L
    _kernels.warmup()
    opts = SolverOptions(tol=args.tol, max_iter=args.max_iter, monitor=args.monitor)
    try:
        rep = solve(p, args.solver, opts)
    except (NumericalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"solver     {rep.solver}\n"
          f"size       {p.m} x {p.n}\n"
          f"t0         {rep.lipschitz_time:.4f} s\n"
          f"time       {rep.wall_time:.4f} s\n"
          f"iterations {rep.iterations}\n"
          f"fval       {rep.fval:.10e}\n"
          f"residual   {rep.residual:.4e}\n"
          f"converged  {rep.converged}")
    if args.dump_x:
        np.savetxt(args.dump_x, rep.x_final, fmt="%.17g")
    if args.out:
        row = bench.BenchmarkRow(p.m, p.n, rep.solver, args.seed, args.lam, args.epsilon,
                                 rep.lipschitz_time, rep.wall_time, rep.iterations,
                                 rep.fval, rep.residual, rep.converged)
        bench.write_csv([row], args.out)
    return 0


def cmd_bench(args):
    if args.paper_scale:
        sizes = bench.FULL_SIZES
    else:
        sizes = tuple(args.sizes) if args.sizes else bench.DESK_SIZES
    plan = bench.BenchmarkPlan(
        sizes=sizes, seeds=args.seeds, lam=args.lam, epsilons=tuple(args.epsilon),
        solvers=tuple(args.solvers), tol=args.tol, max_iter=args.max_iter,
        threads=args.threads, first_seed=args.first_seed,
        memory_budget=int(args.memory_budget * 2 ** 30),
    )
    rows = bench.run_plan(plan)
    bench.write_csv(rows, args.out)
    print(bench.render_table(bench.aggregate(rows)))
    return 0


def cmd_table(args):
    print(bench.render_table(bench.aggregate(bench.read_csv(args.input))))
    return 0


def cmd_validate(args):
    gamma = args.gamma
    h2 = args.horizon or 200
    h3 = args.horizon or 60
    sup2, ok2 = validate_condition_e2(theta_e2, horizon=h2)
    sup3, ok3 = validate_condition_e3(theta_e3, gamma=gamma, horizon=h3)
    print(f"irl1e2  horizon {h2:4d}  sup = {sup2:.6e}  {'ok' if ok2 else 'FAIL'}")
    print(f"irl1e3  horizon {h3:4d}  gamma = {gamma:g}  sup = {sup3:.6e}  {'ok' if ok3 else 'FAIL'}")
    return 0 if (ok2 and ok3) else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="irl1", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one random (or loaded) instance")
    s.add_argument("--solver", choices=sorted(SOLVERS), required=True)
    s.add_argument("--m", type=int, default=720)
    s.add_argument("--n", type=int, default=2560)
    s.add_argument("--lambda", dest="lam", type=float, default=5e-4)
    s.add_argument("--epsilon", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-4)
    s.add_argument("--max-iter", type=int, default=1_000_000)
    s.add_argument("--box", type=_box, help="uniform bounds, e.g. --box=-1,1")
    s.add_argument("--monitor", action="store_true", help="check potential decrease")
    s.add_argument("--instance", help="load A, b from a binary or CSV dump")
    s.add_argument("--dump-x", help="write the terminal iterate, one value per line")
    s.add_argument("--out", help="write a one-row benchmark CSV")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run an instance sweep and write CSV")
    b.add_argument("--sizes", type=_sizes, help="MxN[,MxN...]; default 180i x 640i, i=1..4")
    b.add_argument("--seeds", type=int, default=20)
    b.add_argument("--first-seed", type=int, default=0)
    b.add_argument("--epsilon", type=_float_list, default=[0.1, 0.5])
    b.add_argument("--lambda", dest="lam", type=float, default=5e-4)
    b.add_argument("--solvers", type=_name_list, default=list(bench.SOLVER_ORDER))
    b.add_argument("--paper-scale", action="store_true", help="use 720i x 2560i, i=1..10")
    b.add_argument("--threads", type=int, default=1, help="overridden by IRL1_THREADS")
    b.add_argument("--tol", type=float, default=1e-4)
    b.add_argument("--max-iter", type=int, default=1_000_000)
    b.add_argument("--memory-budget", type=float, default=4.0, help="GiB per matrix")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("table", help="render seed-averaged means from a CSV")
    t.add_argument("--in", dest="input", required=True)
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("validate-schedules", help="check the theta conditions")
    v.add_argument("--horizon", type=int)
    v.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    v.set_defaults(func=cmd_validate)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
