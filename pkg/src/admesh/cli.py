"""Command-line entry point: ``admesh {solve,table,optimal-mesh,constants}``.

Exit codes: 0 success, 1 usage error, 2 when a table cell failed.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bench
from .core import AdmeshConfig, admesh_solve
from .exceptions import AdmeshError
from .nc_constants import R_MAX, newton_cotes_constant
from .optimal_mesh import equidistribute, equidistribution_residual, gain_report, m_of_eps
from .problems import parse_problem, registry


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _write(data: bytes, out):
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def cmd_solve(args):
    problem = parse_problem(args.problem)
    if args.r is not None and args.r != problem.r:
        problem = registry(problem.name, {**problem.params, "r": args.r})
    report = admesh_solve(problem, AdmeshConfig(eps=args.eps, alpha=args.alpha, r=problem.r))
    bench.measure_errors(problem, report)
    d = bench.report_dict(report)
    d["local_errors"] = bench.local_errors(problem, report)
    _write((json.dumps(_jsonable(d), indent=1) + "\n").encode(), args.out)
    return 0


def cmd_table(args):
    rows = bench.run_table(args.problem, args.eps_list, args.delta_list, args.alpha, args.r)
    _write(bench.emit(rows, args.format), args.out)
    failed = [row for row in rows if not row.ok]
    for row in failed:
        print(f"cell eps={row.eps:g} delta={row.delta:g} failed: {row.error}", file=sys.stderr)
    return 2 if failed else 0


def cmd_optimal_mesh(args):
    problem = parse_problem(args.problem)
    m = args.m if args.m is not None else m_of_eps(problem, args.eps)
    opt = equidistribute(problem, m)
    gain = gain_report(problem, m)
    d = {
        "problem": problem.name, "m": m, "eps": args.eps,
        "k_star": opt.k_star, "s_factor": opt.s_factor,
        "c_lo": opt.c_lo, "c_hi": opt.c_hi,
        "residual": equidistribution_residual(opt, problem.r),
        "equidistant_level": gain.equidistant_level, "gain_ratio": gain.gain_ratio,
        "x_star": opt.x_star, "c_bar": opt.c_bar,
    }
    _write((json.dumps(_jsonable(d), indent=1) + "\n").encode(), args.out)
    return 0


def cmd_constants(args):
    orders = args.r or list(range(1, R_MAX + 1))
    lines = ["r,exact,float,case"]
    for r in orders:
        c = newton_cotes_constant(r)
        lines.append(f"{r},{c.value_exact},{c.value_float!r},{c.parity_case}")
    _write(("\n".join(lines) + "\n").encode(), args.out)
    return 0


def build_parser():
    parser = _Parser(prog="admesh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="one ADMESH run, JSON report")
    p.add_argument("--problem", default="paper-sec7:delta=0.1",
                   help="name:key=val,... e.g. paper-sec7:delta=1e-4")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.25)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="adaptive vs equidistant grid over (eps, delta)")
    p.add_argument("--problem", default="paper-sec7", help="problem family name")
    p.add_argument("--eps-list", type=_float_list, default=[1e-2, 1e-4, 1e-8])
    p.add_argument("--delta-list", type=_float_list, default=[1e-1, 1e-4, 1e-8])
    p.add_argument("--alpha", type=float, default=0.25)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--format", choices=("csv", "json", "pretty"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("optimal-mesh", help="equidistributed mesh, k*, S(m) and gain")
    p.add_argument("--problem", default="paper-sec7:delta=0.1")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--eps", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimal_mesh)

    p = sub.add_parser("constants", help="Newton-Cotes remainder constants C_r")
    p.add_argument("--r", type=int, action="append", help="order (repeatable); default 1..12")
    p.add_argument("--out")
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"admesh: error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except AdmeshError as exc:
        print(f"admesh: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
