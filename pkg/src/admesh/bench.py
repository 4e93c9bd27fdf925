"""Adaptive-versus-equidistant experiment table.

For each (eps, delta) cell: run ADMESH, measure true local and global
errors against the problem's local solution, then run the equidistant
method on twice as many subintervals and compare.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

from .baseline import BaselineConfig, equidistant_solve
from .core import AdmeshConfig, SolveReport, admesh_solve
from .exceptions import AdmeshError, UnknownFormat
from .problems import Problem, local_solution, reference_solution, registry

CSV_FIELDS = (
    "eps", "delta", "r", "alpha", "iadapt", "maxerr", "bound", "maxerr_over_bound",
    "maxerrg", "equidist_maxerr", "equidist_maxerrg", "ratio_local", "ratio_global",
    "evals_adaptive", "evals_equidistant",
)
_INT_FIELDS = {"r", "iadapt", "evals_adaptive", "evals_equidistant"}
ERROR_MARK = "ERROR"


@dataclass
class ExperimentRow:
    eps: float
    delta: float
    r: int
    alpha: float
    iadapt: Optional[int] = None
    maxerr: Optional[float] = None
    bound: Optional[float] = None
    maxerr_over_bound: Optional[float] = None
    maxerrg: Optional[float] = None
    equidist_maxerr: Optional[float] = None
    equidist_maxerrg: Optional[float] = None
    ratio_local: Optional[float] = None
    ratio_global: Optional[float] = None
    evals_adaptive: Optional[int] = None
    evals_equidistant: Optional[int] = None
    error: Optional[str] = None
    oracle: str = "analytic"

    @property
    def ok(self) -> bool:
        return self.error is None


def local_errors(problem: Problem, report: SolveReport):
    """``|y_{i+1} - z_i(x_{i+1})|`` for every step of ``report``."""
    return [abs(y1 - local_solution(problem, x0, y0, x1))
            for (x0, y0), (x1, y1) in zip(report.mesh[:-1], report.mesh[1:])]


def global_errors(problem: Problem, report: SolveReport):
    return [abs(y - reference_solution(problem, x)) for x, y in report.mesh]


def measure_errors(problem: Problem, report: SolveReport) -> SolveReport:
    """Fill ``max_local_error`` and ``max_global_error`` in place."""
    report.max_local_error = max(local_errors(problem, report))
    report.max_global_error = max(global_errors(problem, report))
    report.meta["oracle"] = problem.oracle
    return report


def _ratio(num, den):
    if den == 0:
        return math.inf if num > 0 else math.nan
    return num / den


def run_cell(problem: Problem, eps, delta, alpha=0.25, scheme="frozen") -> ExperimentRow:
    r = problem.r
    row = ExperimentRow(eps=eps, delta=delta, r=r, alpha=alpha, oracle=problem.oracle)
    adaptive = measure_errors(problem, admesh_solve(problem, AdmeshConfig(eps=eps, alpha=alpha, r=r)))
    # equidistant gets twice the subintervals: it spends half the evaluations per step
    equi_cfg = BaselineConfig(m=2 * adaptive.m_hat, r=r, scheme=scheme,
                              eps=eps if scheme == "frozen" else None)
    equi = measure_errors(problem, equidistant_solve(problem, equi_cfg))
    row.iadapt = adaptive.m_hat
    row.maxerr = adaptive.max_local_error
    row.bound = adaptive.theorem_bound
    row.maxerr_over_bound = row.maxerr / row.bound
    row.maxerrg = adaptive.max_global_error
    row.equidist_maxerr = equi.max_local_error
    row.equidist_maxerrg = equi.max_global_error
    row.ratio_local = _ratio(row.equidist_maxerr, row.maxerr)
    row.ratio_global = _ratio(row.equidist_maxerrg, row.maxerrg)
    row.evals_adaptive = adaptive.total_g_evals
    row.evals_equidistant = equi.total_g_evals
    return row


def run_table(problem_family="paper-sec7", eps_list=(1e-2, 1e-4, 1e-8),
              delta_list=(1e-1, 1e-4, 1e-8), alpha=0.25, r=2, params=None,
              scheme="frozen"):
    """One row per (eps, delta), eps-major.

    ``delta`` is passed to the problem family only when it takes one
    (``paper-sec7``); other families ignore it.  A failing cell yields a
    row carrying the error message instead of aborting the table.
    """
    rows = []
    for eps in eps_list:
        for delta in delta_list:
            p = dict(params or {}, r=r)
            if problem_family == "paper-sec7":
                p["delta"] = delta
            try:
                problem = registry(problem_family, p)
                rows.append(run_cell(problem, eps, delta, alpha, scheme))
            except (AdmeshError, ArithmeticError, ValueError) as exc:
                rows.append(ExperimentRow(eps=eps, delta=delta, r=r, alpha=alpha,
                                          error=f"{type(exc).__name__}: {exc}"))
    return rows


# -- output -----------------------------------------------------------------

def _fmt(value):
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return "%.17g" % value


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def emit(rows, format="csv") -> bytes:
    """Serialize rows as ``csv``, ``json`` or a ``pretty`` text table."""
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for row in rows:
            vals = [getattr(row, k) for k in CSV_FIELDS]
            w.writerow([ERROR_MARK if (v is None and not row.ok) else _fmt(v) for v in vals])
        return buf.getvalue().encode()
    if format == "json":
        out = []
        for row in rows:
            obj = {k: _json_value(getattr(row, k)) for k in CSV_FIELDS}
            if not row.ok:
                obj["error"] = row.error
            out.append(obj)
        # repr of a float round-trips exactly (17 significant digits at most)
        return (json.dumps(out, indent=1) + "\n").encode()
    if format == "pretty":
        return _pretty(rows).encode()
    raise UnknownFormat(f"unknown format {format!r}; use csv, json or pretty")


def _pretty(rows):
    head = ("eps", "delta", "IADAPT", "MAXERR", "MAXERR/BOUND", "MAXERRG",
            "EQUIDIST/MAXERR", "EQUIDISTG/MAXERRG")
    lines = [" ".join(f"{h:>17}" for h in head)]
    for row in rows:
        if not row.ok:
            lines.append(f"{row.eps:>17.3g} {row.delta:>17.3g} {ERROR_MARK}: {row.error}")
            continue
        vals = (f"{row.eps:.3g}", f"{row.delta:.3g}", str(row.iadapt), f"{row.maxerr:.3g}",
                f"{row.maxerr_over_bound:.3g}", f"{row.maxerrg:.3g}",
                f"{row.ratio_local:.4g}", f"{row.ratio_global:.4g}")
        lines.append(" ".join(f"{v:>17}" for v in vals))
    return "\n".join(lines) + "\n"


def parse_csv(data) -> list:
    """Inverse of ``emit(rows, "csv")`` for successful rows."""
    text = data.decode() if isinstance(data, bytes) else data
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for rec in reader:
        kw = {}
        for name in CSV_FIELDS:
            raw = rec[name]
            if raw == ERROR_MARK:
                kw[name] = None
            elif name in _INT_FIELDS:
                kw[name] = int(raw)
            else:
                kw[name] = float(raw)
        rows.append(ExperimentRow(**kw))
    return rows


def report_dict(report: SolveReport) -> dict:
    d = asdict(report)
    d["m_hat"] = report.m_hat
    return d
