"""The one-step Newton-Cotes method on a fixed equidistant mesh.

Each step solves

    integral_{y_i}^{y} ghat_i(z; y) dz = h

for y, where ghat_i interpolates g on nodes that move with y:

* r = 1: the left endpoint y_i (explicit Euler in state space),
* r = 2: the midpoint (y_i + y)/2,
* even r >= 4: r-1 equidistant nodes spanning [y_i, y],
* odd r >= 3: the first r of r+1 equidistant points of [y_i, y].

The ``"frozen"`` scheme instead reuses the adaptive solver's state update on
the fixed mesh: g is interpolated once on r equidistant nodes of
[y_i, y_i + 2 f(y_i) h] and the antiderivative of that polynomial is
inverted by bisection.  It needs r evaluations of g per step (two for
r = 2), which is the equidistant comparator the published table uses.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .core import SolveReport, StepRecord, bisec, bisection_depth
from .exceptions import BadParam, NoBracket, NoSignChange
from .poly_interp import EvalCache, antiderivative_between, build_interpolant
from .problems import Problem

MAX_BRACKET_DOUBLINGS = 50
SCHEMES = ("implicit", "frozen")


@dataclass(frozen=True)
class BaselineConfig:
    m: int
    r: int = 2
    root_tol: Optional[float] = None
    scheme: str = "implicit"
    # bisection depth of the frozen scheme follows eps; None bisects to root_tol
    eps: Optional[float] = None

    def __post_init__(self):
        if self.m < 1:
            raise BadParam(f"m must be >= 1, got {self.m!r}")
        if self.scheme not in SCHEMES:
            raise BadParam(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.root_tol is not None and not self.root_tol > 0:
            raise BadParam(f"root_tol must be > 0, got {self.root_tol!r}")


def _quadrature(problem: Problem, y_i, y, r, cache):
    """Integral of the y-dependent interpolant over [y_i, y]."""
    if y == y_i:
        return 0.0
    if r == 1:
        lo, hi, n = y_i, y_i, 1
    elif r == 2:
        lo, hi, n = 0.5 * (y_i + y), None, 1
    elif r % 2 == 0:
        lo, hi, n = y_i, y, r - 1
    else:
        lo, hi, n = y_i, y_i + (y - y_i) * (r - 1) / r, r
    poly, _ = build_interpolant(problem.eval_g, lo, hi, n, cache)
    return antiderivative_between(poly, y_i, y)


def implicit_step(problem: Problem, x_i, y_i, h, r=None, root_tol=None, cache=None):
    """Advance the state by one step of size ``h`` (bisection on the bracket
    [y_i, y_i + 2 f(y_i) h], widened by doubling if needed)."""
    r = problem.r if r is None else r
    if h == 0:
        return float(y_i)
    if h < 0:
        raise ValueError("step size must be nonnegative")
    tol = 1e-14 * max(1.0, abs(problem.eta)) if root_tol is None else root_tol
    cache = EvalCache() if cache is None else cache

    def phi(y):
        return _quadrature(problem, y_i, y, r, cache) - h

    g0 = cache.get(y_i)
    if g0 is None:
        g0 = problem.eval_g(y_i)
        cache.put(y_i, g0)
    width = 2.0 * h / g0
    for _ in range(MAX_BRACKET_DOUBLINGS + 1):
        if phi(y_i + width) >= 0:
            break
        width *= 2.0
    else:
        raise NoBracket(f"no bracket for the implicit step from y={y_i!r}, h={h!r}")
    lo, hi = float(y_i), y_i + width
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if phi(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def frozen_step(problem: Problem, x_i, y_i, h, r=None, eps=None, root_tol=None, cache=None):
    """Advance by ``h`` with the interpolant frozen on [y_i, y_i + 2 f(y_i) h].

    Returns ``(y_next, l)`` with ``l`` the number of bisection steps.
    """
    r = problem.r if r is None else r
    if h == 0:
        return float(y_i), 0
    cache = EvalCache() if cache is None else cache
    g0 = cache.get(y_i)
    if g0 is None:
        g0 = problem.eval_g(y_i)
        cache.put(y_i, g0)
    y_bar = y_i + 2.0 * h / g0
    poly, _ = build_interpolant(problem.eval_g, y_i, y_bar, r, cache)
    if eps is None:
        tol = 1e-14 * max(1.0, abs(problem.eta)) if root_tol is None else root_tol
        l = max(1, math.ceil(math.log2((y_bar - y_i) / tol)))
    else:
        l = bisection_depth(1.0 / g0, h, eps)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoSignChange)
        y_next, _ = bisec(poly, y_i, y_bar, h, l)
    return y_next, l


def equidistant_solve(problem: Problem, config: BaselineConfig) -> SolveReport:
    """March ``config.scheme`` over ``x_i = a + i (b - a) / m``."""
    if config.r != problem.r:
        raise BadParam(f"config.r={config.r} does not match problem.r={problem.r}")
    a, b, m = problem.a, problem.b, config.m
    xs = [a + i * (b - a) / m for i in range(m)] + [b]
    y = float(problem.eta)
    mesh, steps = [(xs[0], y)], []
    for i in range(m):
        h = xs[i + 1] - xs[i]
        cache = EvalCache()
        if config.scheme == "frozen":
            y_next, l = frozen_step(problem, xs[i], y, h, config.r, config.eps,
                                    config.root_tol, cache)
        else:
            y_next = implicit_step(problem, xs[i], y, h, config.r, config.root_tol, cache)
            l = 0
        steps.append(StepRecord(i=i, x_hat=xs[i], y_hat=y, c_hat=None, h=h, l_bisect=l,
                                g_evals_new=len(cache)))
        y = y_next
        mesh.append((xs[i + 1], y))
    return SolveReport(
        steps=steps,
        mesh=mesh,
        total_g_evals=sum(s.g_evals_new for s in steps),
        method="equidistant",
        meta={"m": m, "r": config.r, "scheme": config.scheme, "problem": problem.name},
    )
