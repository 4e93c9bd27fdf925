"""Constructive adaptive mesh selection (ADMESH).

Each step looks ahead from the current state ``y_hat`` only:

1. a divided difference of g over [y_hat, y_hat + eps^(1/(r+1))] estimates
   the local error coefficient ``c_hat``;
2. the step size follows from ``c_hat * h^(r+1) = 2^(r+1) eps / (|C_r| (1-alpha))``;
3. g is interpolated once on [y_hat, y_hat + 2 f(y_hat) h] and the new
   state is located by a fixed number of bisection steps on the exact
   antiderivative of that interpolant.

Only g(y_hat) is shared between the two node sets, so a step costs at most
2r evaluations of g.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

from .exceptions import BadParam, NoSignChange, StepLimitExceeded
from .nc_constants import newton_cotes_constant
from .poly_interp import EvalCache, antiderivative_between, build_interpolant, divided_difference
from .problems import Problem

C_HAT_FLOOR = 1e-300


@dataclass(frozen=True)
class AdmeshConfig:
    eps: float
    alpha: float = 0.25
    r: int = 2
    max_steps: int = 10 ** 7

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise BadParam(f"eps must lie in (0, 1), got {self.eps!r}")
        if not 0 < self.alpha < 0.5:
            raise BadParam(f"alpha must lie in (0, 1/2), got {self.alpha!r}")
        if self.r < 1:
            raise BadParam(f"r must be >= 1, got {self.r!r}")


@dataclass(frozen=True)
class StepRecord:
    i: int
    x_hat: float
    y_hat: float
    c_hat: Optional[float]
    h: float
    l_bisect: int
    g_evals_new: int
    clamped: bool = False
    bracket_ok: bool = True


@dataclass
class SolveReport:
    steps: list
    mesh: list
    theorem_bound: Optional[float] = None
    total_g_evals: int = 0
    max_local_error: Optional[float] = None
    max_global_error: Optional[float] = None
    method: str = "admesh"
    meta: dict = field(default_factory=dict)

    @property
    def m_hat(self) -> int:
        return len(self.mesh) - 1

    @property
    def x(self):
        return [p[0] for p in self.mesh]

    @property
    def y(self):
        return [p[1] for p in self.mesh]


def c_hat(problem: Problem, y_hat, eps, r=None):
    """Local coefficient ``2^(r+1) |g[z_0..z_r]| / g(y_hat)^(r+2)``.

    Returns the coefficient and the evaluated ``(node, g(node))`` pairs.
    """
    r = problem.r if r is None else r
    span = eps ** (1.0 / (r + 1))
    cache = EvalCache()
    poly, _ = build_interpolant(problem.eval_g, y_hat, y_hat + span, r + 1, cache)
    dd = divided_difference(poly.values, poly.nodes)
    g0 = poly.values[0]
    return 2.0 ** (r + 1) * abs(dd) / g0 ** (r + 2), list(cache)


def step_size(c, eps, alpha, c_r_abs, r):
    return 2.0 * (eps / (c_r_abs * c * (1.0 - alpha))) ** (1.0 / (r + 1))


def next_mesh_point(x_hat, c, eps, alpha, c_r, b, r=2):
    """Next mesh point from the step law, clamped to ``b``.

    Returns ``(x_next, clamped)``.  A vanishing coefficient means the
    method is locally exact, so the step goes straight to ``b``.
    """
    if c < 0:
        raise ValueError("c_hat must be nonnegative")
    if c <= C_HAT_FLOOR:
        return b, True
    x_next = x_hat + step_size(c, eps, alpha, abs(c_r), r)
    if x_next >= b:
        return b, True
    return x_next, False


def bisection_depth(f_at_y, h, eps) -> int:
    """Minimal ``l >= 1`` with ``f_at_y * h / 2^(l-1) <= eps/2``."""
    width = f_at_y * h
    l = 1
    while width > eps / 2:
        width /= 2
        l += 1
    return l


def bisec(interpolant, y_lo, y_hi, target, l):
    """``l`` bisection steps on ``int_{y_lo}^y p - target`` over [y_lo, y_hi].

    Returns ``(y, bracket_ok)``.  No evaluation of g takes place: only the
    frozen interpolant is integrated.  When the right endpoint does not
    bracket the root, ``y_hi`` is returned and ``bracket_ok`` is False.
    """
    if l < 1:
        raise ValueError("need at least one bisection step")
    if antiderivative_between(interpolant, y_lo, y_hi) - target < 0:
        warnings.warn(f"no sign change on [{y_lo!r}, {y_hi!r}]", NoSignChange, stacklevel=2)
        return y_hi, False
    lo, hi = y_lo, y_hi
    for _ in range(l):
        mid = 0.5 * (lo + hi)
        if antiderivative_between(interpolant, y_lo, mid) - target < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), True


def theorem_bound(eps, alpha, r, c_r):
    """Guaranteed maximal local error ``((1+a)/(1-a) 2^(r+1)/|C_r| + 1/2) eps``."""
    return ((1 + alpha) / (1 - alpha) * 2.0 ** (r + 1) / abs(c_r) + 0.5) * eps


def admesh_step(problem: Problem, i, x_hat, y_hat, config: AdmeshConfig, c_r):
    """One ADMESH step from (x_hat, y_hat); returns ``(record, x_next, y_next)``."""
    r, eps = config.r, config.eps
    c, pairs = c_hat(problem, y_hat, eps, r)
    x_next, clamped = next_mesh_point(x_hat, c, eps, config.alpha, c_r, problem.b, r)
    h = x_next - x_hat
    if not h > 0:
        raise StepLimitExceeded(f"step size underflows at x={x_hat!r}")
    f0 = 1.0 / pairs[0][1]
    y_bar = y_hat + 2.0 * f0 * h

    # only g(y_hat) carries over from the divided-difference nodes
    cache = EvalCache(pairs[:1])
    poly, fresh = build_interpolant(problem.eval_g, y_hat, y_bar, r, cache)
    l = bisection_depth(f0, h, eps)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoSignChange)
        y_next, ok = bisec(poly, y_hat, y_bar, h, l)
    rec = StepRecord(i=i, x_hat=x_hat, y_hat=y_hat, c_hat=c, h=h, l_bisect=l,
                     g_evals_new=len(pairs) + len(fresh), clamped=clamped, bracket_ok=ok)
    return rec, x_next, y_next


def admesh_solve(problem: Problem, config: AdmeshConfig) -> SolveReport:
    """Run ADMESH on ``problem`` from ``a`` to ``b``."""
    if config.r != problem.r:
        raise BadParam(f"config.r={config.r} does not match problem.r={problem.r}")
    c_r = newton_cotes_constant(config.r).value_float
    x, y = float(problem.a), float(problem.eta)
    mesh, steps = [(x, y)], []
    while x < problem.b:
        if len(steps) >= config.max_steps:
            raise StepLimitExceeded(f"reached {config.max_steps} steps at x={x!r}")
        rec, x, y = admesh_step(problem, len(steps), x, y, config, c_r)
        steps.append(rec)
        mesh.append((x, y))
    if not all(s.bracket_ok for s in steps):
        warnings.warn("BISEC lacked a sign change on some steps", NoSignChange, stacklevel=2)
    return SolveReport(
        steps=steps,
        mesh=mesh,
        theorem_bound=theorem_bound(config.eps, config.alpha, config.r, c_r),
        total_g_evals=sum(s.g_evals_new for s in steps),
        meta={"eps": config.eps, "alpha": config.alpha, "r": config.r, "problem": problem.name},
    )
