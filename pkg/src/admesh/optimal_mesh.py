"""Equidistributed ("optimal") meshes and the level k_m*.

The local error of the method on [x_i, x_{i+1}] behaves like
``cbar_i * h_i^(r+1)`` with

    cbar_i = sup_{y in [z(x_i), z(x_{i+1})]} b_g(y),
    b_g(y) = |g^(r)(y)| / g(y)^(r+2) * |C_r| / r!,

along the reference solution z.  The minimax mesh makes ``cbar_i h_i^(r+1)``
constant; that common level is k_m*.  These quantities need g^(r) and the
true solution, so they are diagnostics, not something a solver can use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .exceptions import LevelBracketFail, MissingDerivative, NonpositiveG
from .nc_constants import newton_cotes_constant
from .problems import Problem, reference_solution

SCAN_POINTS = 512
BOUND_GRID = 4096
K_MIN, K_MAX = 1e-300, 1e300


@dataclass(frozen=True)
class OptimalMesh:
    m: int
    x_star: np.ndarray
    k_star: float
    c_bar: np.ndarray
    s_factor: float
    c_lo: float
    c_hi: float

    def levels(self, r):
        return self.c_bar * np.diff(self.x_star) ** (r + 1)


def _as_array(fn, ys):
    ys = np.asarray(ys, dtype=float)
    out = np.asarray(fn(ys), dtype=float)
    if out.shape != ys.shape:
        out = np.array([float(fn(y)) for y in ys])
    return out


def b_g(problem: Problem, ys):
    """Local error density ``|g^(r)| / g^(r+2) * |C_r| / r!`` at ``ys``."""
    if problem.g_deriv_r is None:
        raise MissingDerivative(f"problem {problem.name!r} has no g_deriv_r")
    r = problem.r
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    gv = _as_array(problem.g, ys)
    bad = ~(gv > 0) | ~np.isfinite(gv)
    if bad.any():
        k = int(np.argmax(bad))
        raise NonpositiveG(float(ys[k]), float(gv[k]))
    scale = abs(newton_cotes_constant(r).value_float) / math.factorial(r)
    return np.abs(_as_array(problem.g_deriv_r, ys)) / gv ** (r + 2) * scale


# the refined grid contains every point of the SCAN_POINTS grid, so its max
# is the max over both
_UNIT = np.linspace(0.0, 1.0, 2 * SCAN_POINTS + 1)


def _sup_b_g(problem, y_lo, y_hi):
    if y_hi <= y_lo:
        return float(b_g(problem, [y_lo])[0])
    ys = y_lo + (y_hi - y_lo) * _UNIT
    ys[-1] = y_hi
    return float(b_g(problem, ys).max())


def c_bar(problem: Problem, x_lo, x_hi):
    """Supremum of b_g over the solution range [z(x_lo), z(x_hi)]."""
    if problem.g_deriv_r is None:
        raise MissingDerivative(f"problem {problem.name!r} has no g_deriv_r")
    if x_hi < x_lo:
        raise ValueError("need x_lo <= x_hi")
    z_lo = reference_solution(problem, x_lo)
    z_hi = z_lo if x_hi == x_lo else reference_solution(problem, x_hi)
    return _sup_b_g(problem, z_lo, z_hi)


def a_priori_bounds(problem: Problem):
    """``(c(f), C(f))``: min and max of b_g over [eta, z(b)]."""
    ys = np.linspace(problem.eta, reference_solution(problem, problem.b), BOUND_GRID)
    vals = b_g(problem, ys)
    return float(vals.min()), float(vals.max())


class _Marcher:
    """Marches ``cbar(x_i, x_{i+1}) h^(r+1) = k`` from a towards b."""

    def __init__(self, problem: Problem):
        self.problem = problem
        self.r1 = problem.r + 1
        self._z = {}

    def z(self, x):
        v = self._z.get(x)
        if v is None:
            v = self._z[x] = reference_solution(self.problem, x)
        return v

    def level(self, x0, x1):
        if x1 <= x0:
            return 0.0
        return _sup_b_g(self.problem, self.z(x0), self.z(x1)) * (x1 - x0) ** self.r1

    def advance(self, x0, k):
        """Next point, or ``(b, p)`` when the level at b does not exceed k."""
        b = self.problem.b
        p_b = self.level(x0, b)
        if p_b <= k:
            return b, p_b
        x1 = optimize.brentq(lambda x: self.level(x0, x) - k, x0, b,
                             xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        return x1, k

    def count(self, k, m_cap):
        """Fractional number of level-k intervals needed to reach b.

        Continuous and nonincreasing in k; capped at ``m_cap``.
        """
        x, pts = self.problem.a, [self.problem.a]
        for j in range(m_cap):
            x_next, p = self.advance(x, k)
            if x_next == self.problem.b:
                pts.append(x_next)
                return j + (p / k) ** (1.0 / self.r1), pts
            x = x_next
            pts.append(x)
        return float(m_cap), pts


def _solve_level(march, m, r1, s0):
    """log k at which the level-k march needs exactly m intervals."""
    s_min, s_max = math.log(K_MIN), math.log(K_MAX)

    def excess(s):
        return march.count(math.exp(s), m + 1)[0] - m

    lo = hi = None  # excess(lo) > 0 > excess(hi)
    s = s0
    for _ in range(60):
        e = excess(s)
        if abs(e) <= 64 * np.finfo(float).eps * m:
            return s
        if e > 0:
            lo = s
        else:
            hi = s
        if lo is not None and hi is not None and hi - lo < 1e-9:
            break
        if e + m <= 0:
            raise LevelBracketFail("local error density vanishes; no positive level")
        if e < 1:
            # k scales like n^-(r+1) for n intervals
            s_new = s + r1 * math.log((e + m) / m)
        else:
            s_new = s + r1 * math.log(2.0)
        if lo is not None and hi is not None and not lo < s_new < hi:
            s_new = 0.5 * (lo + hi)
        if s_new == s:
            return s
        if s_new < s_min or s_new > s_max:
            raise LevelBracketFail(f"no level in [{K_MIN}, {K_MAX}] gives {m} intervals")
        s = s_new
    if lo is None or hi is None:
        raise LevelBracketFail("level search did not bracket")
    return optimize.brentq(excess, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)


def equidistribute(problem: Problem, m: int) -> OptimalMesh:
    """Mesh of ``m`` intervals with ``cbar_i h_i^(r+1)`` equal to ``k_m*``.

    The level is found by a bracketed root search on ``log k`` over the
    continuous interval count of the level-k march.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if problem.g_deriv_r is None:
        raise MissingDerivative(f"problem {problem.name!r} has no g_deriv_r")
    r1 = problem.r + 1
    a, b = problem.a, problem.b
    march = _Marcher(problem)
    c_lo, c_hi = a_priori_bounds(problem)

    if m == 1:
        k = march.level(a, b)
        if not k > 0:
            raise LevelBracketFail("local error density vanishes; no positive level")
        x_star = np.array([a, b])
    else:
        s = _solve_level(march, m, r1, math.log(max(K_MIN, c_hi * ((b - a) / m) ** r1)))
        k = math.exp(s)
        _, pts = march.count(k, m + 1)
        pts = pts[:m] + [b]
        if len(pts) != m + 1:
            raise LevelBracketFail(f"level search ended with {len(pts) - 1} intervals")
        x_star = np.array(pts)

    cb = np.array([march.level(x0, x1) / (x1 - x0) ** r1
                   for x0, x1 in zip(x_star[:-1], x_star[1:])])
    s_factor = 1.0 / np.mean((1.0 / cb) ** (1.0 / r1)) ** r1
    return OptimalMesh(m=m, x_star=x_star, k_star=k, c_bar=cb, s_factor=float(s_factor),
                       c_lo=c_lo, c_hi=c_hi)


def equidistribution_residual(mesh: OptimalMesh, r: int) -> float:
    return float(np.max(np.abs(mesh.levels(r) - mesh.k_star)) / mesh.k_star)


def m_of_eps(problem: Problem, eps, rtol=1e-12, m_max=2 ** 22) -> int:
    """Minimal m with ``k_m* <= eps`` (doubling, then binary search).

    ``rtol`` absorbs floating-point noise in the level comparison.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")

    def ok(m):
        return equidistribute(problem, m).k_star <= eps * (1 + rtol)

    if ok(1):
        return 1
    hi = 2
    while not ok(hi):
        if hi >= m_max:
            raise LevelBracketFail(f"k_m* still above eps at m={hi}")
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class GainReport:
    m: int
    k_star: float
    equidistant_level: float
    gain_ratio: float


def gain_report(problem: Problem, m: int) -> GainReport:
    """Compare k_m* with the level of the equidistant mesh of m intervals."""
    opt = equidistribute(problem, m)
    a, b, r1 = problem.a, problem.b, problem.r + 1
    xs = [a + i * (b - a) / m for i in range(m)] + [b]
    h = (b - a) / m
    level = max(c_bar(problem, x0, x1) for x0, x1 in zip(xs[:-1], xs[1:])) * h ** r1
    return GainReport(m=m, k_star=opt.k_star, equidistant_level=level,
                      gain_ratio=level / opt.k_star)
