"""Scalar autonomous IVPs z' = 1/g(z) and their local solutions.

Every problem is described by ``g`` rather than ``f = 1/g`` because the
local solution through (x, y) satisfies

    t - x = integral_y^{z(t)} g(s) ds,

which gives both a cheap analytic oracle (when the antiderivative of g
inverts in closed form) and a generic quadrature fallback.

Membership in the problem class (g and g^(r) of constant sign) cannot be
checked for a black-box evaluator; the caller vouches for it, and g > 0 is
asserted at every abscissa the solvers touch.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize

from .exceptions import BadParam, NoBracket, NonpositiveG, UnknownProblem

MAX_DOUBLINGS = 1000


@dataclass(frozen=True)
class Problem:
    a: float
    b: float
    eta: float
    r: int
    g: Callable
    g_deriv_r: Optional[Callable] = None
    local_solution: Optional[Callable] = None
    name: str = ""
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise BadParam(f"need a < b, got [{self.a}, {self.b}]")
        if self.r < 1:
            raise BadParam(f"need r >= 1, got {self.r}")

    def eval_g(self, y) -> float:
        """g(y) as a float, raising NonpositiveG unless it is positive."""
        v = float(self.g(y))
        if not v > 0.0 or not math.isfinite(v):
            raise NonpositiveG(y, v)
        return v

    def f(self, y) -> float:
        return 1.0 / self.eval_g(y)

    @property
    def oracle(self) -> str:
        return "analytic" if self.local_solution is not None else "quadrature"


@dataclass(frozen=True)
class LocalErrorProbe:
    x_i: float
    x_next: float
    y_i: float
    y_next: float
    true_z: float
    abs_error: float


def quadrature_local_solution(problem: Problem, x, y, t):
    """Solve integral_y^w g = t - x for w by bracketing and Brent's method."""
    span = float(t) - float(x)
    if span < 0:
        raise ValueError("local solution is only defined forward in time (t >= x)")
    if span == 0:
        return float(y)
    tol = 1e-14 * max(1.0, abs(span))

    def G(w):
        # the tolerance sits at roundoff level, so quad's roundoff notice is expected
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(problem.eval_g, y, w, epsabs=tol, epsrel=1e-14, limit=200)
        return val - span

    step = span * problem.f(y)
    hi = y + step
    for _ in range(MAX_DOUBLINGS):
        if G(hi) >= 0:
            break
        step *= 2.0
        hi = y + step
    else:
        raise NoBracket(f"no bracket for local solution from y={y!r}, t-x={span!r}")
    return optimize.brentq(G, y, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps)


def local_solution(problem: Problem, x, y, t):
    """z(t) for the solution through (x, y); analytic when available."""
    if t < x:
        raise ValueError("local solution is only defined forward in time (t >= x)")
    if problem.local_solution is not None:
        return problem.local_solution(x, y, t)
    return quadrature_local_solution(problem, x, y, t)


def reference_solution(problem: Problem, t):
    return local_solution(problem, problem.a, problem.eta, t)


def probe_local_error(problem: Problem, x_i, y_i, x_next, y_next) -> LocalErrorProbe:
    z = local_solution(problem, x_i, y_i, x_next)
    return LocalErrorProbe(x_i, x_next, y_i, y_next, z, abs(y_next - z))


# -- registry ---------------------------------------------------------------

def _falling(p, r):
    out = 1.0
    for j in range(r):
        out *= p - j
    return out


def _paper_sec7(delta, r=2, a=0.0, b=1.0):
    if not delta > 0:
        raise BadParam(f"delta must be > 0, got {delta!r}")
    # g(y) = 4/3 (y-1)^{3/2}, signed so that y <= 1 is rejected as g <= 0
    coef = (4.0 / 3.0) * _falling(1.5, r)

    def g(y):
        d = np.asarray(y, dtype=float) - 1.0
        return (4.0 / 3.0) * np.sign(d) * np.abs(d) ** 1.5

    def g_deriv_r(y):
        d = np.asarray(y, dtype=float) - 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            return coef * d ** (1.5 - r)

    def exact(x, y, t):
        # delta^{5/2} underflows harmlessly for tiny delta
        base = 1.875 * (t - x) + (y - 1.0) ** 2.5
        return base ** 0.4 + 1.0

    return dict(a=a, b=b, eta=1.0 + delta, r=r, g=g, g_deriv_r=g_deriv_r,
                local_solution=exact)


def _linear_g(eta=1.0, r=2, a=0.0, b=1.0):
    if not eta > 0:
        raise BadParam(f"eta must be > 0, got {eta!r}")

    def g(y):
        return np.asarray(y, dtype=float) + 0.0

    def g_deriv_r(y):
        return np.full_like(np.asarray(y, dtype=float), 1.0 if r == 1 else 0.0)

    def exact(x, y, t):
        return math.sqrt(y * y + 2.0 * (t - x))

    return dict(a=a, b=b, eta=eta, r=r, g=g, g_deriv_r=g_deriv_r, local_solution=exact)


def _const_f(c=1.0, eta=1.0, r=2, a=0.0, b=1.0):
    if not c > 0:
        raise BadParam(f"c must be > 0, got {c!r}")

    def g(y):
        return np.full_like(np.asarray(y, dtype=float), c)

    def g_deriv_r(y):
        return np.zeros_like(np.asarray(y, dtype=float))

    def exact(x, y, t):
        return y + (t - x) / c

    return dict(a=a, b=b, eta=eta, r=r, g=g, g_deriv_r=g_deriv_r, local_solution=exact)


def _exp_g(beta=1.0, eta=0.0, r=2, a=0.0, b=1.0):
    if beta == 0:
        raise BadParam("beta must be nonzero (use const-f for g = 1)")

    def g(y):
        return np.exp(beta * np.asarray(y, dtype=float))

    def g_deriv_r(y):
        return beta ** r * np.exp(beta * np.asarray(y, dtype=float))

    def exact(x, y, t):
        arg = math.exp(beta * y) + beta * (t - x)
        if arg <= 0:
            raise NoBracket("solution of exp-g leaves the real line before t")
        return math.log(arg) / beta

    return dict(a=a, b=b, eta=eta, r=r, g=g, g_deriv_r=g_deriv_r, local_solution=exact)


_FACTORIES = {
    "paper-sec7": _paper_sec7,
    "linear-g": _linear_g,
    "const-f": _const_f,
    "exp-g": _exp_g,
}

_INT_PARAMS = {"r"}


def problem_names():
    return sorted(_FACTORIES)


def registry(name: str, params: Optional[dict] = None, **kwargs) -> Problem:
    """Build a named test problem.

    ``paper-sec7`` needs ``delta``; the others default their parameters
    (``linear-g``: eta; ``const-f``: c, eta; ``exp-g``: beta, eta).  Every
    entry also takes ``r``, ``a`` and ``b``.
    """
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise UnknownProblem(f"unknown problem {name!r}; known: {problem_names()}") from None
    params = {**(params or {}), **kwargs}
    clean = {}
    for key, val in params.items():
        if key in _INT_PARAMS:
            if float(val) != int(float(val)):
                raise BadParam(f"{key} must be an integer, got {val!r}")
            clean[key] = int(float(val))
        else:
            clean[key] = float(val)
    if name == "paper-sec7" and "delta" not in clean:
        raise BadParam("paper-sec7 requires delta")
    try:
        fields = factory(**clean)
    except TypeError as exc:
        raise BadParam(f"bad parameters for {name!r}: {exc}") from None
    return Problem(name=name, params=clean, **fields)


def parse_problem(text: str) -> Problem:
    """Parse the CLI form ``name:key=val,key=val``."""
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise BadParam(f"expected key=val, got {item!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise BadParam(f"non-numeric value in {item!r}") from None
    return registry(name.strip(), params)
