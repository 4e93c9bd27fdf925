import dataclasses
import math
import warnings

import pytest

from admesh.core import (AdmeshConfig, admesh_solve, bisec, bisection_depth, c_hat,
                         next_mesh_point, step_size, theorem_bound)
from admesh.exceptions import BadParam, NoSignChange, StepLimitExceeded
from admesh.nc_constants import newton_cotes_constant
from admesh.poly_interp import InterpPolynomial, build_interpolant
from admesh.problems import local_solution, registry

# 8 |g[z0,z1,z2]| / g(1.1)^4 for the float nodes of [1.1, 1.1 + 0.01^(1/3)],
# recomputed with mpmath at 40 digits
C_HAT_SEC7 = 2827772.2091747883400
# 2 * 0.16^(1/3)
H_STEP_LAW = 1.0857670466379626286


class CountingG:
    def __init__(self, g):
        self.g, self.calls = g, 0

    def __call__(self, y):
        self.calls += 1
        return self.g(y)


def counted(problem):
    counter = CountingG(problem.g)
    return dataclasses.replace(problem, g=counter), counter


def test_config_validation():
    for kw in ({"eps": 0.0}, {"eps": 1.0}, {"eps": 0.1, "alpha": 0.5}, {"eps": 0.1, "r": 0}):
        with pytest.raises(BadParam):
            AdmeshConfig(**kw)


def test_c_hat_constant_g():
    c, pairs = c_hat(registry("const-f", c=3.0), 1.0, 0.01)
    assert c == 0.0 and len(pairs) == 3


def test_c_hat_identity_r1():
    p = registry("linear-g", r=1)
    c, _ = c_hat(p, 2.0, 0.01)
    assert c == pytest.approx(4 / 2.0 ** 3, rel=1e-12)


def test_c_hat_sec7_extended_precision():
    c, pairs = c_hat(registry("paper-sec7", delta=0.1), 1.1, 0.01)
    assert c == pytest.approx(C_HAT_SEC7, rel=1e-12)
    assert pairs[0][0] == 1.1
    assert pairs[-1][0] == pytest.approx(1.1 + 0.01 ** (1 / 3))


def test_step_law_unit_step():
    eps, alpha, r = 0.01, 0.25, 2
    c_r = newton_cotes_constant(r).value_float
    c = 2 ** (r + 1) * eps / (abs(c_r) * (1 - alpha))
    x, clamped = next_mesh_point(0.0, c, eps, alpha, c_r, 10.0, r)
    assert x == pytest.approx(1.0, rel=1e-14) and not clamped


def test_step_law_value():
    x, clamped = next_mesh_point(0.0, 1.0, 0.01, 0.25, 1 / 12, 5.0, 2)
    assert x == pytest.approx(H_STEP_LAW, rel=1e-14)
    assert not clamped


def test_step_law_clamps():
    assert next_mesh_point(0.2, 0.0, 0.01, 0.25, 1 / 12, 1.0) == (1.0, True)
    assert next_mesh_point(0.2, 1e-301, 0.01, 0.25, 1 / 12, 1.0) == (1.0, True)
    assert next_mesh_point(0.2, 1.0, 0.01, 0.25, 1 / 12, 1.0) == (1.0, True)
    with pytest.raises(ValueError):
        next_mesh_point(0.0, -1.0, 0.01, 0.25, 1 / 12, 1.0)


@pytest.mark.parametrize("c", [1e-3, 1.0, 1e6])
def test_step_monotone_in_eps(c):
    eps = 0.1
    hs = []
    for _ in range(20):
        hs.append(step_size(c, eps, 0.25, 1 / 12, 2))
        eps /= 2
    assert all(b <= a for a, b in zip(hs, hs[1:]))


@pytest.mark.parametrize("f, h, eps, l", [(1.0, 1.0, 0.5, 3), (1.0, 0.01, 0.5, 1),
                                          (1.0, 1.0, 2.0, 1), (3.0, 0.5, 1e-3, 13)])
def test_bisection_depth(f, h, eps, l):
    assert bisection_depth(f, h, eps) == l
    assert f * h / 2 ** (l - 1) <= eps / 2
    if l > 1:
        assert f * h / 2 ** (l - 2) > eps / 2


def test_theorem_bound():
    assert theorem_bound(1.0, 0.25, 2, 1 / 12) == pytest.approx(160.5)
    assert theorem_bound(0.02, 1e-12, 1, 0.5) == pytest.approx(8.5 * 0.02)
    assert theorem_bound(0.0, 0.25, 2, 1 / 12) == 0.0


def test_bisec_midpoint_root():
    p = InterpPolynomial.from_values([0.0], [2.0])
    y, ok = bisec(p, 1.0, 3.0, 2.0 * 2.0 / 2, 40)
    assert ok and y == pytest.approx(2.0, abs=1e-10)


def test_bisec_zero_target():
    p = InterpPolynomial.from_values([0.0], [1.0])
    y, ok = bisec(p, 1.0, 2.0, 0.0, 30)
    assert ok and y - 1.0 < 1e-8


def test_bisec_no_sign_change_warns():
    p = InterpPolynomial.from_values([0.0], [1.0])
    with pytest.warns(NoSignChange):
        y, ok = bisec(p, 0.0, 1.0, 5.0, 10)
    assert (y, ok) == (1.0, False)


def test_bisec_needs_a_step():
    p = InterpPolynomial.from_values([0.0], [1.0])
    with pytest.raises(ValueError):
        bisec(p, 0.0, 1.0, 0.5, 0)


@pytest.mark.parametrize("y0, h, eps", [(1.0, 0.1, 1e-3), (2.0, 0.3, 1e-6), (0.5, 0.01, 1e-9)])
def test_bisec_linear_g_resolution(y0, h, eps):
    p = registry("linear-g", eta=y0)
    y_bar = y0 + 2 * h / y0
    poly, _ = build_interpolant(p.eval_g, y0, y_bar, 2)
    l = bisection_depth(1 / y0, h, eps)
    y, ok = bisec(poly, y0, y_bar, h, l)
    assert ok
    assert abs(y - math.sqrt(y0 * y0 + 2 * h)) <= h / y0 / 2 ** (l - 1)


def test_bisec_does_not_evaluate_g():
    counter = CountingG(lambda y: 1.0 + y * y)
    poly, _ = build_interpolant(counter, 0.0, 1.0, 3)
    before = counter.calls
    bisec(poly, 0.0, 1.0, 0.4, 50)
    assert counter.calls == before


@pytest.mark.parametrize("eps", [0.5, 1e-3, 1e-9])
def test_const_f_single_step(eps):
    p = registry("const-f", c=1.0)
    rep = admesh_solve(p, AdmeshConfig(eps=eps))
    assert rep.m_hat == 1 and rep.x == [0.0, 1.0]
    assert abs(rep.y[-1] - local_solution(p, 0.0, 1.0, 1.0)) <= eps / 2


@pytest.mark.parametrize("delta, eps", [(0.1, 1e-2), (1e-4, 1e-4), (1e-8, 1e-2)])
def test_counted_evaluations_match(delta, eps):
    p, counter = counted(registry("paper-sec7", delta=delta))
    rep = admesh_solve(p, AdmeshConfig(eps=eps))
    assert counter.calls == rep.total_g_evals
    assert rep.total_g_evals <= 4 * rep.m_hat
    assert all(s.g_evals_new <= 4 and s.h > 0 and s.l_bisect >= 1 for s in rep.steps)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_cost_ceiling_orders(r):
    p = registry("exp-g", beta=1.0, r=r)
    rep = admesh_solve(p, AdmeshConfig(eps=1e-5, r=r))
    assert rep.total_g_evals == sum(s.g_evals_new for s in rep.steps)
    assert rep.total_g_evals <= 2 * r * rep.m_hat


def test_mesh_and_states_increase():
    p = registry("paper-sec7", delta=1e-4)
    rep = admesh_solve(p, AdmeshConfig(eps=1e-4))
    assert rep.x[0] == 0.0 and rep.x[-1] == 1.0
    assert all(b > a for a, b in zip(rep.x, rep.x[1:]))
    assert all(b > a for a, b in zip(rep.y, rep.y[1:]))
    assert rep.steps[-1].clamped
    assert rep.m_hat == len(rep.mesh) - 1


def test_linear_g_error_within_bisection_resolution():
    p = registry("linear-g", eta=1.0)
    eps = 1e-6
    rep = admesh_solve(p, AdmeshConfig(eps=eps))
    for s, (x1, y1) in zip(rep.steps, rep.mesh[1:]):
        err = abs(y1 - local_solution(p, s.x_hat, s.y_hat, x1))
        assert err <= s.h / s.y_hat / 2 ** (s.l_bisect - 1) <= eps / 2


def test_r_mismatch_rejected():
    with pytest.raises(BadParam):
        admesh_solve(registry("const-f", r=1), AdmeshConfig(eps=0.1, r=2))


def test_step_cap():
    with pytest.raises(StepLimitExceeded):
        admesh_solve(registry("paper-sec7", delta=0.1), AdmeshConfig(eps=1e-8, max_steps=3))


def test_no_bracket_warnings_on_table_grid():
    with warnings.catch_warnings():
        warnings.simplefilter("error", NoSignChange)
        rep = admesh_solve(registry("paper-sec7", delta=1e-8), AdmeshConfig(eps=1e-2))
    assert all(s.bracket_ok for s in rep.steps)
