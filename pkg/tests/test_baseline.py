import math

import numpy as np
import pytest

from admesh.baseline import BaselineConfig, equidistant_solve, frozen_step, implicit_step
from admesh.bench import local_errors
from admesh.core import AdmeshConfig, admesh_solve
from admesh.exceptions import BadParam
from admesh.optimal_mesh import c_bar
from admesh.problems import registry


def test_config_validation():
    for kw in ({"m": 0}, {"m": 4, "root_tol": 0.0}, {"m": 4, "scheme": "explicit"}):
        with pytest.raises(BadParam):
            BaselineConfig(**kw)


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_constant_g_exact(r):
    p = registry("const-f", c=2.0, eta=0.5, r=r)
    assert implicit_step(p, 0.0, 0.5, 0.3) == pytest.approx(0.65, abs=1e-14)


@pytest.mark.parametrize("y0, h", [(1.0, 0.1), (2.0, 0.5), (0.3, 0.02)])
def test_linear_g_midpoint_exact(y0, h):
    p = registry("linear-g", eta=y0)
    assert implicit_step(p, 0.0, y0, h) == pytest.approx(math.sqrt(y0 * y0 + 2 * h), abs=2e-14)


def test_zero_step():
    p = registry("paper-sec7", delta=0.1)
    assert implicit_step(p, 0.0, 1.1, 0.0) == 1.1
    assert frozen_step(p, 0.0, 1.1, 0.0) == (1.1, 0)
    with pytest.raises(ValueError):
        implicit_step(p, 0.0, 1.1, -0.1)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_monotone_in_h(r):
    p = registry("paper-sec7", delta=0.1, r=r)
    ys = [implicit_step(p, 0.0, 1.1, h) for h in np.linspace(1e-3, 0.2, 25)]
    assert all(b > a for a, b in zip(ys, ys[1:]))


def test_const_f_march():
    p = registry("const-f", c=1.0, eta=1.0)
    rep = equidistant_solve(p, BaselineConfig(m=10))
    assert rep.m_hat == 10
    assert np.allclose(rep.y, [1.0 + i / 10 for i in range(11)], rtol=0, atol=1e-13)
    assert max(local_errors(p, rep)) <= 1e-13


def test_report_shape():
    p = registry("paper-sec7", delta=0.1)
    rep = equidistant_solve(p, BaselineConfig(m=8))
    assert rep.method == "equidistant" and rep.meta["scheme"] == "implicit"
    assert rep.x == pytest.approx(np.linspace(0, 1, 9))
    assert rep.total_g_evals == sum(s.g_evals_new for s in rep.steps) > 0


def test_frozen_scheme_cost():
    p = registry("paper-sec7", delta=0.1)
    rep = equidistant_solve(p, BaselineConfig(m=10, scheme="frozen", eps=1e-2))
    assert rep.total_g_evals == 2 * 10
    assert all(s.l_bisect >= 1 for s in rep.steps)


def test_frozen_against_admesh_first_row():
    # 2 * IADAPT equidistant points against ADMESH at eps = 0.01, delta = 0.1
    p = registry("paper-sec7", delta=0.1)
    ada = admesh_solve(p, AdmeshConfig(eps=1e-2))
    equi = equidistant_solve(p, BaselineConfig(m=2 * ada.m_hat, scheme="frozen", eps=1e-2))
    ratio = max(local_errors(p, equi)) / max(local_errors(p, ada))
    assert 7.39 / 3 <= ratio <= 7.39 * 3


def test_implicit_order_asymptotic_r2():
    # the global order settles near r only once h f(eta) is small
    p = registry("paper-sec7", delta=0.1)
    errs = []
    for m in (1024, 2048):
        rep = equidistant_solve(p, BaselineConfig(m=m))
        errs.append(max(abs(y - ((15 / 8) * x + 0.1 ** 2.5) ** 0.4 - 1) for x, y in rep.mesh))
    assert abs(math.log2(errs[0] / errs[1]) - 2) <= 0.3


def test_r_mismatch():
    with pytest.raises(BadParam):
        equidistant_solve(registry("const-f"), BaselineConfig(m=3, r=1))


@pytest.mark.parametrize("r, g_order, l_order", [(1, 1.0, 2.0), (2, 2.0, 3.0)])
def test_orders_away_from_singular_edge(r, g_order, l_order):
    # delta = 1 keeps h f(eta) well below the distance to y = 1 already at m = 32
    p = registry("paper-sec7", delta=1.0, r=r)
    glo, loc = [], []
    for m in (32, 64, 128, 256):
        rep = equidistant_solve(p, BaselineConfig(m=m, r=r))
        loc.append(max(local_errors(p, rep)))
        glo.append(max(abs(y - p.local_solution(0.0, p.eta, x)) for x, y in rep.mesh))
    slope = lambda e: -np.polyfit(np.log([32, 64, 128, 256]), np.log(e), 1)[0]
    assert abs(slope(glo) - g_order) <= 0.3
    assert abs(slope(loc) - l_order) <= 0.3


@pytest.mark.parametrize("m", [64, 128, 256])
def test_local_error_follows_a_priori_level(m):
    p = registry("paper-sec7", delta=1.0)
    rep = equidistant_solve(p, BaselineConfig(m=m))
    level = max(c_bar(p, x0, x1) for x0, x1 in zip(rep.x, rep.x[1:])) * (1 / m) ** 3
    assert 0.5 <= max(local_errors(p, rep)) / level <= 2.0
