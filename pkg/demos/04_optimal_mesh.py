"""Equidistributed meshes: the best any m-point mesh can do.

k_m* is the common local-error level when every subinterval carries the
same share; m(eps) is the fewest subintervals reaching eps.  The adaptive
method should land close to m(eps) without knowing g^(r) or the solution.
"""
from admesh import AdmeshConfig, admesh_solve, equidistribute, gain_report, m_of_eps, registry
from admesh.optimal_mesh import equidistribution_residual

for delta in (1e-1, 1e-4):
    p = registry("paper-sec7", delta=delta)
    print(f"delta={delta:g}")
    for m in (10, 20, 40):
        opt = equidistribute(p, m)
        gain = gain_report(p, m)
        print(f"  m={m:>3} k*={opt.k_star:.3e} S(m)={opt.s_factor:.3e} "
              f"residual={equidistribution_residual(opt, 2):.1e} gain over equidistant={gain.gain_ratio:.3g}")
    for eps in (1e-2, 1e-4):
        print(f"  eps={eps:g}: m(eps)={m_of_eps(p, eps)}, adaptive={admesh_solve(p, AdmeshConfig(eps=eps)).m_hat}")
