"""One adaptive run on the square-root-singular test problem.

z' = (3/4)(z - 1)^(-3/2), z(0) = 1 + delta, on [0, 1].  Near z = 1 the
right-hand side blows up, so the adaptive mesh bunches up at the left end.
"""
from admesh import AdmeshConfig, admesh_solve, measure_errors, registry
from admesh.bench import local_errors

problem = registry("paper-sec7", delta=1e-4)
report = measure_errors(problem, admesh_solve(problem, AdmeshConfig(eps=1e-4, alpha=0.25)))

print(f"subintervals: {report.m_hat}")
print(f"g evaluations: {report.total_g_evals} (ceiling {4 * report.m_hat})")
print(f"max local error {report.max_local_error:.3e} vs guaranteed {report.theorem_bound:.3e}")
print(f"max global error {report.max_global_error:.3e}")
print()
print(f"{'i':>3} {'x':>10} {'h':>10} {'c_hat':>10} {'l':>3} {'local err':>10}")
for s, err in zip(report.steps, local_errors(problem, report)):
    print(f"{s.i:>3} {s.x_hat:>10.3e} {s.h:>10.3e} {s.c_hat:>10.3e} {s.l_bisect:>3} {err:>10.3e}")
