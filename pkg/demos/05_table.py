"""The adaptive-versus-equidistant table over (eps, delta).

The equidistant run gets twice as many subintervals as the adaptive one,
since it spends half as many evaluations of g per step.
"""
import sys

from admesh import emit, run_table

rows = run_table("paper-sec7", eps_list=(1e-2, 1e-4, 1e-8), delta_list=(1e-1, 1e-4, 1e-8))
sys.stdout.write(emit(rows, "pretty").decode())
