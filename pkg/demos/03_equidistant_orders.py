"""Convergence of the fixed-mesh method, and why delta matters.

With delta = 1 the observed orders are r (global) and r + 1 (local) from
m = 32 on.  With delta = 0.1 the first step still spans several multiples
of delta in state space until m is in the thousands, so the orders creep up
slowly.
"""
import math

from admesh import BaselineConfig, equidistant_solve, registry
from admesh.bench import global_errors, local_errors

for delta in (1.0, 0.1):
    for r in (1, 2):
        p = registry("paper-sec7", delta=delta, r=r)
        prev = None
        print(f"delta={delta:g} r={r}")
        for m in (32, 64, 128, 256, 512, 1024):
            rep = equidistant_solve(p, BaselineConfig(m=m, r=r))
            e = (max(global_errors(p, rep)), max(local_errors(p, rep)))
            if prev:
                og, ol = (math.log2(a / b) for a, b in zip(prev, e))
                print(f"  m={m:>5} global {e[0]:.3e} (order {og:.2f})  local {e[1]:.3e} (order {ol:.2f})")
            else:
                print(f"  m={m:>5} global {e[0]:.3e}               local {e[1]:.3e}")
            prev = e
