"""Newton-Cotes remainder constants C_r, exact and in floating point.

The even orders from 4 on are negative; the odd orders and C_2 are positive.
"""
from admesh import newton_cotes_constant

print(f"{'r':>3} {'exact':>24} {'float':>24}  case")
for r in range(1, 13):
    c = newton_cotes_constant(r)
    print(f"{r:>3} {str(c.value_exact):>24} {c.value_float:>24.17g}  {c.parity_case}")
