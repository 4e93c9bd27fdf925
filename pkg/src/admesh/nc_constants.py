"""Newton-Cotes remainder constants C_r in exact rational arithmetic.

The constant scales the quadrature remainder of the one-step method:
for even ``r >= 4`` it is the integral over [0, 1] of the node polynomial
with the first node doubled, for odd ``r`` it is the integral of the node
polynomial over the last node gap [1 - 1/r, 1].
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exceptions import UnsupportedOrder

R_MAX = 12

EVEN_MIDPOINT = "even_midpoint"
EVEN_GENERAL = "even_general"
ODD_GENERAL = "odd_general"
EULER = "euler"


@dataclass(frozen=True)
class NcConstant:
    r: int
    value_exact: Fraction
    value_float: float
    parity_case: str

    def __abs__(self):
        return abs(self.value_float)


def _poly_mul_linear(coeffs, root):
    # coeffs[k] multiplies x**k; returns coeffs of p(x) * (x - root)
    out = [Fraction(0)] * (len(coeffs) + 1)
    for k, c in enumerate(coeffs):
        out[k + 1] += c
        out[k] -= root * c
    return out


def node_polynomial(roots):
    """Monomial coefficients (ascending) of prod (x - root)."""
    coeffs = [Fraction(1)]
    for root in roots:
        coeffs = _poly_mul_linear(coeffs, Fraction(root))
    return coeffs


def integrate_exact(coeffs, lo, hi):
    lo, hi = Fraction(lo), Fraction(hi)
    return sum(c * (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)
               for k, c in enumerate(coeffs))


def node_layout(r: int):
    """Return ``(roots, lo, hi)`` whose node-polynomial integral is C_r.

    Not defined for r = 2, which uses the midpoint constant 1/12.
    """
    if r % 2 == 0:
        if r == 2:
            raise UnsupportedOrder("r = 2 has no node layout (midpoint rule)")
        nodes = [Fraction(j, r - 2) for j in range(r - 1)]
        return [nodes[0]] + nodes, Fraction(0), Fraction(1)
    nodes = [Fraction(j, r) for j in range(r)]
    return nodes, 1 - Fraction(1, r), Fraction(1)


@lru_cache(maxsize=None)
def newton_cotes_constant(r: int) -> NcConstant:
    """Exact remainder constant C_r for ``1 <= r <= 12``.

    >>> newton_cotes_constant(4).value_exact
    Fraction(-1, 120)
    """
    if isinstance(r, bool) or not isinstance(r, int) or not 1 <= r <= R_MAX:
        raise UnsupportedOrder(f"order r must be an integer in [1, {R_MAX}], got {r!r}")
    if r == 2:
        value, case = Fraction(1, 12), EVEN_MIDPOINT
    else:
        roots, lo, hi = node_layout(r)
        value = integrate_exact(node_polynomial(roots), lo, hi)
        case = EULER if r == 1 else (EVEN_GENERAL if r % 2 == 0 else ODD_GENERAL)
    # Fraction.__float__ rounds correctly
    return NcConstant(r, value, float(value), case)
