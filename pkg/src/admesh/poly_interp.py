"""Newton-form interpolation on equidistant nodes.

One representation serves both consumers: the top divided difference drives
the adaptive step, and the closed-form antiderivative drives the inner
bisection.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateNodes

NODE_ATOL = 1e-300
CACHE_RTOL = 1e-15


def divided_difference_table(values, nodes):
    """Top row of the divided-difference table: [g[z0], g[z0,z1], ...]."""
    z = [float(v) for v in nodes]
    d = [float(v) for v in values]
    if len(z) != len(d) or not z:
        raise ValueError("values and nodes must be non-empty and of equal length")
    n = len(z)
    for i in range(1, n):
        if abs(z[i] - z[i - 1]) <= NODE_ATOL:
            raise DegenerateNodes(f"nodes {i - 1} and {i} coincide: {z[i]!r}")
        if z[i] < z[i - 1]:
            raise ValueError("nodes must be strictly increasing")
    top = [d[0]]
    for k in range(1, n):
        d = [(d[i + 1] - d[i]) / (z[i + k] - z[i]) for i in range(n - k)]
        top.append(d[0])
    return top


def divided_difference(values, nodes) -> float:
    """Highest-order divided difference g[z_0, ..., z_k] (no reordering)."""
    return divided_difference_table(values, nodes)[-1]


class EvalCache:
    """Previously evaluated (abscissa, value) pairs.

    Lookups match an abscissa within relative ``CACHE_RTOL``.
    """

    def __init__(self, pairs=()):
        self._pairs = []
        for y, v in pairs:
            self.put(y, v)

    def __len__(self):
        return len(self._pairs)

    def __iter__(self):
        return iter(self._pairs)

    def get(self, y):
        for yc, vc in self._pairs:
            if yc == y or abs(yc - y) <= CACHE_RTOL * max(abs(yc), abs(y)):
                return vc
        return None

    def put(self, y, value):
        if self.get(y) is None:
            self._pairs.append((float(y), float(value)))


@dataclass(frozen=True)
class InterpPolynomial:
    """Newton-form interpolant ``sum_k coeffs[k] * prod_{j<k} (y - nodes[j])``."""

    nodes: tuple
    coeffs: tuple
    values: tuple
    _mono: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # monomial coefficients in s = y - nodes[0], ascending powers
        z0 = self.nodes[0]
        shifted = [z - z0 for z in self.nodes]
        mono = np.zeros(len(self.coeffs))
        basis = np.array([1.0])
        for k, c in enumerate(self.coeffs):
            mono[: len(basis)] += c * basis
            if k < len(shifted) - 1:
                basis = np.convolve(basis, [-shifted[k], 1.0])
        object.__setattr__(self, "_mono", mono)

    @classmethod
    def from_values(cls, nodes, values):
        coeffs = divided_difference_table(values, nodes)
        return cls(tuple(float(z) for z in nodes), tuple(coeffs),
                   tuple(float(v) for v in values))

    @property
    def degree(self) -> int:
        return len(self.nodes) - 1

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        out = np.full_like(y, self.coeffs[-1])
        for k in range(len(self.coeffs) - 2, -1, -1):
            out = self.coeffs[k] + (y - self.nodes[k]) * out
        return out if out.ndim else float(out)

    def primitive(self, y):
        """Antiderivative vanishing at ``nodes[0]``."""
        s = np.asarray(y, dtype=float) - self.nodes[0]
        out = np.zeros_like(s)
        for k in range(len(self._mono) - 1, -1, -1):
            out = (out + self._mono[k] / (k + 1)) * s
        return out if out.ndim else float(out)


def build_interpolant(g, lo, hi, n_nodes, cache=None):
    """Interpolate ``g`` on ``n_nodes`` equidistant points of [lo, hi].

    Endpoints are included; a single node sits at ``lo``.  Values found in
    ``cache`` (an :class:`EvalCache`) are reused and new ones are stored.

    Returns
    -------
    poly : InterpPolynomial
    fresh : list of float
        Abscissae that required a new evaluation of ``g``.
    """
    if n_nodes < 1:
        raise ValueError("n_nodes must be >= 1")
    if n_nodes == 1:
        nodes = [float(lo)]
    else:
        if not lo < hi:
            raise ValueError(f"need lo < hi, got [{lo!r}, {hi!r}]")
        nodes = [float(v) for v in np.linspace(lo, hi, n_nodes)]
    cache = EvalCache() if cache is None else cache
    values, fresh = [], []
    for z in nodes:
        v = cache.get(z)
        if v is None:
            v = g(z)
            cache.put(z, v)
            fresh.append(z)
        values.append(v)
    return InterpPolynomial.from_values(nodes, values), fresh


def antiderivative_between(p: InterpPolynomial, y0, y):
    """Exact integral of ``p`` from ``y0`` to ``y``."""
    if y0 == y:
        return 0.0
    return p.primitive(y) - p.primitive(y0)
