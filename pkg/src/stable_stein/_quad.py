"""Panel Gauss-Legendre quadrature helpers.

All heavy integrals in this package (Fourier inversion, oscillatory test
oracles, tail moments) are computed by mapping a fixed Gauss-Legendre rule
onto a list of panel edges chosen by the caller.  Keeping the edge logic with
the caller lets each integral align panels to its own structure: half-periods
of the oscillating factor, dyadic refinement toward an endpoint singularity,
geometric growth into a power-law tail.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gl_rule(order: int):
    """Nodes and weights of the Gauss-Legendre rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_nodes(edges, order: int = 16):
    """Map the GL rule onto every consecutive pair of ``edges``.

    Returns flat arrays (nodes, weights); ``dot(f(nodes), weights)`` is the
    composite integral over [edges[0], edges[-1]].
    """
    edges = np.asarray(edges, dtype=float)
    x, w = gl_rule(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def integrate_panels(f, edges, order: int = 16) -> float:
    nodes, weights = panel_nodes(edges, order)
    return float(np.dot(f(nodes), weights))


def dyadic_edges(lo_stub: float, hi: float):
    """Edges doubling from ``lo_stub`` up to ``hi`` (both included)."""
    if not 0.0 < lo_stub < hi:
        raise ValueError("need 0 < lo_stub < hi")
    k = int(np.ceil(np.log2(hi / lo_stub)))
    edges = hi / (2.0 ** np.arange(k, -1, -1))
    edges[0] = lo_stub
    return edges


def arithmetic_edges(lo: float, hi: float, step: float):
    """Edges spaced by ``step`` from ``lo``, always ending exactly at ``hi``."""
    if hi <= lo:
        raise ValueError("need hi > lo")
    count = max(1, int(np.ceil((hi - lo) / step)))
    return np.linspace(lo, hi, count + 1)
