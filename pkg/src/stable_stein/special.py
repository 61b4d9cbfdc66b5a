"""Gamma/Beta evaluation and the explicit constants of the stable bounds.

Three constants drive every bound produced by this package, all functions of
the stability index alpha (and, for the last one, a Holder exponent gamma):

    d_alpha       = alpha 2^(alpha-1) Gamma((1+alpha)/2) / (sqrt(pi) Gamma(1 - alpha/2))
                  = ( integral over R of (1 - cos y) / |y|^(1+alpha) dy )^(-1)

    D_alpha       = (4/pi) sqrt((2 alpha + 1)/alpha) B((alpha-1)/alpha, 2/alpha)

    D_alpha_gamma = (d_alpha/alpha) [ 16/(pi (2-alpha)) sqrt((alpha+3)/alpha)
                    + 16/(pi (alpha-1)) sqrt((2 alpha+1)/alpha) ]
                    * B((1-gamma)/alpha, (gamma+alpha)/alpha)

d_alpha normalizes the fractional Laplacian; D_alpha and D_alpha_gamma bound
the second derivative, respectively the fractional-Laplacian Holder constant,
of the solution of the characterizing equation.  D_alpha and D_alpha_gamma
diverge as alpha -> 1, and d_alpha/(2-alpha) -> 1 as alpha -> 2.

Everything here is a pure function of its arguments and safe to call from any
number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quad import panel_nodes
from .errors import DomainError

__all__ = [
    "gamma_fn",
    "beta_fn",
    "d_alpha",
    "d_alpha_quadrature",
    "D_alpha",
    "D_alpha_gamma",
    "SteinConstants",
    "DEFAULT_ALPHA_LIMITS",
]

# Bound-producing callers reject alpha outside this window by default: the
# constants blow up near 1 and the kernel algebra degenerates near 2.
DEFAULT_ALPHA_LIMITS = (1.01, 1.99)

# Rational (Lanczos) approximation, g = 7, 9 terms.  Relative error is a few
# ulp times 10 across (0.5, 143); the reflection identity covers (0, 0.5).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(x: float) -> float:
    """Gamma function for real x > 0.

    Self-contained rational approximation; arguments below 0.5 go through the
    reflection identity Gamma(x) Gamma(1-x) = pi / sin(pi x).
    """
    if not isinstance(x, (int, float)) or isinstance(x, bool):
        raise DomainError(f"gamma_fn expects a real number, got {x!r}")
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma_fn requires finite x > 0, got {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def beta_fn(x: float, y: float) -> float:
    """Beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), x, y > 0."""
    for name, v in (("x", x), ("y", y)):
        if not math.isfinite(v) or v <= 0.0:
            raise DomainError(f"beta_fn requires finite {name} > 0, got {v}")
    return gamma_fn(x) * gamma_fn(y) / gamma_fn(x + y)


def d_alpha(alpha: float) -> float:
    """Normalizing constant of the fractional Laplacian, closed form."""
    if not (0.0 < alpha < 2.0):
        raise DomainError(f"d_alpha requires alpha in (0, 2), got {alpha}")
    return (
        alpha
        * 2.0 ** (alpha - 1.0)
        * gamma_fn((1.0 + alpha) / 2.0)
        / (math.sqrt(math.pi) * gamma_fn(1.0 - alpha / 2.0))
    )


def _cos_tail_asymptotic(s: float, Y: float, terms: int = 8) -> float:
    """integral_Y^inf cos(y) y^(-s) dy by repeated integration by parts.

    Alternating asymptotic expansion; with Y of a few hundred the first
    omitted term is far below double precision.
    """
    total = 0.0
    coef = 1.0
    for _ in range(terms):
        total += coef * (-math.sin(Y) * Y ** (-s) + s * math.cos(Y) * Y ** (-s - 1.0))
        coef *= -s * (s + 1.0)
        s += 2.0
    return total


def d_alpha_quadrature(alpha: float, tail_cut: float = 640.0) -> float:
    """d_alpha evaluated from its defining integral (cross-check path).

    The integrand (1 - cos y)/|y|^(1+alpha) is split at |y| = 1: the inner
    part is summed as the alternating series of the cosine expansion, the
    outer part is 1/alpha minus an oscillatory integral done with
    half-period-aligned panels plus an integration-by-parts tail.
    """
    if not (0.0 < alpha < 2.0):
        raise DomainError(f"d_alpha_quadrature requires alpha in (0, 2), got {alpha}")
    # inner: sum_{k>=1} (-1)^(k+1) / ((2k)! (2k - alpha))
    inner = 0.0
    fact = 1.0
    for k in range(1, 40):
        fact *= (2 * k - 1) * (2 * k)
        term = (-1.0) ** (k + 1) / (fact * (2 * k - alpha))
        inner += term
        if abs(term) < 1e-20 * abs(inner):
            break
    # outer: 1/alpha - integral_1^inf cos(y) y^(-1-alpha) dy
    s = 1.0 + alpha
    n_panels = int(math.ceil((tail_cut - 1.0) / math.pi))
    Y = 1.0 + n_panels * math.pi
    edges = 1.0 + math.pi * np.arange(n_panels + 1)
    nodes, weights = panel_nodes(edges, order=20)
    cos_int = float(np.dot(np.cos(nodes) * nodes ** (-s), weights))
    cos_int += _cos_tail_asymptotic(s, Y)
    integral = 2.0 * (inner + 1.0 / alpha - cos_int)
    return 1.0 / integral


def D_alpha(alpha: float) -> float:
    """Second-derivative constant of the solution of the Stein equation."""
    if not (1.0 < alpha < 2.0):
        raise DomainError(f"D_alpha requires alpha in (1, 2), got {alpha}")
    return (
        4.0
        / math.pi
        * math.sqrt((2.0 * alpha + 1.0) / alpha)
        * beta_fn((alpha - 1.0) / alpha, 2.0 / alpha)
    )


def D_alpha_gamma(alpha: float, gamma: float) -> float:
    """Holder-seminorm constant used in the smoothing remainder."""
    if not (1.0 < alpha < 2.0):
        raise DomainError(f"D_alpha_gamma requires alpha in (1, 2), got {alpha}")
    if not (0.0 < gamma < 1.0):
        raise DomainError(f"D_alpha_gamma requires gamma in (0, 1), got {gamma}")
    bracket = 16.0 / (math.pi * (2.0 - alpha)) * math.sqrt((alpha + 3.0) / alpha) + 16.0 / (
        math.pi * (alpha - 1.0)
    ) * math.sqrt((2.0 * alpha + 1.0) / alpha)
    return (
        d_alpha(alpha)
        / alpha
        * bracket
        * beta_fn((1.0 - gamma) / alpha, (gamma + alpha) / alpha)
    )


@dataclass(frozen=True)
class SteinConstants:
    """The per-alpha constants; the gamma-dependent one is computed on demand."""

    alpha: float
    d_alpha: float
    D_alpha: float

    @classmethod
    def for_alpha(cls, alpha: float) -> "SteinConstants":
        return cls(alpha=alpha, d_alpha=d_alpha(alpha), D_alpha=D_alpha(alpha))

    def holder_constant(self, gamma: float) -> float:
        return D_alpha_gamma(self.alpha, gamma)


def check_alpha_window(alpha: float, limits=DEFAULT_ALPHA_LIMITS) -> None:
    """Reject alpha outside the configurable window used by bound producers."""
    lo, hi = limits
    if not (lo <= alpha <= hi):
        raise DomainError(
            f"alpha={alpha} outside the accepted window [{lo}, {hi}]; "
            "the bound constants diverge toward alpha=1 "
            "(pass wider alpha_limits to override)"
        )
