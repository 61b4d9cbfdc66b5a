"""Symmetric alpha-stable density, derivatives, CDF and quantile.

The reference law has characteristic function exp(-|lambda|^alpha); its
density, derivatives and CDF are recovered by Fourier inversion:

    p(x)   = I_0(x) / pi         I_theta(x) = int_0^inf  l^theta e^{-l^alpha} cos(l x) dl
    p'(x)  = -J_1(x) / pi        J_theta(x) = int_0^inf  l^theta e^{-l^alpha} sin(l x) dl
    p''(x) = -I_2(x) / pi
    F(x)   = 1/2 + (1/pi) int_0^inf e^{-l^alpha} sin(l x) / l dl

A scale sigma means characteristic function exp(-sigma |lambda|^alpha); its
density follows from the self-similarity p(t, x) = t^{-1/alpha} p(1, t^{-1/alpha} x).

Quadrature strategy: truncate at lambda_max = (-ln eps)^{1/alpha} with
eps = 1e-18, align panels to half-periods of the trigonometric factor for
large |x|, and refine dyadically toward lambda = 0 where e^{-l^alpha} has
unbounded higher derivatives (and l^theta may be singular for theta < 0).
The innermost stub is integrated from the local power-law expansion.

Pure evaluation is thread-safe.  The quantile cache is built once per
(alpha, scale) and is read-only afterwards.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from ._quad import panel_nodes
from .errors import DomainError
from .special import d_alpha

__all__ = [
    "StableLaw",
    "osc_integral_I",
    "osc_integral_J",
    "density",
    "density_deriv",
    "cdf",
    "quantile",
    "verify_hk_bounds",
    "HeatKernelMargins",
    "QuantileTable",
    "quantile_table",
]

_EPS_TRUNC = 1e-18
_LOG_EPS = -math.log(_EPS_TRUNC)
# direct CDF quadrature is used up to this |x|; beyond, the power tail
# F_bar(x) ~ (d_alpha/alpha) x^{-alpha} is accurate to ~1e-9 absolute
_TAIL_SWITCH = 2000.0


@dataclass(frozen=True)
class StableLaw:
    """Symmetric alpha-stable law with characteristic function e^{-scale |l|^alpha}."""

    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise DomainError(f"StableLaw requires alpha in (0, 2), got {self.alpha}")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise DomainError(f"StableLaw requires scale > 0, got {self.scale}")

    @property
    def sigma_root(self) -> float:
        """scale^(1/alpha); multiplies unit-scale quantiles and samples."""
        return self.scale ** (1.0 / self.alpha)

    @property
    def tail_coefficient(self) -> float:
        """c with P(X > x) ~ c x^{-alpha}; equals scale * d_alpha / alpha."""
        return self.scale * d_alpha(self.alpha) / self.alpha

    def char_function(self, lam):
        return np.exp(-self.scale * np.abs(lam) ** self.alpha)

    def density(self, x: float) -> float:
        return density(self, x)

    def density_deriv(self, x: float, order: int) -> float:
        return density_deriv(self, x, order)

    def cdf(self, x: float) -> float:
        return cdf(self, x)

    def quantile(self, u: float) -> float:
        return quantile(self, u)


def _lambda_max(alpha: float) -> float:
    return _LOG_EPS ** (1.0 / alpha)


def _inversion_edges(xabs: float, alpha: float):
    """Panel edges on (0, lambda_max]: dyadic near 0, half-periods beyond."""
    lam_max = _lambda_max(alpha)
    base = lam_max / 8.0
    if xabs > 0.0:
        base = min(base, math.pi / xabs)
    stub = base * 2.0 ** -50
    k = 50
    dyadic = base / (2.0 ** np.arange(k, -1, -1))
    dyadic[0] = stub
    if base >= lam_max:
        count = 1
    else:
        count = int(math.ceil((lam_max - base) / base))
    rest = np.linspace(base, lam_max, count + 1)[1:]
    return stub, np.concatenate([dyadic, rest])


def _fourier_integral(theta: float, x: float, alpha: float, kind: str, order: int = 16) -> float:
    """Core oscillatory integral over (0, inf) of l^theta e^{-l^alpha} trig(l x).

    kind: "cos", "sin", or "sinc" (sin(l x)/l with theta treated as 0).
    """
    xabs = abs(x)
    stub, edges = _inversion_edges(xabs, alpha)
    nodes, weights = panel_nodes(edges, order=order)
    damp = np.exp(-nodes ** alpha)
    if kind == "cos":
        vals = nodes ** theta * damp * np.cos(nodes * x)
    elif kind == "sin":
        vals = nodes ** theta * damp * np.sin(nodes * x)
    elif kind == "sinc":
        vals = damp * np.sin(nodes * x) / nodes
    else:  # pragma: no cover
        raise ValueError(kind)
    total = float(np.dot(vals, weights))
    # stub [0, a]: local expansion e^{-l^a} trig = trig - l^alpha trig + ...
    a = stub
    if kind == "cos":
        total += a ** (theta + 1.0) / (theta + 1.0) - a ** (theta + 1.0 + alpha) / (
            theta + 1.0 + alpha
        )
        if x != 0.0:
            total -= x * x * a ** (theta + 3.0) / (2.0 * (theta + 3.0))
    elif kind == "sin":
        total += x * a ** (theta + 2.0) / (theta + 2.0)
    else:
        total += x * a - x * a ** (1.0 + alpha) / (1.0 + alpha)
    return total


def osc_integral_I(theta: float, x: float, alpha: float) -> float:
    """I_theta(x) = int_0^inf l^theta e^{-l^alpha} cos(l x) dl, theta > -1.

    Satisfies |I_theta(x)| <= Gamma((theta+1)/alpha)/alpha for all x.
    """
    if not (theta > -1.0):
        raise DomainError(f"osc_integral_I requires theta > -1, got {theta}")
    if not (0.0 < alpha < 2.0):
        raise DomainError(f"osc_integral_I requires alpha in (0, 2), got {alpha}")
    return _fourier_integral(theta, x, alpha, "cos")


def osc_integral_J(theta: float, x: float, alpha: float) -> float:
    """J_theta(x) = int_0^inf l^theta e^{-l^alpha} sin(l x) dl, theta > -1."""
    if not (theta > -1.0):
        raise DomainError(f"osc_integral_J requires theta > -1, got {theta}")
    if not (0.0 < alpha < 2.0):
        raise DomainError(f"osc_integral_J requires alpha in (0, 2), got {alpha}")
    return _fourier_integral(theta, x, alpha, "sin")


def _density1(x: float, alpha: float) -> float:
    return _fourier_integral(0.0, abs(x), alpha, "cos") / math.pi


def _density1_d1(x: float, alpha: float) -> float:
    return -_fourier_integral(1.0, x, alpha, "sin") / math.pi


def _density1_d2(x: float, alpha: float) -> float:
    return -_fourier_integral(2.0, abs(x), alpha, "cos") / math.pi


def _cdf1(x: float, alpha: float) -> float:
    if abs(x) > _TAIL_SWITCH:
        tail = d_alpha(alpha) / alpha * abs(x) ** (-alpha)
        return 1.0 - tail if x > 0 else tail
    val = 0.5 + _fourier_integral(0.0, x, alpha, "sinc") / math.pi
    return min(1.0, max(0.0, val))


def density(law: StableLaw, x: float) -> float:
    """Density of the law at x (positive, symmetric)."""
    s = law.scale ** (-1.0 / law.alpha)
    return s * _density1(s * x, law.alpha)


def density_deriv(law: StableLaw, x: float, order: int) -> float:
    """First or second derivative of the density at x."""
    if order not in (1, 2):
        raise DomainError(f"density_deriv order must be 1 or 2, got {order}")
    s = law.scale ** (-1.0 / law.alpha)
    if order == 1:
        return s * s * _density1_d1(s * x, law.alpha)
    return s * s * s * _density1_d2(s * x, law.alpha)


def cdf(law: StableLaw, x: float) -> float:
    """Distribution function of the law at x."""
    s = law.scale ** (-1.0 / law.alpha)
    return _cdf1(s * x, law.alpha)


def quantile(law: StableLaw, u: float) -> float:
    """Inverse CDF; u strictly inside (0, 1).

    Bracketing from the power-tail asymptotic, then a bracketed root solve on
    the CDF followed by two density-accelerated correction steps.
    """
    if not (0.0 < u < 1.0):
        raise DomainError(f"quantile requires u strictly in (0, 1), got {u}")
    if u == 0.5:
        return 0.0
    flip = u < 0.5
    uu = 1.0 - u if flip else u
    alpha = law.alpha
    ubar = 1.0 - uu
    c = d_alpha(alpha) / alpha
    hi = max(1.0, 1.5 * (c / ubar) ** (1.0 / alpha))
    while _cdf1(hi, alpha) < uu:
        hi *= 2.0
        if hi > 1e12:  # pragma: no cover
            raise DomainError("quantile bracket expansion failed")
    x = brentq(lambda t: _cdf1(t, alpha) - uu, 0.0, hi, xtol=1e-9, rtol=1e-13)
    for _ in range(2):
        p = _density1(x, alpha)
        if p <= 0.0:
            break
        x -= (_cdf1(x, alpha) - uu) / p
    x *= law.sigma_root
    return -x if flip else x


@dataclass(frozen=True)
class HeatKernelMargins:
    """Worst-case slack of the four derivative bounds over a grid.

    For the unit-scale density p the bounds checked are
        |p'(x)|  <= 1/(alpha pi)          |p'(x)|  <= (2 alpha + 1)/(pi x^2)
        |p''(x)| <= 2/(alpha pi)          |p''(x)| <= (2 alpha + 6)/(pi x^2)
    Each margin is min over the grid of (bound - |derivative|); nonnegative
    margins mean the inequality held everywhere.  The quadratic-decay margins
    skip x = 0 where the bound is infinite.
    """

    deriv1_uniform: float
    deriv1_quadratic: float
    deriv2_uniform: float
    deriv2_quadratic: float

    def worst(self) -> float:
        return min(
            self.deriv1_uniform,
            self.deriv1_quadratic,
            self.deriv2_uniform,
            self.deriv2_quadratic,
        )


def verify_hk_bounds(alpha: float, x_grid) -> HeatKernelMargins:
    """Evaluate the four derivative-bound margins on a grid of points."""
    if not (1.0 < alpha < 2.0):
        raise DomainError(f"verify_hk_bounds requires alpha in (1, 2), got {alpha}")
    xs = np.asarray(list(x_grid), dtype=float)
    if not np.all(np.isfinite(xs)):
        raise DomainError("x_grid must contain finite points")
    b1 = 1.0 / (alpha * math.pi)
    b3 = 2.0 / (alpha * math.pi)
    m1 = math.inf
    m2 = math.inf
    m3 = math.inf
    m4 = math.inf
    for x in xs:
        p1 = abs(_density1_d1(float(x), alpha))
        p2 = abs(_density1_d2(float(x), alpha))
        m1 = min(m1, b1 - p1)
        m3 = min(m3, b3 - p2)
        if x != 0.0:
            m2 = min(m2, (2.0 * alpha + 1.0) / (math.pi * x * x) - p1)
            m4 = min(m4, (2.0 * alpha + 6.0) / (math.pi * x * x) - p2)
    return HeatKernelMargins(m1, m2, m3, m4)


class QuantileTable:
    """Monotone interpolated inverse CDF for bulk Monte-Carlo use.

    Direct quadrature feeds a PCHIP interpolant of x -> F(x) on a dense grid
    up to x = 2000; beyond the covered probability range the power-tail
    asymptotic Q(u) = (c/(1-u))^{1/alpha} takes over.  Built once, then
    read-only; cheap to evaluate on large arrays.
    """

    def __init__(self, alpha: float, scale: float = 1.0, core_step: float = 0.02,
                 core_max: float = 8.0, n_log: int = 260, x_max: float = _TAIL_SWITCH):
        law = StableLaw(alpha, scale)
        self.alpha = alpha
        self.scale = scale
        self.sigma_root = law.sigma_root
        self.tail_c = d_alpha(alpha) / alpha  # unit-scale tail constant
        core = np.arange(0.0, core_max + core_step / 2, core_step)
        tail = np.geomspace(core_max * 1.05, x_max, n_log)
        xs = np.concatenate([core, tail])
        fs = np.array([_cdf1(float(x), alpha) for x in xs])
        keep = np.concatenate([[True], np.diff(fs) > 0.0])
        xs, fs = xs[keep], fs[keep]
        self.u_hi = float(fs[-1])
        self._inv = PchipInterpolator(fs, xs, extrapolate=False)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        v = np.where(u >= 0.5, u, 1.0 - u)
        inside = v <= self.u_hi
        x = np.empty_like(v)
        x[inside] = self._inv(v[inside])
        out = ~inside
        x[out] = (self.tail_c / (1.0 - v[out])) ** (1.0 / self.alpha)
        x = np.where(u >= 0.5, x, -x) * self.sigma_root
        return x if x.ndim else float(x)


_table_cache: dict = {}
_table_lock = threading.Lock()


def quantile_table(alpha: float, scale: float = 1.0) -> QuantileTable:
    """Shared per-(alpha, scale) quantile cache (single writer, many readers)."""
    key = (round(float(alpha), 12), round(float(scale), 12))
    tab = _table_cache.get(key)
    if tab is None:
        with _table_lock:
            tab = _table_cache.get(key)
            if tab is None:
                tab = QuantileTable(alpha, scale)
                _table_cache[key] = tab
    return tab


def density_grid(law: StableLaw, xs) -> np.ndarray:
    """Density on a grid of points (convenience for table/CSV export)."""
    return np.array([density(law, float(x)) for x in xs])


def cdf_grid(law: StableLaw, xs) -> np.ndarray:
    return np.array([cdf(law, float(x)) for x in xs])
