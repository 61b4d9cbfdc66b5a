"""Summand laws, the stable kernel, the truncated K function, L1 discrepancy.

The two kernels compared by the main bound are

    stable kernel   Kal(t, N) = d_alpha/(alpha (alpha-1)) (|t|^{1-alpha} - N^{1-alpha})
    K function      K1(t, N)  = E[ zeta 1{0 <= t <= zeta <= N} - zeta 1{-N <= zeta <= t <= 0} ]

where zeta = ell_n^{-1/alpha} (xi - E xi) is one normalized summand.  The
driving quantity of the bound is the L1 discrepancy

    sum_i int_{-N}^{N} | Kal(t, N)/n - K_i(t, N)/alpha | dt
        = (1/alpha) int_{-N}^{N} | alpha Kal(t, N) - n K1(t, N) | dt     (i.i.d.)

Each summand law owns its tail functions, absolute moments, and its norming
sequence ell_n = alpha theta n / (2 d_alpha) where theta is the tail scale
P(|xi| > x) ~ theta x^{-alpha}.  K functions are computed in closed form for
the Pareto family and otherwise through the tail-integral identity

    E[X 1{X > t}] = t P(X > t) + int_t^inf P(X > r) dr,

which needs only one-dimensional quadrature of the tail function.

A Monte-Carlo estimate of K1 exists purely as a test oracle
(``k_function_mc``); nothing in the bound assembly uses it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError
from .special import d_alpha

__all__ = [
    "DistributionSpec",
    "Pareto",
    "ModifiedPareto",
    "HallTransform",
    "LogPerturbedPareto",
    "GeneralTail",
    "stable_kernel",
    "stable_kernel_mass",
    "k_function",
    "k_function_mc",
    "discrepancy_l1",
    "tail_first_moment",
    "abs_tail_moment_zeta",
    "solve_log_tail_scale",
    "ThresholdSolution",
    "kernel_profile",
    "write_kernel_profile_csv",
]


# ---------------------------------------------------------------------------
# summand laws
# ---------------------------------------------------------------------------

class DistributionSpec:
    """Interface shared by every summand law.

    Concrete laws provide signed tails, the tail scale theta, the threshold
    beyond which the tail model is exact, the mean, absolute (central)
    moments, an inverse CDF, and a sampler.  ``ell(n)`` is the norming
    sequence alpha theta n / (2 d_alpha).
    """

    alpha: float

    # -- tails ------------------------------------------------------------
    def tail_pos(self, x):
        """P(xi > x) for x >= 0 (vectorized)."""
        raise NotImplementedError

    def tail_neg(self, x):
        """P(xi < -x) for x >= 0 (vectorized)."""
        raise NotImplementedError

    def tail_abs(self, x):
        return self.tail_pos(x) + self.tail_neg(x)

    def left_mass(self, z):
        """P(xi <= z) for any real z (atoms on the boundary included)."""
        z = np.asarray(z, dtype=float)
        out = np.where(z >= 0.0, 1.0 - self.tail_pos(np.maximum(z, 0.0)),
                       self.tail_neg(np.maximum(-z, 0.0)))
        return out if out.ndim else float(out)

    # -- tail model -------------------------------------------------------
    @property
    def theta(self) -> float:
        raise NotImplementedError

    @property
    def a_thresh(self) -> float:
        """Threshold beyond which the (M1, M2) tail model holds exactly."""
        raise NotImplementedError

    @property
    def support_radius(self) -> float:
        """Largest r with P(|xi| <= r) = 0 (0 when there is no gap)."""
        return 0.0

    def m1(self, x):
        t = self.tail_abs(x)
        return 2.0 * self.tail_pos(x) / t - 1.0

    def m2(self, x):
        x = np.asarray(x, dtype=float)
        return self.tail_abs(x) * x ** self.alpha / self.theta - 1.0

    # -- moments ----------------------------------------------------------
    @property
    def mean(self) -> float:
        return 0.0

    def abs_central_moment(self, gamma: float) -> float:
        """E|xi - E xi|^gamma for gamma in (0, 1]; quadrature fallback."""
        if not (0.0 < gamma <= 1.0):
            raise DomainError(f"abs_central_moment requires gamma in (0, 1], got {gamma}")
        mu = self.mean

        def upper_tail(s):
            return float(self.tail_pos(s + mu) if s + mu >= 0.0
                         else 1.0 - self.tail_neg(-(s + mu)))

        def lower_tail(s):
            z = mu - s
            return float(self.tail_neg(-z) if z <= 0.0 else 1.0 - self.tail_pos(z))

        def integrand(s):
            return gamma * s ** (gamma - 1.0) * (upper_tail(s) + lower_tail(s))

        head, _ = quad(integrand, 0.0, 1.0, limit=200)
        val = head + _tail_integral(integrand, 1.0, math.inf)
        if not math.isfinite(val):
            raise ConvergenceError("abs_central_moment quadrature failed", partial=val)
        return val

    # -- norming ----------------------------------------------------------
    def ell(self, n: int) -> float:
        return self.alpha * self.theta * n / (2.0 * d_alpha(self.alpha))

    @property
    def supports_infinite_truncation(self) -> bool:
        """Whether the assembled bound admits N = inf as an analytic limit."""
        return False

    # -- sampling ---------------------------------------------------------
    def ppf(self, u):
        raise NotImplementedError

    def sample(self, rng, size=None):
        return self.ppf(rng.random(size))

    # -- misc ---------------------------------------------------------------
    def describe(self) -> str:
        return type(self).__name__


def _check_alpha_12(alpha, who):
    if not (1.0 < alpha < 2.0):
        raise DomainError(f"{who} requires alpha in (1, 2), got {alpha}")


@dataclass(frozen=True)
class Pareto(DistributionSpec):
    """Symmetric power law: density alpha / (2 |x|^{alpha+1}) on |x| > 1."""

    alpha: float

    def __post_init__(self):
        _check_alpha_12(self.alpha, "Pareto")

    def tail_pos(self, x):
        x = np.asarray(x, dtype=float)
        out = 0.5 * np.maximum(x, 1.0) ** -self.alpha
        return out if out.ndim else float(out)

    tail_neg = tail_pos

    @property
    def theta(self) -> float:
        return 1.0

    @property
    def a_thresh(self) -> float:
        return 1.0

    @property
    def support_radius(self) -> float:
        return 1.0

    def m1(self, x):
        out = np.zeros_like(np.asarray(x, dtype=float))
        return out if out.ndim else 0.0

    def m2(self, x):
        out = np.zeros_like(np.asarray(x, dtype=float))
        return out if out.ndim else 0.0

    def abs_central_moment(self, gamma: float) -> float:
        if not (0.0 < gamma <= 1.0):
            raise DomainError(f"abs_central_moment requires gamma in (0, 1], got {gamma}")
        return self.alpha / (self.alpha - gamma)

    @property
    def supports_infinite_truncation(self) -> bool:
        return True

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        out = np.where(u < 0.5, -(2.0 * u) ** (-1.0 / self.alpha),
                       (2.0 * (1.0 - u)) ** (-1.0 / self.alpha))
        return out if out.ndim else float(out)

    def describe(self) -> str:
        return f"Pareto(alpha={self.alpha})"


@dataclass(frozen=True)
class ModifiedPareto(DistributionSpec):
    """Two-term power density A/(2|x|^{1+alpha}) + B/(2|x|^{1+beta}) on |x| > 1.

    Normalization requires A/alpha + B/beta = 1.  The second exponent beta
    must exceed alpha; beta > 2 keeps the assembled bound finite as N -> inf.
    """

    alpha: float
    beta: float
    A: float
    B: float

    def __post_init__(self):
        _check_alpha_12(self.alpha, "ModifiedPareto")
        if not (self.beta > self.alpha):
            raise DomainError(f"ModifiedPareto requires beta > alpha, got beta={self.beta}")
        if self.A <= 0.0 or self.B < 0.0:
            raise DomainError("ModifiedPareto requires A > 0 and B >= 0")
        defect = abs(self.A / self.alpha + self.B / self.beta - 1.0)
        if defect > 1e-12:
            raise DomainError(
                f"ModifiedPareto density not normalized: |A/alpha + B/beta - 1| = {defect:.2e}"
            )

    def tail_pos(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.maximum(x, 1.0)
        out = 0.5 * np.where(
            x <= 1.0, 1.0,
            self.A / self.alpha * xs ** -self.alpha + self.B / self.beta * xs ** -self.beta,
        )
        return out if out.ndim else float(out)

    tail_neg = tail_pos

    @property
    def theta(self) -> float:
        return self.A / self.alpha

    @property
    def a_thresh(self) -> float:
        return 1.0

    @property
    def support_radius(self) -> float:
        return 1.0

    def m2(self, x):
        x = np.asarray(x, dtype=float)
        out = (self.B * self.alpha) / (self.A * self.beta) * x ** (self.alpha - self.beta)
        return out if out.ndim else float(out)

    def abs_central_moment(self, gamma: float) -> float:
        if not (0.0 < gamma <= 1.0):
            raise DomainError(f"abs_central_moment requires gamma in (0, 1], got {gamma}")
        return self.A / (self.alpha - gamma) + self.B / (self.beta - gamma)

    @property
    def supports_infinite_truncation(self) -> bool:
        return self.beta > 2.0

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        v = 2.0 * np.where(u < 0.5, u, 1.0 - u)
        v = np.clip(v, 1e-300, 1.0)
        # solve (A/alpha) y + (B/beta) y^{beta/alpha} = v for y = x^{-alpha}
        r = self.beta / self.alpha
        ca, cb = self.A / self.alpha, self.B / self.beta
        y = np.minimum(v / ca, 1.0)
        for _ in range(60):
            h = ca * y + cb * y ** r - v
            dh = ca + cb * r * y ** (r - 1.0)
            step = h / dh
            y = np.clip(y - step, 1e-320, 1.0)
            if np.all(np.abs(step) <= 1e-15 * np.maximum(y, 1e-300)):
                break
        x = y ** (-1.0 / self.alpha)
        out = np.where(u < 0.5, -x, x)
        return out if out.ndim else float(out)

    def describe(self) -> str:
        return (f"ModifiedPareto(alpha={self.alpha}, beta={self.beta}, "
                f"A={self.A}, B={self.B})")


@dataclass(frozen=True)
class HallTransform(DistributionSpec):
    """Power transform X = sgn(Z) |Z|^{-1/alpha} of a flat-plus-power density.

    Z has density a + b |z|^c on [-1, 1] (so 2a + 2b/(c+1) = 1).  The
    transformed law has tails

        P(X > x) = a x^{-alpha} + (b/(c+1)) x^{-alpha (c+1)},   x > 1,

    i.e. exactly a two-term power law with tail-scale parameters
    A_tail = 2a, B_tail = 2b/(c+1) and second exponent beta = alpha (c+1);
    in density parameters that is ModifiedPareto(A = alpha A_tail,
    B = beta B_tail).  Sampling goes through Z: a uniform/power mixture
    followed by the transform.
    """

    a: float
    b: float
    c: float
    alpha: float
    _mp: ModifiedPareto = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_alpha_12(self.alpha, "HallTransform")
        if self.a <= 0.0 or self.b < 0.0 or self.c <= 0.0:
            raise DomainError("HallTransform requires a > 0, b >= 0, c > 0")
        mass = 2.0 * self.a + 2.0 * self.b / (self.c + 1.0)
        if abs(mass - 1.0) > 1e-12:
            raise DomainError(
                f"HallTransform base density not normalized: 2a + 2b/(c+1) = {mass}"
            )
        beta = self.alpha * (self.c + 1.0)
        mp = ModifiedPareto(
            alpha=self.alpha,
            beta=beta,
            A=self.alpha * 2.0 * self.a,
            B=beta * 2.0 * self.b / (self.c + 1.0),
        )
        object.__setattr__(self, "_mp", mp)

    @property
    def beta(self) -> float:
        return self.alpha * (self.c + 1.0)

    @property
    def tail_A(self) -> float:
        return 2.0 * self.a

    @property
    def tail_B(self) -> float:
        return 2.0 * self.b / (self.c + 1.0)

    def as_modified_pareto(self) -> ModifiedPareto:
        return self._mp

    def tail_pos(self, x):
        return self._mp.tail_pos(x)

    def tail_neg(self, x):
        return self._mp.tail_neg(x)

    @property
    def theta(self) -> float:
        return self._mp.theta

    @property
    def a_thresh(self) -> float:
        return 1.0

    @property
    def support_radius(self) -> float:
        return 1.0

    def m2(self, x):
        return self._mp.m2(x)

    def abs_central_moment(self, gamma: float) -> float:
        return self._mp.abs_central_moment(gamma)

    @property
    def supports_infinite_truncation(self) -> bool:
        return self._mp.supports_infinite_truncation

    def ppf(self, u):
        return self._mp.ppf(u)

    def sample(self, rng, size=None):
        # |Z| is a mixture: weight 2a uniform on (0,1), weight 2b/(c+1) with
        # density (c+1) z^c; the sign is symmetric.
        scalar = size is None
        m = 1 if scalar else int(np.prod(size))
        pick = rng.random(m)
        val = rng.random(m)
        sign = np.where(rng.random(m) < 0.5, -1.0, 1.0)
        w_flat = 2.0 * self.a
        absz = np.where(pick < w_flat, val, val ** (1.0 / (self.c + 1.0)))
        x = sign * absz ** (-1.0 / self.alpha)
        if scalar:
            return float(x[0])
        return x.reshape(size)

    def describe(self) -> str:
        return f"HallTransform(a={self.a}, b={self.b}, c={self.c}, alpha={self.alpha})"


@dataclass(frozen=True)
class LogPerturbedPareto(DistributionSpec):
    """Tail P(|xi| > x) = K0 (log x)^beta / x^alpha on x > x0, symmetric.

    Not in the normal domain of attraction (the log factor is slowly
    varying), so no tail scale theta exists; the norming sequence follows
    the threshold A_n with n / A_n^alpha = 1 / (K0 (log A_n)^beta).

    A proper law requires K0 (log x0)^beta = x0^alpha; exactly one of K0, x0
    may be omitted and is derived from the other.
    """

    alpha: float
    beta: float
    K0: Optional[float] = None
    x0: Optional[float] = None

    def __post_init__(self):
        _check_alpha_12(self.alpha, "LogPerturbedPareto")
        K0, x0 = self.K0, self.x0
        if K0 is None and x0 is None:
            raise DomainError("LogPerturbedPareto needs K0 or x0")
        if x0 is None:
            # solve x0^alpha = K0 (log x0)^beta for x0 > max(e, e^{beta/alpha})
            lo = math.exp(max(1.0, self.beta / self.alpha)) * (1.0 + 1e-9)
            g = lambda x: self.alpha * math.log(x) - self.beta * math.log(math.log(x)) - math.log(K0)
            hi = max(lo * 2.0, (K0 * 10.0) ** (1.0 / self.alpha) + 10.0)
            while g(hi) < 0.0:
                hi *= 4.0
            if g(lo) > 0.0:
                raise DomainError(
                    f"no admissible x0 > e^(max(1, beta/alpha)) for K0={K0}"
                )
            x0 = brentq(g, lo, hi, xtol=1e-13, rtol=1e-15)
            object.__setattr__(self, "x0", x0)
        elif K0 is None:
            if x0 <= math.exp(max(1.0, self.beta / self.alpha)):
                raise DomainError(
                    f"LogPerturbedPareto requires x0 > e^(max(1, beta/alpha)), got {x0}"
                )
            K0 = x0 ** self.alpha / math.log(x0) ** self.beta
            object.__setattr__(self, "K0", K0)
        else:
            if x0 <= math.exp(max(1.0, self.beta / self.alpha)):
                raise DomainError(
                    f"LogPerturbedPareto requires x0 > e^(max(1, beta/alpha)), got {x0}"
                )
            defect = abs(K0 * math.log(x0) ** self.beta / x0 ** self.alpha - 1.0)
            if defect > 1e-9:
                raise DomainError(
                    f"inconsistent (K0, x0): tail mass at x0 is off by {defect:.2e}"
                )

    def tail_abs(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.maximum(x, self.x0)
        out = np.where(x <= self.x0, 1.0,
                       self.K0 * np.log(xs) ** self.beta * xs ** -self.alpha)
        out = np.minimum(out, 1.0)
        return out if out.ndim else float(out)

    def tail_pos(self, x):
        return 0.5 * self.tail_abs(x)

    tail_neg = tail_pos

    @property
    def theta(self) -> float:
        raise DomainError(
            "LogPerturbedPareto has no tail scale theta (slowly varying tail)"
        )

    @property
    def a_thresh(self) -> float:
        return self.x0

    @property
    def support_radius(self) -> float:
        return self.x0

    def solve_threshold(self, n: int) -> float:
        """A_n with n / A_n^alpha = 1/(K0 (log A_n)^beta)."""
        return solve_log_tail_scale(self.K0, self.x0, self.alpha, self.beta, n).value

    def ell(self, n: int) -> float:
        a_n = self.solve_threshold(n)
        return self.alpha / (2.0 * d_alpha(self.alpha)) * self.K0 * n * math.log(a_n) ** self.beta

    def abs_central_moment(self, gamma: float) -> float:
        if not (0.0 < gamma <= 1.0):
            raise DomainError(f"abs_central_moment requires gamma in (0, 1], got {gamma}")

        def integrand(s):
            return gamma * s ** (gamma - 1.0) * float(self.tail_abs(s))

        return self.x0 ** gamma + _tail_integral(integrand, self.x0, math.inf)

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        v = 2.0 * np.where(u < 0.5, u, 1.0 - u)
        v = np.clip(v, 1e-300, 1.0)
        # solve K0 w^beta e^{-alpha w} = v for w = log x >= log x0
        w0 = math.log(self.x0)
        w = np.maximum(w0, (np.log(self.K0 / v)) / self.alpha)
        lo = max(w0, self.beta / self.alpha + 1e-12)
        for _ in range(80):
            g = self.alpha * w - self.beta * np.log(w) - np.log(self.K0 / v)
            dg = self.alpha - self.beta / w
            step = g / dg
            w = np.maximum(w - step, lo)
            if np.all(np.abs(step) <= 1e-14 * np.maximum(w, 1.0)):
                break
        x = np.exp(w)
        out = np.where(u < 0.5, -x, x)
        return out if out.ndim else float(out)

    def describe(self) -> str:
        return (f"LogPerturbedPareto(alpha={self.alpha}, beta={self.beta}, "
                f"K0={self.K0:.6g}, x0={self.x0:.6g})")


@dataclass(frozen=True, eq=False)
class GeneralTail(DistributionSpec):
    """Law defined by its tail model beyond a threshold.

    For x > a_thresh the signed tails follow the model

        P(xi > x)  = (1 + m1(x))/2 (1 + m2(x)) theta x^{-alpha}
        P(xi < -x) = (1 - m1(x))/2 (1 + m2(x)) theta x^{-alpha}

    with m1, m2 -> 0 at infinity.  Below the threshold the tails are frozen
    at their threshold values (all remaining mass sits at -a_thresh, 0,
    a_thresh); only the tail behaviour enters the bounds.  The mean is
    computed from the tails by quadrature.
    """

    alpha: float
    theta_scale: float
    A_thresh: float
    m1_fn: Callable[[float], float]
    m2_fn: Callable[[float], float]

    def __post_init__(self):
        _check_alpha_12(self.alpha, "GeneralTail")
        if self.theta_scale <= 0.0 or self.A_thresh <= 0.0:
            raise DomainError("GeneralTail requires theta_scale > 0 and A_thresh > 0")
        pa = self._model_pos(self.A_thresh)
        na = self._model_neg(self.A_thresh)
        if pa < 0.0 or na < 0.0 or pa + na > 1.0 + 1e-12:
            raise DomainError(
                f"tail model invalid at the threshold: P+={pa}, P-={na}"
            )

    def _model_pos(self, x: float) -> float:
        return (1.0 + self.m1_fn(x)) / 2.0 * (1.0 + self.m2_fn(x)) * self.theta_scale * x ** -self.alpha

    def _model_neg(self, x: float) -> float:
        return (1.0 - self.m1_fn(x)) / 2.0 * (1.0 + self.m2_fn(x)) * self.theta_scale * x ** -self.alpha

    def tail_pos(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([self._model_pos(max(float(v), self.A_thresh)) for v in xs])
        out[xs < self.A_thresh] = self._model_pos(self.A_thresh)
        return out if np.ndim(x) else float(out[0])

    def tail_neg(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([self._model_neg(max(float(v), self.A_thresh)) for v in xs])
        out[xs < self.A_thresh] = self._model_neg(self.A_thresh)
        return out if np.ndim(x) else float(out[0])

    @property
    def theta(self) -> float:
        return self.theta_scale

    @property
    def a_thresh(self) -> float:
        return self.A_thresh

    def m1(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([self.m1_fn(float(v)) for v in xs])
        return out if np.ndim(x) else float(out[0])

    def m2(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([self.m2_fn(float(v)) for v in xs])
        return out if np.ndim(x) else float(out[0])

    @property
    def mean(self) -> float:
        cached = getattr(self, "_mean_cache", None)
        if cached is None:
            pos, _ = quad(lambda s: float(self.tail_pos(s)), 0.0, np.inf, limit=400)
            neg, _ = quad(lambda s: float(self.tail_neg(s)), 0.0, np.inf, limit=400)
            cached = pos - neg
            object.__setattr__(self, "_mean_cache", cached)
        return cached

    def describe(self) -> str:
        return (f"GeneralTail(alpha={self.alpha}, theta={self.theta_scale}, "
                f"A_thresh={self.A_thresh})")


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

def stable_kernel(alpha: float, t: float, N: float):
    """Kal(t, N) = d_alpha/(alpha(alpha-1)) (|t|^{1-alpha} - N^{1-alpha}).

    Returns +inf at t = 0 (the singularity is integrable); |t| > N is a
    domain error; the kernel vanishes at |t| = N.
    """
    _check_alpha_12(alpha, "stable_kernel")
    if not (N > 0.0):
        raise DomainError(f"stable_kernel requires N > 0, got {N}")
    if abs(t) > N:
        raise DomainError(f"stable_kernel requires |t| <= N, got t={t}, N={N}")
    if t == 0.0:
        return math.inf
    da = d_alpha(alpha)
    return da / (alpha * (alpha - 1.0)) * (abs(t) ** (1.0 - alpha) - N ** (1.0 - alpha))


def stable_kernel_mass(alpha: float, N: float) -> float:
    """int_{-N}^{N} Kal(t, N) dt = 2 d_alpha N^{2-alpha} / (alpha (2-alpha))."""
    _check_alpha_12(alpha, "stable_kernel_mass")
    return 2.0 * d_alpha(alpha) * N ** (2.0 - alpha) / (alpha * (2.0 - alpha))


def _tail_integral(tail, lo: float, hi: float, points=()) -> float:
    """int_lo^hi tail(s) ds for power-like tails.

    ``points`` lists known kinks of the tail (support edges, thresholds).
    Log substitution over wide ranges; the infinite remainder beyond
    s = lo * e^500 uses a power fit with locally measured exponent (exact
    for pure power tails, second-order for slowly varying corrections).
    """
    if hi <= lo:
        return 0.0
    inner = sorted(p for p in points if lo < p < hi)
    if inner:
        total = 0.0
        edges = [lo] + inner + [hi]
        for a, b in zip(edges[:-1], edges[1:]):
            total += _tail_integral(tail, a, b)
        return total
    total = 0.0
    if lo < 1e-12:
        mid = min(1.0, hi)
        val, _ = quad(tail, lo, mid, limit=200)
        total += val
        lo = mid
        if hi <= lo:
            return total
    if math.isinf(hi):
        W = min(500.0, 690.0 - math.log(lo))
        s_cut = lo if W <= 0.0 else lo * math.exp(W)
        if W > 0.0:
            val, _ = quad(lambda w: tail(math.exp(w)) * math.exp(w),
                          math.log(lo), math.log(s_cut), limit=400)
            total += val
        t1, t2 = tail(s_cut), tail(2.0 * s_cut)
        if t1 > 0.0 and 0.0 < t2 < t1:
            g = math.log(t1 / t2) / math.log(2.0)
            if g > 1.0:
                total += s_cut * t1 / (g - 1.0)
        return total
    if hi / lo > 30.0:
        val, _ = quad(lambda w: tail(math.exp(w)) * math.exp(w),
                      math.log(lo), math.log(hi), limit=400)
        return total + val
    val, _ = quad(tail, lo, hi, limit=400)
    return total + val


def tail_first_moment(spec: DistributionSpec, t: float) -> float:
    """E[xi 1{xi > t}] for t > 0 via the tail-integral identity."""
    if not (t > 0.0):
        raise DomainError(f"tail_first_moment requires t > 0, got {t}")
    p = float(spec.tail_pos(t))
    kinks = (spec.support_radius, spec.a_thresh)
    return t * p + _tail_integral(lambda s: float(spec.tail_pos(s)), t, math.inf,
                                  points=kinks)


def abs_tail_moment_zeta(spec: DistributionSpec, n: int, N: float) -> float:
    """E[|zeta| 1{|zeta| > N}] for one normalized summand zeta.

    zeta = ell^{-1/alpha}(xi - E xi); both signed tails enter.
    """
    ell = spec.ell(n)
    root = ell ** (1.0 / spec.alpha)
    mu = spec.mean

    def upper(r):
        z = root * r + mu
        return float(spec.tail_pos(z)) if z >= 0.0 else 1.0 - float(spec.tail_neg(-z))

    def lower(r):
        z = mu - root * r
        return float(spec.tail_neg(-z)) if z <= 0.0 else 1.0 - float(spec.tail_pos(z))

    total = 0.0
    for one_sided, sgn in ((upper, 1.0), (lower, -1.0)):
        p = one_sided(N)
        kinks = [(thr - sgn * mu) / root for thr in
                 (spec.support_radius, -spec.support_radius, spec.a_thresh, -spec.a_thresh)]
        total += N * p + _tail_integral(one_sided, N, math.inf, points=kinks)
    return total


def _k_closed_two_term(spec, n: int, t, N: float):
    """Closed-form K1 for the Pareto / ModifiedPareto family (mean zero)."""
    alpha = spec.alpha
    ell = spec.ell(n)
    root = ell ** (1.0 / alpha)
    if isinstance(spec, HallTransform):
        spec = spec.as_modified_pareto()
    if isinstance(spec, Pareto):
        pairs = ((spec.alpha, spec.alpha),)
    else:
        pairs = ((spec.A, spec.alpha), (spec.B, spec.beta))
    t = np.asarray(t, dtype=float)
    ta = np.abs(t)
    out = np.zeros_like(ta)
    live = ta <= N
    if root * N > 1.0:
        lo = np.maximum(ta, 1.0 / root)
        for coef, expo in pairs:
            piece = coef / (2.0 * ell ** (expo / alpha) * (expo - 1.0)) * (
                lo ** (1.0 - expo) - N ** (1.0 - expo)
            )
            out = np.where(live, out + piece, out)
    out = np.maximum(out, 0.0)
    return out if out.ndim else float(out)


def _k_quadrature(spec, n: int, t: float, N: float) -> float:
    """K1 from the tail-integral identity (deterministic quadrature)."""
    ell = spec.ell(n)
    alpha = spec.alpha
    root = ell ** (1.0 / alpha)
    mu = spec.mean
    if abs(t) > N:
        return 0.0

    if t >= 0.0:
        sgn = 1.0

        def zt(r):
            z = root * r + mu
            return float(spec.tail_pos(z)) if z >= 0.0 else 1.0 - float(spec.tail_neg(-z))
    else:
        sgn = -1.0

        def zt(r):
            z = mu - root * r
            return float(spec.tail_neg(-z)) if z <= 0.0 else 1.0 - float(spec.tail_pos(z))

    a = abs(t)
    kinks = [(thr - sgn * mu) / root for thr in
             (spec.support_radius, -spec.support_radius, spec.a_thresh, -spec.a_thresh)]
    val = a * zt(a) - N * zt(N) + _tail_integral(zt, max(a, 1e-300), N, points=kinks)
    return max(val, 0.0)


def k_function(spec: DistributionSpec, alpha: float, n: int, t, N: float,
               backend: str = "auto"):
    """Truncated K function of one normalized summand.

    The closed form covers the Pareto family; anything else goes through the
    tail-integral identity.  ``backend`` is "auto", "closed_form" or
    "quadrature"; an explicitly requested closed form falls back to
    quadrature when the law has none.
    """
    if abs(alpha - spec.alpha) > 1e-12:
        raise DomainError(f"alpha={alpha} disagrees with spec alpha={spec.alpha}")
    if not (N > 0.0):
        raise DomainError(f"k_function requires N > 0, got {N}")
    if backend not in ("auto", "closed_form", "quadrature"):
        raise DomainError(f"unknown backend {backend!r}")
    closed_ok = isinstance(spec, (Pareto, ModifiedPareto, HallTransform))
    if backend in ("auto", "closed_form") and closed_ok:
        return _k_closed_two_term(spec, n, t, N)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    vals = np.array([_k_quadrature(spec, n, float(tt), N) for tt in t_arr])
    return vals if np.ndim(t) else float(vals[0])


def k_function_mc(spec: DistributionSpec, alpha: float, n: int, t: float, N: float,
                  draws: int = 10 ** 6, seed: int = 0):
    """Monte-Carlo estimate of K1 with its standard error (test oracle only)."""
    from .sampling import substream, STREAM_GENERIC

    rng = substream(seed, STREAM_GENERIC, 0)
    ell = spec.ell(n)
    xi = spec.sample(rng, draws)
    zeta = (xi - spec.mean) / ell ** (1.0 / alpha)
    if t >= 0.0:
        vals = zeta * ((zeta >= t) & (zeta <= N))
    else:
        vals = -zeta * ((zeta >= -N) & (zeta <= t))
    est = float(np.mean(vals))
    se = float(np.std(vals, ddof=1) / math.sqrt(draws))
    return est, se


# ---------------------------------------------------------------------------
# L1 discrepancy
# ---------------------------------------------------------------------------

def _pareto_discrepancy_closed(spec: Pareto, n: int, N: float) -> float:
    alpha = spec.alpha
    da = d_alpha(alpha)
    ell = spec.ell(n)
    if not math.isinf(N) and N < ell ** (-1.0 / alpha):
        # truncation below the support gap: K1 vanishes identically there
        return stable_kernel_mass(alpha, N)
    return 1.0 / (2.0 - alpha) * (2.0 * da / alpha) ** (2.0 / alpha) * float(n) ** (
        -(2.0 - alpha) / alpha
    )


def _modified_discrepancy_closed(spec: ModifiedPareto, n: int, N: float) -> float:
    """Two-term upper estimate of the discrepancy for the two-term family.

    The first-exponent part integrates exactly as in the single-term case;
    the second-exponent part is integrated on its own, so on the overlap
    |t| < ell^{-1/alpha} this is an upper estimate of the exact L1 value
    (the quadrature backend computes the exact integral).
    """
    alpha, beta = spec.alpha, spec.beta
    da = d_alpha(alpha)
    ell = spec.ell(n)
    first = 2.0 * da * ell ** ((alpha - 2.0) / alpha) / (2.0 - alpha)
    if math.isinf(N):
        if beta <= 2.0:
            raise DomainError(
                "N = inf admissible for the two-term family only when beta > 2"
            )
        second = 2.0 * spec.B * da / (spec.A * (beta - 2.0)) * ell ** ((alpha - 2.0) / alpha)
    elif beta == 2.0:
        second = (2.0 * spec.B * da / spec.A) * ell ** ((alpha - 2.0) / alpha) * (
            math.log(N) + math.log(ell) / alpha
        )
    else:
        second = 2.0 * spec.B * da / (spec.A * (beta - 2.0)) * (
            ell ** ((alpha - 2.0) / alpha) - ell ** ((alpha - beta) / alpha) * N ** (2.0 - beta)
        )
    return (first + second) / alpha


def _discrepancy_quadrature(spec: DistributionSpec, n: int, N: float,
                            tol: float = 1e-6) -> float:
    """(1/alpha) int_{-N}^{N} |alpha Kal - n K1| dt by panelized quadrature.

    The integrable singularity at t = 0 is handled analytically: K1 is
    constant on the support gap (symmetric laws), where the crossing point
    of alpha Kal with that constant has a closed form.
    """
    if math.isinf(N):
        raise DomainError("quadrature backend needs finite N")
    alpha = spec.alpha
    da = d_alpha(alpha)
    ell = spec.ell(n)

    def n_k(t):
        return n * float(k_function(spec, alpha, n, t, N))

    def a_kal(t):
        return da / (alpha - 1.0) * (abs(t) ** (1.0 - alpha) - N ** (1.0 - alpha))

    def diff(t):
        return a_kal(t) - n_k(t)

    # kinks/jumps of K1 appear where the scaled argument crosses the
    # tail-model threshold, the support edge, or the origin
    mu = spec.mean
    root = ell ** (1.0 / alpha)

    def structural_points(sgn: float):
        pts = []
        for s in (spec.a_thresh, -spec.a_thresh, spec.support_radius,
                  -spec.support_radius, 0.0):
            z = (s - mu) / root
            t_break = z if sgn > 0 else -z
            if t_break > 0.0:
                pts.append(t_break)
        return pts

    def one_side(sgn: float, lo: float) -> float:
        """int_lo^N |alpha Kal(t) - n K1(sgn t)| dt, integrated in log space.

        The substitution t = e^w removes the t^{1-alpha} dynamic range.  Sign
        changes of the difference are bracketed on a probe grid; the signed
        difference is then integrated piecewise between breakpoints (sign
        roots plus structural kinks of K1), each piece being smooth and of
        one sign, and |piece values| are summed.
        """
        if N <= lo * (1.0 + 1e-15):
            return 0.0

        def signed(t):
            return diff(sgn * t)

        probes = np.geomspace(lo, N, 400)
        vals = np.sign([signed(p) for p in probes])
        cuts = set()
        for i in range(len(probes) - 1):
            if vals[i] != vals[i + 1] and vals[i] != 0 and vals[i + 1] != 0:
                try:
                    cuts.add(brentq(signed, probes[i], probes[i + 1], xtol=1e-14))
                except ValueError:
                    pass
        cuts.update(p for p in structural_points(sgn) if lo < p < N)
        edges = [lo] + sorted(cuts) + [N]
        total_val = 0.0
        total_err = 0.0
        for a_lim, b_lim in zip(edges[:-1], edges[1:]):
            if b_lim <= a_lim * (1.0 + 1e-15):
                continue
            piece, err = quad(lambda w: signed(math.exp(w)) * math.exp(w),
                              math.log(a_lim), math.log(b_lim), limit=400)
            total_val += abs(piece)
            total_err += err
        if total_err > 1e-9 + tol * abs(total_val):
            raise ConvergenceError(
                f"discrepancy quadrature reached only {total_err:.2e}",
                partial=total_val, achieved_tol=total_err,
            )
        return total_val

    symmetric_gap = spec.support_radius > 0.0 and spec.mean == 0.0
    total = 0.0
    if symmetric_gap:
        c = min(spec.support_radius * ell ** (-1.0 / alpha), N)
        k_gap = n_k(0.5 * c)

        def anti(t):
            # antiderivative of (alpha Kal - n K_gap) on (0, c]
            return da / (alpha - 1.0) * (
                t ** (2.0 - alpha) / (2.0 - alpha) - N ** (1.0 - alpha) * t
            ) - k_gap * t

        base = N ** (1.0 - alpha) + (alpha - 1.0) * k_gap / da
        t_star = base ** (-1.0 / (alpha - 1.0))
        if t_star >= c:
            total += 2.0 * anti(c)
        else:
            total += 2.0 * (2.0 * anti(t_star) - anti(c))
        total += 2.0 * one_side(1.0, c)
    else:
        lo = N * 1e-12
        # stub [-lo, lo]: stable-kernel mass minus the slowly varying n K1
        total += 2.0 * (da / (alpha - 1.0)) * (
            lo ** (2.0 - alpha) / (2.0 - alpha) - N ** (1.0 - alpha) * lo
        )
        total -= lo * (n_k(lo / 2.0) + n_k(-lo / 2.0))
        total += one_side(1.0, lo) + one_side(-1.0, lo)
    return total / alpha


def discrepancy_l1(spec: DistributionSpec, alpha: float, n: int, N: float,
                   backend: str = "auto") -> float:
    """sum_i int |Kal/n - K_i/alpha| dt for n i.i.d. normalized summands.

    Closed forms cover the Pareto family (exact for Pareto, the standard
    two-term upper estimate for ModifiedPareto/HallTransform); the
    quadrature backend computes the exact integral for any law at finite N.
    """
    if abs(alpha - spec.alpha) > 1e-12:
        raise DomainError(f"alpha={alpha} disagrees with spec alpha={spec.alpha}")
    if n < 1:
        raise DomainError(f"discrepancy_l1 requires n >= 1, got {n}")
    if not (N > 0.0):
        raise DomainError(f"discrepancy_l1 requires N > 0, got {N}")
    if backend not in ("auto", "closed_form", "quadrature"):
        raise DomainError(f"unknown backend {backend!r}")
    if backend in ("auto", "closed_form"):
        if isinstance(spec, Pareto):
            return _pareto_discrepancy_closed(spec, n, N)
        if isinstance(spec, HallTransform):
            return _modified_discrepancy_closed(spec.as_modified_pareto(), n, N)
        if isinstance(spec, ModifiedPareto):
            return _modified_discrepancy_closed(spec, n, N)
        if backend == "closed_form" or math.isinf(N):
            raise DomainError(
                f"no closed-form discrepancy for {spec.describe()}"
                + (" at N = inf" if math.isinf(N) else "")
            )
    return _discrepancy_quadrature(spec, n, N)


# ---------------------------------------------------------------------------
# norming threshold of the log-perturbed family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdSolution:
    value: float
    residual: float
    iterations: tuple

    def __float__(self):
        return self.value


def solve_log_tail_scale(K0: float, x0: float, alpha: float, beta: float,
                         n: int) -> ThresholdSolution:
    """Solve A^alpha = K0 n (log A)^beta for the norming threshold A_n.

    beta = 0 is closed form.  Otherwise a fixed-point iteration
    A <- (K0 n (log A)^beta)^{1/alpha} runs to relative step 1e-14 and the
    equation residual is verified; failure raises with the iterate trace.
    """
    if K0 <= 0.0 or n < 1:
        raise DomainError("solve_log_tail_scale requires K0 > 0 and n >= 1")
    if not (0.0 < alpha < 2.0):
        raise DomainError(f"alpha must be in (0, 2), got {alpha}")
    floor = max(x0, math.e)
    if beta == 0.0:
        a = (K0 * n) ** (1.0 / alpha)
        if a <= floor:
            raise DomainError(f"n={n} too small: A_n={a:.4g} <= max(x0, e)")
        return ThresholdSolution(a, 0.0, (a,))
    a = max(floor * 2.0, (K0 * n) ** (1.0 / alpha))
    trace = [a]
    for _ in range(200):
        nxt = (K0 * n * math.log(a) ** beta) ** (1.0 / alpha)
        nxt = max(nxt, floor * (1.0 + 1e-12))
        trace.append(nxt)
        if abs(nxt - a) <= 1e-14 * a:
            a = nxt
            break
        a = nxt
    residual = abs(a ** alpha / (K0 * n * math.log(a) ** beta) - 1.0)
    if residual > 1e-10:
        raise ConvergenceError(
            f"threshold iteration stalled at residual {residual:.2e}",
            partial=a, achieved_tol=residual, trace=trace,
        )
    if a <= floor:
        raise DomainError(f"n={n} too small: A_n={a:.4g} <= max(x0, e)")
    return ThresholdSolution(a, residual, tuple(trace))


# ---------------------------------------------------------------------------
# profile export
# ---------------------------------------------------------------------------

def kernel_profile(spec: DistributionSpec, n: int, N: float, t_grid):
    """Rows (t, stable_kernel, k_function, abs_diff) for CSV export.

    abs_diff is |Kal/n - K1/alpha|, the pointwise integrand of the
    discrepancy.
    """
    alpha = spec.alpha
    rows = []
    for t in t_grid:
        t = float(t)
        kal = stable_kernel(alpha, t, N) if abs(t) <= N else 0.0
        kf = float(k_function(spec, alpha, n, t, N)) if abs(t) <= N else 0.0
        diff = abs(kal / n - kf / alpha) if math.isfinite(kal) else math.inf
        rows.append((t, kal, kf, diff))
    return rows


def write_kernel_profile_csv(path, spec: DistributionSpec, n: int, N: float, t_grid):
    """Write a kernel profile with header t,stable_kernel,k_function,abs_diff."""
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "stable_kernel", "k_function", "abs_diff"])
        for row in kernel_profile(spec, n, N, t_grid):
            w.writerow([f"{v:.10g}" for v in row])
