"""Assembly of the explicit Wasserstein-1 bounds, rate orders and optimizers.

The master inequality bounds the W1 distance between the law of the
normalized sum S_n and the alpha-stable target by

    d_W <= D_alpha * [L1 discrepancy] + R_{N,n},

    R_{N,n} = 2 sum_i E[|zeta_i| 1{|zeta_i| > N}]          (truncation term)
              + 4 d_alpha / ((alpha-1) N^{alpha-1})         (N term)
              + (D_{alpha,gamma}/n) sum_i E|zeta_i|^gamma   (gamma term)

valid for every truncation level N > 0 and every gamma in (0, 1).  For
i.i.d. summands in the normal domain of attraction there is a second
assembly whose remainder is written through the tail-model functions M2 and
the safety factor delta_n = 1 - ell_n^{-1/alpha} N^{-1} |E xi|; with E xi = 0
it reduces to

    R_{N,n} = D_{alpha,gamma} E|xi|^gamma ell_n^{-gamma/alpha}
              + 4 d_alpha ( (alpha+1)/(alpha-1) + M2(ell^{1/alpha} N)
              + int_1^inf M2(ell^{1/alpha} N r) r^{-alpha} dr ) N^{1-alpha}.

For the plain power law the whole bound collapses to the closed form

    total(n, gamma) = D_alpha/(2-alpha) (2 d_alpha/alpha)^{2/alpha} n^{-(2-alpha)/alpha}
                    + alpha D_{alpha,gamma}/(alpha-gamma)
                      (2 d_alpha/alpha)^{gamma/alpha} n^{-gamma/alpha},

which regenerates the reference bound table at n = 10^6.

N = inf is a first-class value: it is accepted exactly when every term has a
finite analytic limit (plain power law always; the two-term family only for
second exponent beta > 2), and rejected otherwise.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .kernels import (
    DistributionSpec,
    GeneralTail,
    HallTransform,
    LogPerturbedPareto,
    ModifiedPareto,
    Pareto,
    ThresholdSolution,
    abs_tail_moment_zeta,
    discrepancy_l1,
    solve_log_tail_scale,
)
from .special import (
    DEFAULT_ALPHA_LIMITS,
    D_alpha,
    D_alpha_gamma,
    check_alpha_window,
    d_alpha,
)

__all__ = [
    "SteinBoundReport",
    "Example2Report",
    "TailModel",
    "RateOrder",
    "bound_main",
    "bound_mthm2",
    "rate_order",
    "example2_bound",
    "optimize_gamma",
    "log_example_A_n",
    "pareto_bound_closed",
    "default_truncation",
    "constants_table_d",
    "constants_table_dgamma",
    "pareto_bound_table",
    "figure_gamma_curves",
    "FIGURE_CASES",
]


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SteinBoundReport:
    """One assembled bound with its term breakdown.

    total = D_alpha * discrepancy_term + truncation_term + N_term + gamma_term
    holds exactly as assembled; rate_exponent / has_log_factor describe the
    leading decay of the bound in n for the given summand family.
    """

    alpha: float
    gamma: float
    n: int
    N: float
    discrepancy_term: float
    truncation_term: float
    N_term: float
    gamma_term: float
    total: float
    rate_exponent: float
    has_log_factor: bool

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "gamma": self.gamma,
            "n": self.n,
            "N": "inf" if math.isinf(self.N) else self.N,
            "terms": {
                "discrepancy": self.discrepancy_term,
                "truncation": self.truncation_term,
                "N_term": self.N_term,
                "gamma_term": self.gamma_term,
            },
            "total": self.total,
            "rate_exponent": self.rate_exponent,
            "has_log_factor": self.has_log_factor,
        }


@dataclass(frozen=True)
class Example2Report(SteinBoundReport):
    """Two-term-family bound with the case split and displayed grouping."""

    case: int = 0
    q_exponent: Optional[float] = None
    leading_term: float = 0.0
    remainder_term: float = 0.0


@dataclass(frozen=True)
class RateOrder:
    """Leading decay of the bound: total ~ n^exponent (times log n when
    has_log_factor), or (log n)^exponent when in_log_n is set."""

    exponent: float
    has_log_factor: bool
    in_log_n: bool = False
    classified: bool = True


# ---------------------------------------------------------------------------
# tail model
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TailModel:
    """Tail-model view of an i.i.d. summand law.

    Wraps a DistributionSpec together with its threshold tail description
    (theta, M1, M2) and exposes the derived quantities used by the second
    assembly: b_t, R_t, r_t, delta_n.
    """

    spec: DistributionSpec
    theta: float
    a_thresh: float
    m1: Callable[[float], float]
    m2: Callable[[float], float]
    mean: float

    @classmethod
    def from_spec(cls, spec: DistributionSpec) -> "TailModel":
        if isinstance(spec, LogPerturbedPareto):
            raise DomainError(
                "log-perturbed tails are slowly varying and have no tail "
                "scale; the tail-model assembly does not apply"
            )
        return cls(
            spec=spec,
            theta=spec.theta,
            a_thresh=spec.a_thresh,
            m1=lambda x: float(spec.m1(x)),
            m2=lambda x: float(spec.m2(x)),
            mean=spec.mean,
        )

    @classmethod
    def from_functions(cls, alpha: float, theta: float, a_thresh: float,
                       m1: Callable[[float], float],
                       m2: Callable[[float], float]) -> "TailModel":
        spec = GeneralTail(alpha=alpha, theta_scale=theta, A_thresh=a_thresh,
                           m1_fn=m1, m2_fn=m2)
        return cls.from_spec(spec)

    @property
    def alpha(self) -> float:
        return self.spec.alpha

    def ell(self, n: int) -> float:
        return self.spec.ell(n)

    def b_t(self, t: float, n: int) -> float:
        return self.ell(n) ** (1.0 / self.alpha) * t + self.mean

    def R_t(self, t: float, n: int) -> float:
        b = self.b_t(t, n)
        return 0.5 * b ** -self.alpha * (1.0 + self.m1(b)) * (1.0 + self.m2(b)) * self.mean

    def r_t(self, t: float, n: int) -> float:
        b = self.b_t(t, n)
        combo = lambda s: self.m1(s) + self.m2(s) + self.m1(s) * self.m2(s)
        head = 0.5 * b ** (1.0 - self.alpha) * combo(b)

        def integrand(w):
            if w > 690.0:
                return 0.0
            return combo(math.exp(w)) * math.exp((1.0 - self.alpha) * w)

        tail, _ = quad(integrand, math.log(b), np.inf, limit=200)
        return head + 0.5 * tail

    def delta_n(self, n: int, N: float) -> float:
        return 1.0 - self.ell(n) ** (-1.0 / self.alpha) / N * abs(self.mean)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _validate_bound_args(alpha, gamma, n, N, alpha_limits):
    check_alpha_window(alpha, alpha_limits)
    if not (0.0 < gamma < 1.0):
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not (N > 0.0):
        raise DomainError(f"N must be positive (or inf), got {N}")


def _scale_report(report: SteinBoundReport, factor: float) -> SteinBoundReport:
    if factor == 1.0:
        return report
    d = asdict(report)
    for key in ("discrepancy_term", "truncation_term", "N_term", "gamma_term", "total"):
        d[key] = d[key] * factor
    return type(report)(**d)


def default_truncation(spec: DistributionSpec, n: int):
    """The truncation level each family's analysis uses by default.

    Plain power law: inf.  Two-term family: inf for beta > 2, else
    N = ell_n^q with q = (2-alpha)/(alpha(alpha-1)) at beta = 2 and
    q = (beta-alpha)/(alpha(alpha+1-beta)) for beta in (alpha, 2).
    Log-perturbed tails: N = (log A_n)^{1/alpha}.
    """
    if isinstance(spec, Pareto):
        return math.inf
    if isinstance(spec, HallTransform):
        spec = spec.as_modified_pareto()
    if isinstance(spec, ModifiedPareto):
        alpha, beta = spec.alpha, spec.beta
        if beta > 2.0:
            return math.inf
        if beta == 2.0:
            q = (2.0 - alpha) / (alpha * (alpha - 1.0))
        else:
            q = (beta - alpha) / (alpha * (alpha + 1.0 - beta))
        # q blows up toward alpha = 1; any truncation level is admissible,
        # and beyond ~1e280 the truncated terms are zero to double precision
        return math.exp(min(q * math.log(spec.ell(n)), 644.0))
    if isinstance(spec, LogPerturbedPareto):
        a_n = spec.solve_threshold(n)
        return math.log(a_n) ** (1.0 / spec.alpha)
    raise DomainError(f"no default truncation rule for {spec.describe()}; pass N explicitly")


# ---------------------------------------------------------------------------
# main assemblies
# ---------------------------------------------------------------------------

def bound_main(spec: DistributionSpec, alpha: float, n: int, N: float, gamma: float,
               *, target_scale: float = 1.0, backend: str = "auto",
               alpha_limits=DEFAULT_ALPHA_LIMITS) -> SteinBoundReport:
    """First assembly: exact per-law truncation accounting.

    N may be inf when the law supports it (every term then takes its
    analytic limit).  ``target_scale`` sigma reports the bound for the
    sigma-scaled target, which is sigma^{1/alpha} times the unit bound.
    """
    if abs(alpha - spec.alpha) > 1e-12:
        raise DomainError(f"alpha={alpha} disagrees with spec alpha={spec.alpha}")
    _validate_bound_args(alpha, gamma, n, N, alpha_limits)
    if math.isinf(N) and not spec.supports_infinite_truncation:
        raise DomainError(
            f"N = inf is not admissible for {spec.describe()}: "
            "the truncated terms have no finite limit"
        )
    if spec.mean == 0.0:
        pass
    elif not math.isfinite(spec.mean):
        raise DomainError("summand law must have a finite first moment")
    disc = discrepancy_l1(spec, alpha, n, N, backend=backend)
    if math.isinf(N):
        trunc = 0.0
        n_term = 0.0
    else:
        trunc = 2.0 * n * abs_tail_moment_zeta(spec, n, N)
        n_term = 4.0 * d_alpha(alpha) / ((alpha - 1.0) * N ** (alpha - 1.0))
    gam = D_alpha_gamma(alpha, gamma) * spec.ell(n) ** (-gamma / alpha) * \
        spec.abs_central_moment(gamma)
    rate = rate_order(spec)
    total = D_alpha(alpha) * disc + trunc + n_term + gam
    report = SteinBoundReport(
        alpha=alpha, gamma=gamma, n=int(n), N=N,
        discrepancy_term=disc, truncation_term=trunc, N_term=n_term,
        gamma_term=gam, total=total,
        rate_exponent=rate.exponent if rate.classified else math.nan,
        has_log_factor=rate.has_log_factor if rate.classified else False,
    )
    return _scale_report(report, target_scale ** (1.0 / alpha))


def _m2_tail_integral(model: TailModel, scale: float, lo: float) -> float:
    """int_lo^inf M2(r * scale) r^{-alpha} dr (log-substituted)."""
    alpha = model.alpha

    def integrand(w):
        if w > 690.0:
            return 0.0
        return model.m2(math.exp(w) * scale) * math.exp((1.0 - alpha) * w)

    val, _ = quad(integrand, math.log(lo), np.inf, limit=200)
    return val


def bound_mthm2(model, alpha: float, n: int, N: float, gamma: float,
                *, target_scale: float = 1.0, backend: str = "auto",
                alpha_limits=DEFAULT_ALPHA_LIMITS) -> SteinBoundReport:
    """Second assembly: remainder written through the tail model.

    ``model`` is a TailModel or a DistributionSpec (wrapped automatically).
    Uses the symmetric remainder when E xi = 0, the delta_n form otherwise.
    The truncation piece here bounds, rather than equals, the exact
    truncated expectation, so it is slightly larger than the first
    assembly's at finite N; both agree at N = inf.
    """
    if isinstance(model, DistributionSpec):
        model = TailModel.from_spec(model)
    spec = model.spec
    if abs(alpha - spec.alpha) > 1e-12:
        raise DomainError(f"alpha={alpha} disagrees with spec alpha={spec.alpha}")
    _validate_bound_args(alpha, gamma, n, N, alpha_limits)
    da = d_alpha(alpha)
    ell = model.ell(n)
    root = ell ** (1.0 / alpha)
    gam = D_alpha_gamma(alpha, gamma) * ell ** (-gamma / alpha) * \
        spec.abs_central_moment(gamma)
    if math.isinf(N):
        if not spec.supports_infinite_truncation:
            raise DomainError(
                f"N = inf is not admissible for {spec.describe()}"
            )
        trunc = 0.0
        n_term = 0.0
    elif model.mean == 0.0:
        m2_at = model.m2(root * N)
        m2_int = _m2_tail_integral(model, root * N, 1.0)
        n_term = 4.0 * da / ((alpha - 1.0) * N ** (alpha - 1.0))
        trunc = 4.0 * da * (alpha / (alpha - 1.0) + m2_at + m2_int) * N ** (1.0 - alpha)
    else:
        delta = model.delta_n(n, N)
        if delta <= 0.0:
            raise DomainError(
                f"delta_n <= 0: N={N} is too small for n={n}; "
                f"need N > {root ** -1.0 * abs(model.mean):.6g}"
            )
        m2_at = model.m2(root * N * delta)

        def delta_integrand(w):
            if w > 690.0:
                return 0.0
            return model.m2(math.exp(w) * root * N) * math.exp((1.0 - alpha) * w) \
                / delta ** (1.0 - alpha)

        m2_int_raw = quad(delta_integrand, math.log(delta), np.inf, limit=200)[0]
        bracket = (1.0 + delta ** (alpha - 1.0)) / (alpha - 1.0) + 1.0 / delta \
            + m2_at / delta + m2_int_raw
        piece = 4.0 * da / delta ** (alpha - 1.0) * bracket * N ** (1.0 - alpha)
        n_term = 4.0 * da / ((alpha - 1.0) * N ** (alpha - 1.0))
        trunc = piece - n_term
    disc = discrepancy_l1(spec, alpha, n, N, backend=backend)
    rate = rate_order(spec)
    total = D_alpha(alpha) * disc + trunc + n_term + gam
    report = SteinBoundReport(
        alpha=alpha, gamma=gamma, n=int(n), N=N,
        discrepancy_term=disc, truncation_term=trunc, N_term=n_term,
        gamma_term=gam, total=total,
        rate_exponent=rate.exponent if rate.classified else math.nan,
        has_log_factor=rate.has_log_factor if rate.classified else False,
    )
    return _scale_report(report, target_scale ** (1.0 / alpha))


# ---------------------------------------------------------------------------
# rate classification
# ---------------------------------------------------------------------------

def rate_order(spec: DistributionSpec, alpha: Optional[float] = None) -> RateOrder:
    """Leading decay order of the assembled bound for a summand family.

    Plain power law and two-term beta > 2: n^{-(2-alpha)/alpha}.
    Two-term beta = 2: the same power times log n.
    Two-term beta in (alpha, 2): n^{-(alpha-1)(beta-alpha)/(alpha(1+alpha-beta))}.
    Power transform: via beta = alpha(c+1).
    Log-perturbed tails: (log n)^{-(1-1/alpha)}.
    Anything else is reported unclassified, not guessed.
    """
    if alpha is not None and abs(alpha - spec.alpha) > 1e-12:
        raise DomainError(f"alpha={alpha} disagrees with spec alpha={spec.alpha}")
    a = spec.alpha
    if isinstance(spec, Pareto):
        return RateOrder(-(2.0 - a) / a, False)
    if isinstance(spec, HallTransform):
        spec = spec.as_modified_pareto()
    if isinstance(spec, ModifiedPareto):
        b = spec.beta
        if b > 2.0:
            return RateOrder(-(2.0 - a) / a, False)
        if b == 2.0:
            return RateOrder(-(2.0 - a) / a, True)
        return RateOrder(-(a - 1.0) * (b - a) / (a * (1.0 + a - b)), False)
    if isinstance(spec, LogPerturbedPareto):
        return RateOrder(-(1.0 - 1.0 / a), False, in_log_n=True)
    return RateOrder(math.nan, False, classified=False)


# ---------------------------------------------------------------------------
# closed Pareto bound and tables
# ---------------------------------------------------------------------------

def pareto_bound_closed(alpha: float, gamma: float, n: int,
                        alpha_limits=DEFAULT_ALPHA_LIMITS) -> float:
    """Closed-form total for the plain power law at N = inf."""
    _validate_bound_args(alpha, gamma, n, math.inf, alpha_limits)
    da = d_alpha(alpha)
    lead = D_alpha(alpha) / (2.0 - alpha) * (2.0 * da / alpha) ** (2.0 / alpha) * \
        float(n) ** (-(2.0 - alpha) / alpha)
    gam = alpha * D_alpha_gamma(alpha, gamma) / (alpha - gamma) * \
        (2.0 * da / alpha) ** (gamma / alpha) * float(n) ** (-gamma / alpha)
    return lead + gam


def constants_table_d(alphas: Sequence[float]) -> list:
    return [D_alpha(a) for a in alphas]


def constants_table_dgamma(alphas: Sequence[float], gammas: Sequence[float]) -> list:
    """Rows indexed by gamma, columns by alpha."""
    return [[D_alpha_gamma(a, g) for a in alphas] for g in gammas]


def pareto_bound_table(n: int, alphas: Sequence[float], gammas: Sequence[float],
                       precision: str = "double") -> list:
    """Bound totals for the plain power law on a (gamma x alpha) grid.

    precision="extended" routes through the high-precision mirror (slow;
    used as the acceptance oracle)."""
    if precision == "extended":
        from .highprec import hp_pareto_bound_total

        return [[float(hp_pareto_bound_total(a, g, n)) for a in alphas] for g in gammas]
    if precision != "double":
        raise DomainError(f"unknown precision {precision!r}")
    return [[pareto_bound_closed(a, g, n) for a in alphas] for g in gammas]


# ---------------------------------------------------------------------------
# two-term family cases
# ---------------------------------------------------------------------------

def example2_bound(A: float, B: float, alpha: float, beta: float, gamma: float,
                   n: int, N="auto", *, alpha_limits=DEFAULT_ALPHA_LIMITS) -> Example2Report:
    """Bound for the two-term power family with the case-split bookkeeping.

    Case 1 (beta > 2): N = inf; case 2 (beta = 2): N = ell^q with
    q = (2-alpha)/(alpha(alpha-1)); case 3 (alpha < beta < 2): N = ell^q with
    q = (beta-alpha)/(alpha(alpha+1-beta)).  ``N`` may override the choice.
    leading_term + remainder_term regroups the same total as displayed in
    the per-case closed forms.
    """
    if beta <= alpha:
        raise DomainError(f"two-term family requires beta > alpha, got beta={beta}")
    spec = ModifiedPareto(alpha=alpha, beta=beta, A=A, B=B)
    da = d_alpha(alpha)
    Da = D_alpha(alpha)
    ell = spec.ell(n)
    if beta > 2.0:
        case, q = 1, None
        n_used = math.inf if N == "auto" else N
    elif beta == 2.0:
        case, q = 2, (2.0 - alpha) / (alpha * (alpha - 1.0))
        n_used = ell ** q if N == "auto" else N
    else:
        case, q = 3, (beta - alpha) / (alpha * (alpha + 1.0 - beta))
        n_used = ell ** q if N == "auto" else N
    base = bound_mthm2(spec, alpha, n, n_used, gamma, alpha_limits=alpha_limits)
    auto = N == "auto"
    if case == 1 and (auto or math.isinf(n_used)):
        leading = (2.0 * da * Da / alpha) * (
            1.0 / (2.0 - alpha) + B / (A * (beta - 2.0))
        ) * ell ** (-(2.0 - alpha) / alpha)
    elif case == 2 and auto:
        leading = (2.0 * da * Da * B * (alpha * q + 1.0) / (alpha ** 2 * A)) * \
            ell ** (-(2.0 - alpha) / alpha) * math.log(ell)
    elif case == 3 and auto:
        e_star = (beta - alpha) * (alpha - 1.0) / (alpha * (alpha + 1.0 - beta))
        leading = 2.0 * da * (
            Da * B / (A * (2.0 - beta) * alpha) + 2.0 * (alpha + 1.0) / (alpha - 1.0)
        ) * ell ** (-e_star)
    else:
        leading = Da * base.discrepancy_term
    return Example2Report(
        alpha=base.alpha, gamma=base.gamma, n=base.n, N=base.N,
        discrepancy_term=base.discrepancy_term,
        truncation_term=base.truncation_term, N_term=base.N_term,
        gamma_term=base.gamma_term, total=base.total,
        rate_exponent=base.rate_exponent, has_log_factor=base.has_log_factor,
        case=case, q_exponent=q, leading_term=leading,
        remainder_term=base.total - leading,
    )


# ---------------------------------------------------------------------------
# optimizers
# ---------------------------------------------------------------------------

def optimize_gamma(spec: DistributionSpec, alpha: float, n: int, N,
                   gamma_grid: Optional[Sequence[float]] = None,
                   *, alpha_limits=DEFAULT_ALPHA_LIMITS):
    """Minimize the bound total over gamma; ties break to the smallest gamma.

    With ``gamma_grid`` the search is restricted to the given values.
    Otherwise a 99-point scan locates the basin and a bounded scalar
    minimization refines it (the scan guards against spurious local minima).
    Returns (gamma_star, total_star).
    """
    if N == "auto":
        N = default_truncation(spec, n)

    # everything except the gamma term is gamma-independent; assemble once
    base = bound_main(spec, alpha, n, N, 0.5, alpha_limits=alpha_limits)
    fixed = base.total - base.gamma_term
    ell_pow = spec.ell(n) ** (-1.0 / alpha)

    def total(g: float) -> float:
        return fixed + D_alpha_gamma(alpha, g) * ell_pow ** g * spec.abs_central_moment(g)

    if gamma_grid is not None:
        pairs = [(float(g), total(float(g))) for g in gamma_grid]
        t_min = min(v for _, v in pairs)
        g_min = min(g for g, v in pairs if v == t_min)
        return g_min, t_min
    grid = np.linspace(0.01, 0.99, 99)
    values = [total(float(g)) for g in grid]
    idx = int(np.argmin(values))
    lo = grid[max(idx - 1, 0)]
    hi = grid[min(idx + 1, len(grid) - 1)]
    res = minimize_scalar(total, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-6})
    g_star, t_star = float(res.x), float(res.fun)
    if values[idx] < t_star:
        g_star, t_star = float(grid[idx]), values[idx]
    return g_star, t_star


# The four reference configurations of the optimal-gamma figure: the plain
# power law and three two-term configurations with A = B.
def _figure_specs(alpha: float):
    b4 = 4.0
    case2 = ModifiedPareto(alpha, b4, A=alpha * b4 / (alpha + b4), B=alpha * b4 / (alpha + b4))
    case3 = ModifiedPareto(alpha, 2.0, A=2.0 * alpha / (alpha + 2.0), B=2.0 * alpha / (alpha + 2.0))
    b5 = alpha + 0.1
    case4 = ModifiedPareto(alpha, b5, A=alpha * b5 / (alpha + b5), B=alpha * b5 / (alpha + b5))
    return (Pareto(alpha), case2, case3, case4)


FIGURE_CASES = (
    "pareto",
    "two_term_beta4_AeqB",
    "two_term_beta2_AeqB",
    "two_term_beta_alpha_plus_0.1_AeqB",
)


def figure_gamma_curves(n: int = 10 ** 6, alphas: Optional[Sequence[float]] = None,
                        threads: Optional[int] = None) -> list:
    """Rows (alpha, gamma*_case1..4): optimal gamma for the four reference
    configurations, alpha on the grid 1 + j/100, j = 1..99 by default."""
    from concurrent.futures import ThreadPoolExecutor

    from .sampling import resolve_threads

    if alphas is None:
        alphas = [1.0 + j / 100.0 for j in range(1, 100)]
    limits = (min(1.005, min(alphas) - 1e-9), max(1.995, max(alphas) + 1e-9))

    def one_row(a: float):
        out = [a]
        for spec in _figure_specs(a):
            g_star, _ = optimize_gamma(spec, a, n, "auto", alpha_limits=limits)
            out.append(g_star)
        return tuple(out)

    workers = resolve_threads(threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one_row, alphas))
    return [one_row(a) for a in alphas]


# ---------------------------------------------------------------------------
# norming threshold of the log-perturbed family
# ---------------------------------------------------------------------------

def log_example_A_n(K0: float, x0: float, alpha: float, beta: float,
                    n: int) -> ThresholdSolution:
    """Norming threshold A_n with n / A_n^alpha = 1 / (K0 (log A_n)^beta).

    beta = 0 is returned in closed form, (K0 n)^{1/alpha}.  Residual is
    relative on the defining equation, at most 1e-10 on success; failure
    raises with the iterate trace.
    """
    return solve_log_tail_scale(K0, x0, alpha, beta, n)
