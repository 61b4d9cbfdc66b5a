"""Kernels, summand laws, K functions and the L1 discrepancy."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from stable_stein.errors import ConvergenceError, DomainError
from stable_stein.kernels import (
    GeneralTail,
    HallTransform,
    LogPerturbedPareto,
    ModifiedPareto,
    Pareto,
    discrepancy_l1,
    k_function,
    k_function_mc,
    kernel_profile,
    solve_log_tail_scale,
    stable_kernel,
    stable_kernel_mass,
    tail_first_moment,
)
from stable_stein.special import d_alpha


def equal_weight_mp(alpha, beta):
    w = alpha * beta / (alpha + beta)
    return ModifiedPareto(alpha, beta, A=w, B=w)


class TestStableKernel:
    def test_vanishes_at_truncation(self):
        assert stable_kernel(1.5, 2.0, 2.0) == 0.0
        assert stable_kernel(1.5, -2.0, 2.0) == 0.0

    def test_even(self):
        assert stable_kernel(1.5, -1.0, 2.0) == stable_kernel(1.5, 1.0, 2.0)

    def test_value(self):
        expect = d_alpha(1.5) / (1.5 * 0.5) * (0.5 ** -0.5 - 10.0 ** -0.5)
        assert stable_kernel(1.5, 0.5, 10.0) == pytest.approx(expect, rel=1e-13)

    def test_singularity_and_domain(self):
        assert stable_kernel(1.5, 0.0, 1.0) == math.inf
        with pytest.raises(DomainError):
            stable_kernel(1.5, 3.0, 2.0)

    @given(st.floats(min_value=1.05, max_value=1.95),
           st.floats(min_value=0.5, max_value=50.0))
    @settings(max_examples=40, deadline=None)
    def test_mass_closed_form(self, alpha, N):
        f = lambda t: d_alpha(alpha) / (alpha * (alpha - 1.0)) * (
            t ** (1.0 - alpha) - N ** (1.0 - alpha))
        val, _ = quad(f, 0.0, N, limit=200)
        assert 2.0 * val == pytest.approx(stable_kernel_mass(alpha, N), rel=1e-8)


class TestSummandLaws:
    def test_pareto_ppf_formula(self):
        p = Pareto(1.5)
        assert p.ppf(0.25) == pytest.approx(-(2 * 0.25) ** (-1 / 1.5))
        assert p.ppf(0.875) == pytest.approx((2 * 0.125) ** (-1 / 1.5))

    def test_modified_pareto_normalization_enforced(self):
        with pytest.raises(DomainError):
            ModifiedPareto(1.5, 4.0, A=1.0, B=1.0)

    def test_modified_pareto_ppf_round_trip(self):
        spec = equal_weight_mp(1.5, 4.0)
        for u in [0.01, 0.2, 0.6, 0.97, 0.99999]:
            x = float(spec.ppf(u))
            back = 1.0 - float(spec.tail_pos(x)) if x > 0 else float(spec.tail_neg(-x))
            assert back == pytest.approx(u, abs=1e-12)

    def test_hall_maps_onto_two_term_family(self):
        h = HallTransform(a=0.3, b=0.24, c=0.2, alpha=1.5)
        assert h.beta == pytest.approx(1.5 * 1.2)
        mp_eq = h.as_modified_pareto()
        # tails of the transformed variable match the two-term law exactly
        for x in [1.0, 1.7, 5.0, 40.0]:
            expected = 0.3 * x ** -1.5 + (0.24 / 1.2) * x ** -h.beta if x > 1 else 0.5
            assert float(h.tail_pos(x)) == pytest.approx(expected, rel=1e-14)
            assert float(mp_eq.tail_pos(x)) == pytest.approx(expected, rel=1e-14)
        # norming follows the tail-scale convention ell = (2a) alpha n/(2 d)
        assert h.ell(100) == pytest.approx(0.6 * 1.5 / (2 * d_alpha(1.5)) * 100, rel=1e-14)

    def test_hall_sampler_matches_tails(self):
        h = HallTransform(a=0.3, b=0.24, c=0.2, alpha=1.5)
        rng = np.random.default_rng(11)
        xs = h.sample(rng, 200000)
        for x in [1.5, 3.0, 8.0]:
            p = float(h.tail_pos(x))
            se = math.sqrt(p * (1 - p) / xs.size)
            assert abs(float(np.mean(xs > x)) - p) <= 3.0 * se

    def test_hall_invalid_mass(self):
        with pytest.raises(DomainError):
            HallTransform(a=0.3, b=0.4, c=0.2, alpha=1.5)

    def test_log_pareto_consistency(self):
        lp = LogPerturbedPareto(1.5, 1.0, x0=5.0)
        assert lp.K0 == pytest.approx(5.0 ** 1.5 / math.log(5.0))
        assert float(lp.tail_abs(5.0)) == pytest.approx(1.0)
        lp2 = LogPerturbedPareto(1.5, 1.0, K0=lp.K0)
        assert lp2.x0 == pytest.approx(5.0, rel=1e-10)
        with pytest.raises(DomainError):
            LogPerturbedPareto(1.5, 1.0, K0=lp.K0, x0=9.0)

    def test_log_pareto_ppf(self):
        lp = LogPerturbedPareto(1.5, -0.5, x0=4.0)
        for u in [0.51, 0.9, 0.9999]:
            x = float(lp.ppf(u))
            assert 1.0 - float(lp.tail_pos(x)) == pytest.approx(u, abs=1e-12)

    def test_general_tail_round_trip(self):
        gt = GeneralTail(alpha=1.5, theta_scale=2.0, A_thresh=3.0,
                         m1_fn=lambda x: 0.2 * x ** -0.5,
                         m2_fn=lambda x: -0.1 * x ** -1.0)
        for x in [3.0, 5.0, 11.0, 100.0]:
            lhs = 2.0 * float(gt.tail_pos(x)) / float(gt.tail_abs(x)) - 1.0
            assert lhs == pytest.approx(0.2 * x ** -0.5, abs=1e-10)
            lhs2 = float(gt.tail_abs(x)) / (2.0 * x ** -1.5) - 1.0
            assert lhs2 == pytest.approx(-0.1 / x, abs=1e-10)

    def test_ell_conventions(self):
        n = 1234
        assert Pareto(1.5).ell(n) == pytest.approx(1.5 / (2 * d_alpha(1.5)) * n)
        spec = equal_weight_mp(1.5, 4.0)
        assert spec.ell(n) == pytest.approx(spec.A / (2 * d_alpha(1.5)) * n)
        gt = GeneralTail(alpha=1.5, theta_scale=0.7, A_thresh=1.0,
                         m1_fn=lambda x: 0.0, m2_fn=lambda x: 0.0)
        assert gt.ell(n) == pytest.approx(1.5 * 0.7 / (2 * d_alpha(1.5)) * n)

    def test_central_moment_closed_forms(self):
        assert Pareto(1.5).abs_central_moment(0.5) == pytest.approx(1.5, rel=1e-14)
        spec = equal_weight_mp(1.5, 4.0)
        expect = spec.A / 1.0 + spec.B / 3.5
        assert spec.abs_central_moment(0.5) == pytest.approx(expect, rel=1e-14)


class TestKFunction:
    def test_truncation_support(self, pareto15):
        assert float(k_function(pareto15, 1.5, 1000, 12.0, 10.0)) == 0.0
        assert float(k_function(pareto15, 1.5, 1000, 10.0, 10.0)) == 0.0

    def test_even_for_symmetric(self, pareto15):
        v1 = float(k_function(pareto15, 1.5, 1000, 0.3, 10.0))
        v2 = float(k_function(pareto15, 1.5, 1000, -0.3, 10.0))
        assert v1 == pytest.approx(v2, rel=1e-14)

    def test_pareto_against_mc_oracle(self, pareto15):
        for t in [0.05, 0.1, 0.5]:
            closed = float(k_function(pareto15, 1.5, 1000, t, 10.0))
            est, se = k_function_mc(pareto15, 1.5, 1000, t, 10.0, draws=10 ** 6, seed=5)
            assert abs(est - closed) <= 3.0 * se

    def test_mc_estimator_unbiased(self, pareto15):
        closed = float(k_function(pareto15, 1.5, 1000, 0.1, 10.0))
        ests = np.array([
            k_function_mc(pareto15, 1.5, 1000, 0.1, 10.0, draws=10 ** 5, seed=s)[0]
            for s in range(50)
        ])
        se_mean = ests.std(ddof=1) / math.sqrt(len(ests))
        assert abs(ests.mean() - closed) <= se_mean

    def test_modified_pareto_against_quadrature_of_density(self, mp_beta4):
        # direct oracle: K1(t,N) = ell^{-1/alpha} int x p(x) dx over the window
        n, N, t = 1000, 10.0, 0.1
        ell = mp_beta4.ell(n)
        root = ell ** (1.0 / 1.5)
        dens = lambda x: mp_beta4.A / (2 * x ** 2.5) + mp_beta4.B / (2 * x ** 5.0)
        lo = max(root * t, 1.0)
        val, _ = quad(lambda x: x * dens(x), lo, root * N, limit=400)
        want = val / root
        got = float(k_function(mp_beta4, 1.5, n, t, N))
        assert got == pytest.approx(want, rel=1e-10)

    def test_quadrature_backend_matches_closed(self, pareto15, mp_beta4):
        for spec in (pareto15, mp_beta4):
            for t in [0.0, 0.07, -0.8, 3.0]:
                c = float(k_function(spec, 1.5, 500, t, 8.0, backend="closed_form"))
                q = float(k_function(spec, 1.5, 500, t, 8.0, backend="quadrature"))
                assert q == pytest.approx(c, rel=1e-8, abs=1e-14)

    def test_closed_form_falls_back(self):
        gt = GeneralTail(alpha=1.5, theta_scale=1.0, A_thresh=1.0,
                         m1_fn=lambda x: 0.0, m2_fn=lambda x: 0.0)
        v = float(k_function(gt, 1.5, 500, 0.1, 8.0, backend="closed_form"))
        assert v > 0.0

    @given(st.floats(min_value=0.01, max_value=4.0),
           st.floats(min_value=0.01, max_value=4.0))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_abs_t(self, t1, t2):
        spec = Pareto(1.4)
        lo, hi = sorted([t1, t2])
        k_lo = float(k_function(spec, 1.4, 200, lo, 5.0))
        k_hi = float(k_function(spec, 1.4, 200, hi, 5.0))
        assert k_lo >= k_hi - 1e-15

    def test_alpha_mismatch(self, pareto15):
        with pytest.raises(DomainError):
            k_function(pareto15, 1.4, 100, 0.1, 5.0)


class TestTailIdentity:
    @pytest.mark.parametrize("t", [0.5, 2.0, 5.0])
    def test_pareto_analytic_equality(self, pareto15, t):
        # left side in closed form: E[X 1{X>t}] = (alpha/(2(alpha-1)))(t v 1)^{1-alpha}
        alpha = 1.5
        lhs = alpha / (2.0 * (alpha - 1.0)) * max(t, 1.0) ** (1.0 - alpha)
        # right side in closed form: t P(X>t) + int_t^inf P(X>r) dr
        p_t = 0.5 * max(t, 1.0) ** -alpha
        tail_int = 0.5 * max(1.0 - t, 0.0) + max(t, 1.0) ** (1.0 - alpha) / (
            2.0 * (alpha - 1.0))
        rhs = t * p_t + tail_int
        assert abs(lhs - rhs) <= 1e-12 * lhs

    @pytest.mark.parametrize("t", [0.5, 2.0, 5.0])
    def test_quadrature_path_matches_closed(self, pareto15, t):
        identity = tail_first_moment(pareto15, t)
        closed = 1.5 / (2.0 * 0.5) * max(t, 1.0) ** -0.5
        assert identity == pytest.approx(closed, rel=1e-9)

    def test_monte_carlo_agreement(self, pareto15):
        rng = np.random.default_rng(3)
        xs = pareto15.sample(rng, 10 ** 6)
        for t in [0.5, 2.0, 5.0]:
            vals = xs * (xs > t)
            est = float(vals.mean())
            se = float(vals.std(ddof=1) / math.sqrt(xs.size))
            closed = 1.5 / (2.0 * 0.5) * max(t, 1.0) ** -0.5
            assert abs(est - closed) <= 3.0 * se

    def test_identity_other_specs_by_quadrature(self, mp_beta4):
        # independent side: two-term closed forms for the modified family,
        # high-precision quadrature for the log-perturbed one
        import mpmath as mp

        A, B, alpha, beta = mp_beta4.A, mp_beta4.B, 1.5, 4.0
        for t in [0.8, 3.0]:
            lhs = tail_first_moment(mp_beta4, t)
            lo = max(t, 1.0)
            want = A / (2.0 * (alpha - 1.0)) * lo ** (1.0 - alpha) + \
                B / (2.0 * (beta - 1.0)) * lo ** (1.0 - beta)
            assert lhs == pytest.approx(want, rel=1e-9)
        # log-tailed law, density K0 (alpha log x - 1) / (2 x^{alpha+1}) at beta = 1
        lp = LogPerturbedPareto(1.5, 1.0, x0=5.0)
        with mp.workdps(30):
            want = mp.quad(lambda x: x * lp.K0 * (1.5 * mp.log(x) - 1.0) / (2 * x ** 2.5),
                           [6.0, 100.0, mp.inf])
        assert tail_first_moment(lp, 6.0) == pytest.approx(float(want), rel=1e-8)


class TestDiscrepancy:
    def test_pareto_closed_form_value(self):
        got = discrepancy_l1(Pareto(1.5), 1.5, 10 ** 6, math.inf)
        want = 2.0 * (2.0 * d_alpha(1.5) / 1.5) ** (4.0 / 3.0) * 1e-2
        assert got == pytest.approx(want, rel=1e-13)

    def test_pareto_independent_of_N(self):
        d1 = discrepancy_l1(Pareto(1.5), 1.5, 1000, 5.0)
        d2 = discrepancy_l1(Pareto(1.5), 1.5, 1000, 500.0)
        d3 = discrepancy_l1(Pareto(1.5), 1.5, 1000, math.inf)
        assert d1 == pytest.approx(d2, rel=1e-14)
        assert d1 == pytest.approx(d3, rel=1e-14)

    @pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8])
    def test_closed_vs_quadrature(self, alpha):
        spec = Pareto(alpha)
        c = discrepancy_l1(spec, alpha, 10 ** 4, 50.0)
        q = discrepancy_l1(spec, alpha, 10 ** 4, 50.0, backend="quadrature")
        assert abs(c - q) / c <= 1e-6

    def test_two_term_upper_estimate(self, mp_beta4):
        c = discrepancy_l1(mp_beta4, 1.5, 10 ** 4, 50.0)
        q = discrepancy_l1(mp_beta4, 1.5, 10 ** 4, 50.0, backend="quadrature")
        assert q <= c
        assert q >= 0.5 * c  # same order: the overlap correction is bounded

    def test_two_term_ratio_to_pareto(self):
        # matched first exponent: ratio of the two closed forms at large n
        n = 10 ** 6
        spec = equal_weight_mp(1.5, 4.0)
        d_mp = discrepancy_l1(spec, 1.5, n, math.inf)
        d_p = discrepancy_l1(Pareto(1.5), 1.5, n, math.inf)
        ell_mp = spec.ell(n)
        ell_p = Pareto(1.5).ell(n)
        # both scale like ell^{-(2-alpha)/alpha}; normalize the norming
        scale = (ell_p / ell_mp) ** ((2.0 - 1.5) / 1.5)
        ratio = d_mp / (d_p * scale)
        expect = 1.0 + (2.0 - 1.5) * spec.B / (spec.A * (4.0 - 2.0))
        assert ratio == pytest.approx(expect, rel=1e-10)

    def test_beta2_log_form_present(self):
        spec = equal_weight_mp(1.5, 2.0)
        d1 = discrepancy_l1(spec, 1.5, 10 ** 4, 10.0)
        d2 = discrepancy_l1(spec, 1.5, 10 ** 4, 100.0)
        ell = spec.ell(10 ** 4)
        diff = d2 - d1
        expect = (2.0 * spec.B * d_alpha(1.5) / spec.A) * ell ** (-1.0 / 3.0) * (
            math.log(100.0) - math.log(10.0)) / 1.5
        assert diff == pytest.approx(expect, rel=1e-12)

    def test_infinite_N_rejected_when_divergent(self):
        spec = equal_weight_mp(1.5, 1.8)
        with pytest.raises(DomainError):
            discrepancy_l1(spec, 1.5, 1000, math.inf)

    def test_convergence_error_carries_partial(self):
        # quadrature at an absurd tolerance must fail and carry an estimate
        from stable_stein.kernels import _discrepancy_quadrature

        gt = GeneralTail(alpha=1.5, theta_scale=1.0, A_thresh=2.0,
                         m1_fn=lambda x: 0.3 * x ** -0.5,
                         m2_fn=lambda x: 0.1 * x ** -1.0)
        with pytest.raises(ConvergenceError) as exc:
            _discrepancy_quadrature(gt, 5000, 30.0, tol=1e-16)
        assert exc.value.achieved_tol is not None


class TestKernelProfile:
    def test_rows_and_diff(self, pareto15):
        rows = kernel_profile(pareto15, 1000, 5.0, [-1.0, 0.5, 2.0])
        assert len(rows) == 3
        for t, kal, kf, diff in rows:
            assert kal >= 0.0 and kf >= 0.0
            assert diff == pytest.approx(abs(kal / 1000 - kf / 1.5), rel=1e-12)


class TestLogTailThreshold:
    def test_closed_form_beta_zero(self):
        sol = solve_log_tail_scale(2.0, 3.0, 1.5, 0.0, 10 ** 6)
        assert sol.value == (2.0 * 10 ** 6) ** (1.0 / 1.5)
        assert sol.residual == 0.0

    def test_bisection_oracle_beta_one(self):
        from scipy.optimize import brentq

        K0, x0, alpha, n = 2.0, 3.0, 1.5, 10 ** 6
        sol = solve_log_tail_scale(K0, x0, alpha, 1.0, n)
        g = lambda A: A ** alpha - K0 * n * math.log(A)
        want = brentq(g, 10.0, 1e9, xtol=1e-6)
        assert sol.value == pytest.approx(want, rel=1e-9)
        assert sol.residual <= 1e-10

    def test_monotone_in_n(self):
        vals = [solve_log_tail_scale(2.0, 3.0, 1.5, 1.0, n).value
                for n in [10 ** 3, 2 * 10 ** 3, 10 ** 4, 10 ** 6]]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_bracket(self):
        K0, alpha, beta = 2.0, 1.5, 1.0
        for n in [10 ** 4, 10 ** 8]:
            a_n = solve_log_tail_scale(K0, 3.0, alpha, beta, n).value
            assert a_n >= 0.5 * (K0 * n) ** (1.0 / alpha)
            assert a_n <= 2.0 * (K0 * n) ** (1.0 / alpha) * math.log(n) ** (beta / alpha)


class TestProfileCsv:
    def test_write_profile(self, pareto15, tmp_path):
        from stable_stein.kernels import write_kernel_profile_csv

        path = tmp_path / "profile.csv"
        write_kernel_profile_csv(path, pareto15, 1000, 5.0, [-1.0, 0.5, 2.0])
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "t,stable_kernel,k_function,abs_diff"
        assert len(lines) == 4
        cells = lines[1].split(",")
        assert float(cells[0]) == -1.0 and float(cells[1]) > 0.0
