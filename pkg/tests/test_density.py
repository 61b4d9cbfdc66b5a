"""Stable density/CDF/quantile against the analytic Cauchy case, doubled-
resolution inversion oracles, finite differences and the derivative bounds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stable_stein._quad import panel_nodes
from stable_stein.density import (
    QuantileTable,
    StableLaw,
    cdf,
    density,
    density_deriv,
    osc_integral_I,
    osc_integral_J,
    quantile,
    verify_hk_bounds,
)
from stable_stein.errors import DomainError
from stable_stein.special import d_alpha, gamma_fn


def inversion_oracle(x: float, alpha: float, theta: float = 0.0, kind: str = "cos") -> float:
    """Independent inversion at doubled resolution: brute panel quadrature
    with 32-node panels of half the production width and a wider cutoff."""
    lam_max = (2.0 * 41.45) ** (1.0 / alpha)
    width = min(math.pi / (2.0 * max(abs(x), 1e-9)), lam_max / 64.0)
    k = int(math.ceil(lam_max / width))
    coarse = np.linspace(0.0, lam_max, k + 1)[1:]
    fine = np.concatenate([np.geomspace(coarse[0] * 2.0 ** -60, coarse[0], 61), coarse[1:]])
    nodes, weights = panel_nodes(np.concatenate([[fine[0] * 0.5], fine]), order=32)
    trig = np.cos if kind == "cos" else np.sin
    vals = nodes ** theta * np.exp(-nodes ** alpha) * trig(nodes * x)
    head = fine[0] * 0.5
    stub = head ** (theta + 1.0) / (theta + 1.0) if kind == "cos" else 0.0
    return float(np.dot(vals, weights)) + stub


class TestOscIntegrals:
    def test_zero_argument_reduces_to_gamma(self):
        for alpha in [1.0, 1.5]:
            assert osc_integral_I(0.0, 0.0, alpha) == pytest.approx(
                gamma_fn(1.0 / alpha) / alpha, rel=1e-12)

    def test_exponential_case(self):
        assert osc_integral_I(0.0, 0.0, 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_against_doubled_resolution(self):
        for (theta, x, alpha) in [(0.0, 5.0, 1.5), (0.0, 0.7, 1.1), (2.0, 3.0, 1.7),
                                  (-0.5, 1.0, 1.5), (0.3, 12.0, 1.3)]:
            got = osc_integral_I(theta, x, alpha)
            want = inversion_oracle(x, alpha, theta, "cos")
            assert got == pytest.approx(want, abs=1e-9)

    @given(st.floats(min_value=-0.9, max_value=3.0),
           st.floats(min_value=-30.0, max_value=30.0),
           st.floats(min_value=1.05, max_value=1.95))
    @settings(max_examples=60, deadline=None)
    def test_uniform_bound(self, theta, x, alpha):
        bound = gamma_fn((theta + 1.0) / alpha) / alpha
        assert abs(osc_integral_I(theta, x, alpha)) <= bound + 1e-9
        assert abs(osc_integral_J(theta, x, alpha)) <= bound + 1e-9

    def test_domain(self):
        with pytest.raises(DomainError):
            osc_integral_I(-1.0, 0.0, 1.5)
        with pytest.raises(DomainError):
            osc_integral_I(0.0, 0.0, 2.5)


class TestDensity:
    def test_cauchy_closed_form(self):
        law = StableLaw(1.0)
        for x in [0.0, 0.5, 1.0, 3.0, 20.0]:
            assert density(law, x) == pytest.approx(
                1.0 / (math.pi * (1.0 + x * x)), rel=1e-10)

    def test_center_value(self):
        law = StableLaw(1.5)
        assert density(law, 0.0) == pytest.approx(
            gamma_fn(1.0 / 1.5) / (1.5 * math.pi), rel=1e-12)

    def test_against_oracle(self):
        law = StableLaw(1.5)
        assert density(law, 3.0) == pytest.approx(
            inversion_oracle(3.0, 1.5) / math.pi, abs=1e-8)

    @pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
    def test_normalization(self, alpha):
        law = StableLaw(alpha)
        edges = np.array([0.0, 0.5, 1, 2, 4, 8, 16, 32, 64, 128, 256, 400.0])
        nodes, w = panel_nodes(edges, order=40)
        vals = np.array([density(law, float(x)) for x in nodes])
        integral = 2.0 * float(np.dot(vals, w))
        tail = 2.0 * d_alpha(alpha) / alpha * 400.0 ** (-alpha)
        assert abs(integral + tail - 1.0) <= 1e-6

    @given(st.floats(min_value=1.05, max_value=1.95),
           st.floats(min_value=-20.0, max_value=20.0))
    @settings(max_examples=40, deadline=None)
    def test_symmetric_positive(self, alpha, x):
        law = StableLaw(alpha)
        p = density(law, x)
        assert p > 0.0
        assert p == pytest.approx(density(law, -x), rel=1e-11)

    @pytest.mark.parametrize("t", [0.3, 1.0, 2.7])
    def test_scaling_law(self, t):
        alpha = 1.5
        for x in [0.2, 1.0, 4.0]:
            lhs = density(StableLaw(alpha, scale=t), x)
            rhs = t ** (-1.0 / alpha) * density(StableLaw(alpha), t ** (-1.0 / alpha) * x)
            assert lhs == pytest.approx(rhs, rel=1e-8)


class TestDerivatives:
    def test_symmetry_at_zero(self):
        assert density_deriv(StableLaw(1.5), 0.0, 1) == pytest.approx(0.0, abs=1e-12)

    def test_first_derivative_fd(self):
        law = StableLaw(1.3)
        h = 1e-4
        fd = (density(law, 2.0 + h) - density(law, 2.0 - h)) / (2.0 * h)
        assert density_deriv(law, 2.0, 1) == pytest.approx(fd, abs=1e-5)

    def test_second_derivative_fd(self):
        law = StableLaw(1.7)
        h = 1e-4
        fd = (density(law, 1.0 + h) - 2.0 * density(law, 1.0) + density(law, 1.0 - h)) / h ** 2
        assert density_deriv(law, 1.0, 2) == pytest.approx(fd, abs=1e-5)

    def test_order_validation(self):
        with pytest.raises(DomainError):
            density_deriv(StableLaw(1.5), 1.0, 3)


class TestHeatKernelBounds:
    def test_margins_small_grid(self):
        rep = verify_hk_bounds(1.5, [-20.0, -5.0, -1.0, -0.5, 0.0, 0.5, 1.0, 5.0, 20.0])
        assert rep.worst() >= -1e-6

    def test_far_point(self):
        law = StableLaw(1.1)
        d1 = abs(density_deriv(law, 100.0, 1))
        assert d1 <= (2.0 * 1.1 + 1.0) / (math.pi * 100.0 ** 2)

    def test_zero_point(self):
        law = StableLaw(1.9)
        assert abs(density_deriv(law, 0.0, 1)) <= 1.0 / (1.9 * math.pi)

    @pytest.mark.parametrize("alpha", [1.1, 1.3, 1.5, 1.7, 1.9])
    def test_all_alphas_coarse(self, alpha):
        grid = np.linspace(-100.0, 100.0, 41)
        assert verify_hk_bounds(alpha, grid).worst() >= -1e-6


class TestCdfQuantile:
    def test_cauchy_cdf(self):
        law = StableLaw(1.0)
        assert cdf(law, 1.0) == pytest.approx(0.75, rel=1e-12)
        assert cdf(law, 0.0) == pytest.approx(0.5, abs=1e-14)

    def test_quantile_median(self):
        assert quantile(StableLaw(1.5), 0.5) == 0.0

    @pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
    def test_round_trip(self, alpha):
        law = StableLaw(alpha)
        for u in np.arange(0.01, 0.995, 0.07):
            x = quantile(law, float(u))
            assert abs(x) <= 50.0 or u in (0.01, 0.99)
            u_back = cdf(law, x)
            x_back = quantile(law, u_back)
            assert x_back == pytest.approx(x, abs=1e-6)

    def test_strictly_increasing(self):
        law = StableLaw(1.5)
        xs = np.linspace(-30, 30, 31)
        fs = [cdf(law, float(x)) for x in xs]
        assert all(b > a for a, b in zip(fs, fs[1:]))

    def test_tail_matches_power_asymptotic(self):
        law = StableLaw(1.5)
        c = d_alpha(1.5) / 1.5
        for x in [50.0, 200.0, 1000.0]:
            rel = abs((1.0 - cdf(law, x)) / (c * x ** -1.5) - 1.0)
            assert rel < 0.05 / x ** 0.5

    def test_quantile_domain(self):
        law = StableLaw(1.5)
        for bad in [0.0, 1.0, -0.1, 1.3]:
            with pytest.raises(DomainError):
                quantile(law, bad)


class TestQuantileTable:
    def test_matches_exact_quantile(self):
        law = StableLaw(1.5)
        tab = QuantileTable(1.5)
        for u in [0.001, 0.2, 0.5, 0.77, 0.999, 0.999999]:
            assert float(tab(np.array([u]))[0]) == pytest.approx(
                quantile(law, u), rel=1e-4, abs=2e-5)

    def test_monotone_vectorized(self):
        tab = QuantileTable(1.3)
        us = np.linspace(1e-9, 1.0 - 1e-9, 2001)
        xs = tab(us)
        assert np.all(np.diff(xs) >= 0.0)

    def test_scale_factor(self):
        t1 = QuantileTable(1.5)
        t2 = QuantileTable(1.5, scale=2.0)
        u = np.array([0.9])
        assert float(t2(u)[0]) == pytest.approx(
            2.0 ** (1.0 / 1.5) * float(t1(u)[0]), rel=1e-12)
