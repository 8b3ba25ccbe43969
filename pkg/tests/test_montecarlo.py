import math

import numpy as np
import pytest

from levysmile.blackscholes import bs_call
from levysmile.errors import InvalidCutoff, InvalidInput
from levysmile.fourier import forward_call, price_linear_call
from levysmile.models import TemperedStableParams, characteristic_exponent
from levysmile.montecarlo import (
    SimConfig,
    mc_price,
    resolve_epsilon,
    simulate_increments,
)

FAST = SimConfig(n_paths=200_000, seed=101)


class TestConfig:
    def test_cutoff_validation(self):
        with pytest.raises(InvalidCutoff):
            SimConfig(epsilon=1.0)
        with pytest.raises(InvalidCutoff):
            SimConfig(epsilon=-0.1)
        with pytest.raises(InvalidInput):
            SimConfig(n_paths=0)
        with pytest.raises(InvalidInput):
            SimConfig(seed=-1)

    def test_epsilon_auto_shrink(self, symmetric_15):
        t = 0.01
        eps = resolve_epsilon(symmetric_15, t, None)
        from levysmile.models import truncated_second_moment

        s2 = 2 * truncated_second_moment(1.0, 3.0, 1.5, eps)
        assert math.sqrt(t * s2) / eps >= 10.0
        # a larger requested cutoff is shrunk, a compliant one is kept
        assert resolve_epsilon(symmetric_15, t, 0.5) == eps
        assert resolve_epsilon(symmetric_15, t, eps / 3) == eps / 3
        # shorter horizons force smaller cutoffs
        assert resolve_epsilon(symmetric_15, 1e-4, None) < eps

    def test_tail_inversion_accuracy(self):
        from levysmile.models import tail_mass
        from levysmile.montecarlo import _SideSampler

        sampler = _SideSampler(1.0, 3.0, 1.5, 0.01)
        u = np.geomspace(1e-12, 1.0 - 1e-12, 2000)
        x = sampler.sample(u)
        back = np.asarray(tail_mass(1.0, 3.0, 1.5, x)) / sampler.intensity
        assert np.max(np.abs(back - u) / u) < 1e-10


class TestDistribution:
    def test_pure_diffusion_draws_are_gaussian(self, pure_diffusion):
        s = simulate_increments(pure_diffusion, 0.5, FAST)
        n = len(s)
        assert s.var(ddof=1) == pytest.approx(0.04 * 0.5, rel=0.02)
        assert s.mean() == pytest.approx(-0.02 * 0.5, abs=4 * 0.2 * math.sqrt(0.5 / n))
        # standardised fourth moment of a Gaussian is 3
        z = (s - s.mean()) / s.std()
        assert np.mean(z ** 4) == pytest.approx(3.0, abs=0.1)

    def test_martingale_property(self, symmetric_15):
        s = simulate_increments(symmetric_15, 0.01, SimConfig(n_paths=400_000, seed=7))
        growth = np.exp(s)
        se = growth.std(ddof=1) / math.sqrt(len(growth))
        assert abs(growth.mean() - 1.0) < 4 * se

    def test_martingale_property_with_rate(self, table_row3):
        s = simulate_increments(table_row3, 0.25, SimConfig(n_paths=400_000, seed=8))
        growth = np.exp(s)
        se = growth.std(ddof=1) / math.sqrt(len(growth))
        assert abs(growth.mean() - math.exp(0.025)) < 4 * se

    def test_variance_matches_exponent_curvature(self, symmetric_15):
        # Var X_t = -psi''(0) t, with psi'' by central finite differences
        t = 0.01
        s = simulate_increments(symmetric_15, t, SimConfig(n_paths=400_000, seed=9))
        h = 1e-4
        psi2 = (
            characteristic_exponent(symmetric_15, h)
            - 2.0 * characteristic_exponent(symmetric_15, 0.0)
            + characteristic_exponent(symmetric_15, -h)
        ) / h ** 2
        target = -psi2.real * t
        var = s.var(ddof=1)
        # SE of the sample variance via the fourth moment
        m4 = np.mean((s - s.mean()) ** 4)
        se = math.sqrt((m4 - var ** 2) / len(s))
        assert abs(var - target) < 4 * se


class TestPricing:
    def test_far_strike_zero(self, symmetric_15):
        s = simulate_increments(symmetric_15, 0.01, SimConfig(n_paths=10_000, seed=1))
        est, se = mc_price(s, "call", math.exp(5.0))
        assert (est, se) == (0.0, 0.0)

    def test_diffusion_only_vs_bs(self, pure_diffusion):
        s = simulate_increments(pure_diffusion, 1.0, SimConfig(n_paths=400_000, seed=2))
        est, se = mc_price(s, "call", 1.0)
        assert abs(est - bs_call(1.0, 0.0, 0.2)) <= 3 * se

    def test_alpha18_vs_fourier(self, table_row3):
        s = simulate_increments(table_row3, 0.25, SimConfig(n_paths=400_000, seed=3))
        est, se = mc_price(s, "call", 1.0)
        ref = forward_call(table_row3, 0.25, 0.0)
        assert abs(est - ref) <= 3 * se

    def test_put_vs_fourier(self, symmetric_15):
        from levysmile.fourier import forward_put

        s = simulate_increments(symmetric_15, 0.01, SimConfig(n_paths=400_000, seed=4))
        est, se = mc_price(s, "put", math.exp(-0.05))
        ref = forward_put(symmetric_15, 0.01, -0.05)
        assert abs(est - ref) <= 3 * se

    def test_linear_payoff_vs_fourier(self, symmetric_15):
        s = simulate_increments(symmetric_15, 1e-4, SimConfig(n_paths=400_000, seed=5))
        est, se = mc_price(s, "linear_call", 0.0)
        ref = price_linear_call(symmetric_15, 0.0, 1e-4)
        assert abs(est - ref) <= 3 * se

    def test_unknown_payoff(self, symmetric_15):
        s = simulate_increments(symmetric_15, 0.01, SimConfig(n_paths=100, seed=6))
        with pytest.raises(InvalidInput):
            mc_price(s, "straddle", 1.0)


class TestDeterminism:
    def test_bit_identical(self, symmetric_15):
        a = simulate_increments(symmetric_15, 0.01, SimConfig(n_paths=30_000, seed=77))
        b = simulate_increments(symmetric_15, 0.01, SimConfig(n_paths=30_000, seed=77))
        assert np.array_equal(a, b)

    def test_worker_count_invariance(self, symmetric_15, monkeypatch):
        cfg = SimConfig(n_paths=50_000, seed=78)
        monkeypatch.setenv("LEVY_SMILE_THREADS", "1")
        a = simulate_increments(symmetric_15, 0.01, cfg)
        monkeypatch.setenv("LEVY_SMILE_THREADS", "4")
        b = simulate_increments(symmetric_15, 0.01, cfg)
        assert np.array_equal(a, b)

    def test_seed_changes_stream(self, symmetric_15):
        a = simulate_increments(symmetric_15, 0.01, SimConfig(n_paths=1_000, seed=1))
        b = simulate_increments(symmetric_15, 0.01, SimConfig(n_paths=1_000, seed=2))
        assert not np.array_equal(a, b)


class TestCutoffRobustness:
    def test_halving_epsilon_leaves_estimate_unbiased(self, symmetric_15):
        # both cutoffs must agree with the Fourier value within 3 SE, and
        # with each other within the 3 sqrt(2) SE band of two independent
        # estimates of the same quantity
        t = 0.01
        ref = forward_call(symmetric_15, t, 0.02)
        base_eps = resolve_epsilon(symmetric_15, t, None)
        p = []
        for eps in (base_eps, base_eps / 2):
            s = simulate_increments(
                symmetric_15, t, SimConfig(n_paths=400_000, seed=55, epsilon=eps)
            )
            est, se = mc_price(s, "call", math.exp(0.02))
            assert abs(est - ref) <= 3 * se
            p.append((est, se))
        assert abs(p[0][0] - p[1][0]) <= 3 * math.sqrt(2) * max(p[0][1], p[1][1])


class TestAntithetic:
    def test_reproducible_and_unbiased(self, symmetric_15):
        cfg = SimConfig(n_paths=200_000, seed=21, antithetic=True)
        s = simulate_increments(symmetric_15, 0.01, cfg)
        assert np.array_equal(s, simulate_increments(symmetric_15, 0.01, cfg))
        est, se = mc_price(s, "call", 1.0, antithetic_pairs=True)
        ref = forward_call(symmetric_15, 0.01, 0.0)
        assert abs(est - ref) <= 4 * se

    def test_pairing_needs_even_count(self, symmetric_15):
        s = simulate_increments(symmetric_15, 0.01, SimConfig(n_paths=101, seed=1))
        with pytest.raises(InvalidInput):
            mc_price(s, "call", 1.0, antithetic_pairs=True)
