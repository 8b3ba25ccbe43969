import json
import math

import numpy as np
import pytest
from scipy.integrate import quad

from levysmile.errors import (
    FrequencyOutOfStrip,
    InvalidInput,
    MomentConditionFailed,
)
from levysmile.models import (
    TemperedStableParams,
    blumenthal_getoor,
    characteristic_exponent,
    gamma_negative,
    jump_activity_constants,
    levy_triplet,
    martingale_drift,
    tail_mass,
)

# seeded grid of valid models for the property checks
MODEL_GRID = [
    TemperedStableParams(1.0, 1.0, 3.0, 3.0, 1.5, 1.5, 0.0, 0.0),
    TemperedStableParams(1.0, 1.0, 3.0, 3.0, 0.5, 0.5, 0.0, 0.0),
    TemperedStableParams(0.01, 0.01, 3.0, 3.0, 1.5, 1.5, 0.2, 0.0),
    TemperedStableParams(1.0, 1.0, 9.2, 8.8, 1.8, 1.8, 0.0, 0.10),
    TemperedStableParams(16.97, 16.97, 29.97, 7.08, 0.6442, 0.6442, 0.0, 0.06),
    TemperedStableParams(0.42, 0.42, 191.2, 4.37, 1.0102, 1.0102, 0.0, 0.06),
    TemperedStableParams(0.5, 2.0, 4.0, 1.5, 1.2, 0.7, 0.1, 0.03),
    TemperedStableParams(0.0, 0.0, 3.0, 3.0, 1.5, 1.5, 0.2, 0.06),
]


class TestValidation:
    def test_degenerate_model_rejected(self):
        with pytest.raises(InvalidInput):
            TemperedStableParams(0.0, 0.0, 3.0, 3.0, 1.5, 1.5, sigma=0.0)

    def test_lambda_plus_must_exceed_one(self):
        with pytest.raises(MomentConditionFailed):
            TemperedStableParams(1.0, 1.0, 1.0, 3.0, 1.5, 1.5)

    def test_alpha_one_excluded(self):
        with pytest.raises(InvalidInput):
            TemperedStableParams(1.0, 1.0, 3.0, 3.0, 1.0, 1.5)
        with pytest.raises(InvalidInput):
            TemperedStableParams(1.0, 1.0, 3.0, 3.0, 1.5, 1.0 + 1e-8)

    def test_negative_scales_rejected(self):
        with pytest.raises(InvalidInput):
            TemperedStableParams(-1.0, 1.0, 3.0, 3.0, 1.5, 1.5)

    def test_gamma_negative_near_pole(self):
        with pytest.raises(InvalidInput):
            gamma_negative(1.0 + 1e-8)
        # sanity: Gamma(-0.5) = -2 sqrt(pi)
        assert gamma_negative(0.5) == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-14)


class TestSerialisation:
    def test_round_trip(self, symmetric_15):
        again = TemperedStableParams.from_json(symmetric_15.to_json())
        assert again == symmetric_15

    def test_unknown_keys_rejected(self, symmetric_15):
        data = json.loads(symmetric_15.to_json())
        data["mystery"] = 1.0
        with pytest.raises(InvalidInput, match="unknown"):
            TemperedStableParams.from_dict(data)

    def test_missing_keys_rejected(self):
        with pytest.raises(InvalidInput, match="missing"):
            TemperedStableParams.from_dict({"c_plus": 1.0})

    def test_non_numeric_values_rejected(self, symmetric_15):
        data = symmetric_15.to_dict()
        data["sigma"] = "lots"
        with pytest.raises(InvalidInput, match="numeric"):
            TemperedStableParams.from_dict(data)


class TestCharacteristicExponent:
    def test_pure_diffusion_value(self, pure_diffusion):
        # Brownian exponent i u gamma - sigma^2 u^2 / 2 with gamma = -sigma^2/2
        psi = characteristic_exponent(pure_diffusion, 1.0)
        assert psi == pytest.approx(-0.02 - 0.02j, abs=1e-15)

    def test_zero_frequency(self, symmetric_15):
        assert characteristic_exponent(symmetric_15, 0.0) == 0.0

    @pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
    def test_martingale_condition_against_quadrature(self, symmetric_15):
        # independent oracle: psi(-i) = gamma + int (e^x - 1 - x 1{|x|<=1}) nu(dx)
        # (QUADPACK flags roundoff at the kink; the value is still good to 1e-12)
        c, lam, alpha = 1.0, 3.0, 1.5
        pos = quad(
            lambda x: (np.expm1(x) - x * (x <= 1.0)) * c * np.exp(-lam * x) * x ** (-1 - alpha),
            0.0, 60.0, epsabs=1e-15, epsrel=1e-13, limit=800, points=[1.0],
        )[0]
        neg = quad(
            lambda x: (np.expm1(-x) + x * (x <= 1.0)) * c * np.exp(-lam * x) * x ** (-1 - alpha),
            0.0, 60.0, epsabs=1e-15, epsrel=1e-13, limit=800, points=[1.0],
        )[0]
        gamma = martingale_drift(symmetric_15)
        psi_minus_i = gamma + pos + neg
        assert psi_minus_i == pytest.approx(symmetric_15.r, abs=1e-10)

    def test_strip_enforced(self, symmetric_15):
        with pytest.raises(FrequencyOutOfStrip):
            characteristic_exponent(symmetric_15, -3.5j)
        with pytest.raises(FrequencyOutOfStrip):
            characteristic_exponent(symmetric_15, 1.0 + 3.0j)

    @pytest.mark.parametrize("model", MODEL_GRID)
    def test_martingale_identity(self, model):
        psi = characteristic_exponent(model, -1j)
        assert abs(psi - model.r) < 1e-10

    @pytest.mark.parametrize("model", MODEL_GRID)
    def test_hermitian_symmetry(self, model):
        u = np.array([0.3, 1.7, 12.0, 153.0])
        lhs = np.conj(characteristic_exponent(model, -u))
        rhs = characteristic_exponent(model, u)
        assert np.allclose(lhs, rhs, rtol=0, atol=1e-12 * (1 + np.abs(rhs).max()))

    @pytest.mark.parametrize("model", MODEL_GRID)
    def test_negative_real_part(self, model):
        u = np.linspace(-300.0, 300.0, 601)
        psi = characteristic_exponent(model, u)
        assert np.all(np.real(psi) <= 1e-12)


class TestMartingaleDrift:
    def test_pure_diffusion_values(self):
        m = TemperedStableParams(0.0, 0.0, 3.0, 3.0, 1.5, 1.5, sigma=0.2, r=0.0)
        assert martingale_drift(m) == pytest.approx(-0.02, abs=1e-15)
        m = TemperedStableParams(0.0, 0.0, 3.0, 3.0, 1.5, 1.5, sigma=0.2, r=0.06)
        assert martingale_drift(m) == pytest.approx(0.04, abs=1e-15)

    @pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
    def test_quadrature_oracle(self, symmetric_15):
        # gamma = r - sigma^2/2 - int (e^x - 1 - x 1{|x|<=1}) nu(dx), by quad
        c, lam, alpha = 1.0, 3.0, 1.5
        pos = quad(
            lambda x: (np.expm1(x) - x * (x <= 1.0)) * c * np.exp(-lam * x) * x ** (-1 - alpha),
            0.0, 60.0, epsabs=1e-15, epsrel=1e-13, limit=800, points=[1.0],
        )[0]
        neg = quad(
            lambda x: (np.expm1(-x) + x * (x <= 1.0)) * c * np.exp(-lam * x) * x ** (-1 - alpha),
            0.0, 60.0, epsabs=1e-15, epsrel=1e-13, limit=800, points=[1.0],
        )[0]
        oracle = -(pos + neg)
        assert martingale_drift(symmetric_15) == pytest.approx(oracle, rel=1e-10)

    def test_triplet_carries_martingale_gamma(self, symmetric_15):
        triplet = levy_triplet(symmetric_15)
        assert triplet.gamma == martingale_drift(symmetric_15)
        assert triplet.sigma_sq == 0.0
        assert triplet.jump_density == symmetric_15


class TestJumpActivity:
    def test_tail_constants_are_c_over_alpha(self, symmetric_15):
        constants = jump_activity_constants(symmetric_15)
        assert constants.c_plus_tail == pytest.approx(2.0 / 3.0, rel=1e-14)
        assert constants.c_minus_tail == pytest.approx(2.0 / 3.0, rel=1e-14)
        assert constants.gamma_plus is None  # infinite variation
        assert constants.gamma_minus is None

    def test_zero_scale_side(self):
        m = TemperedStableParams(0.0, 1.0, 3.0, 3.0, 1.5, 0.7, sigma=0.0)
        constants = jump_activity_constants(m)
        assert constants.c_plus_tail == 0.0
        assert constants.gamma_plus == 0.0

    def test_finite_variation_integral_against_quadrature(self):
        m = TemperedStableParams(1.0, 1.0, 3.0, 3.0, 0.5, 0.5, sigma=0.0)
        constants = jump_activity_constants(m)
        oracle = quad(
            lambda x: np.expm1(x) * np.exp(-3.0 * x) * x ** (-1.5),
            0.0, 60.0, epsabs=1e-15, epsrel=1e-13, limit=800,
        )[0]
        assert oracle == pytest.approx(1.1267, abs=5e-5)
        assert constants.gamma_plus == pytest.approx(oracle, rel=1e-10)
        oracle_minus = quad(
            lambda x: -np.expm1(-x) * np.exp(-3.0 * x) * x ** (-1.5),
            0.0, 60.0, epsabs=1e-15, epsrel=1e-13, limit=800,
        )[0]
        assert constants.gamma_minus == pytest.approx(oracle_minus, rel=1e-10)

    def test_tail_limit_identity_trend(self, symmetric_15):
        # x^alpha nu((x, inf)) -> c/alpha within 1% at x = 1e-4..1e-6, improving
        devs = []
        for x in (1e-4, 1e-5, 1e-6):
            ratio = x ** 1.5 * tail_mass(1.0, 3.0, 1.5, x) / (2.0 / 3.0)
            devs.append(abs(ratio - 1.0))
        assert all(d < 0.01 for d in devs)
        assert devs[2] < devs[0]

    def test_blumenthal_getoor(self, symmetric_15, table_row3):
        assert blumenthal_getoor(symmetric_15) == (1.5, 1.5)
        assert blumenthal_getoor(table_row3) == (1.8, 1.8)
        m = TemperedStableParams(0.0, 1.0, 3.0, 3.0, 1.5, 0.7, sigma=0.0)
        assert blumenthal_getoor(m) == (0.0, 0.7)
        # asymmetric indices pass through per side
        m = TemperedStableParams(1.0, 1.0, 9.2, 7.08, 1.8, 0.6442, sigma=0.0)
        assert blumenthal_getoor(m) == (1.8, 0.6442)
