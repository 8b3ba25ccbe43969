import math

import pytest
from fastapi.testclient import TestClient

from levysmile.blackscholes import bs_call
from levysmile.fourier import price_call_fourier
from levysmile.service import create_app

MODEL = {
    "c_plus": 1.0, "c_minus": 1.0, "lambda_plus": 3.0, "lambda_minus": 3.0,
    "alpha_plus": 1.5, "alpha_minus": 1.5, "sigma": 0.0, "r": 0.0,
}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestHealth:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok"}


class TestPricing:
    def test_call_matches_library(self, client, symmetric_15):
        resp = client.post("/price/call", json={
            "model": MODEL, "s0": 1.0, "strike": 1.05, "maturity": 0.5,
        })
        assert resp.status_code == 200
        ref = price_call_fourier(symmetric_15, 1.0, 1.05, 0.5)
        assert resp.json()["price"] == pytest.approx(ref, rel=1e-12)

    def test_put_parity(self, client):
        call = client.post("/price/call", json={
            "model": MODEL, "s0": 1.0, "strike": 1.1, "maturity": 0.25,
        }).json()["price"]
        put = client.post("/price/put", json={
            "model": MODEL, "s0": 1.0, "strike": 1.1, "maturity": 0.25,
        }).json()["price"]
        assert call - put == pytest.approx(1.0 - 1.1, abs=1e-9)

    def test_linear_call(self, client):
        resp = client.post("/price/linear-call", json={
            "model": MODEL, "log_strike": 0.0, "maturity": 0.01,
        })
        assert resp.status_code == 200
        assert resp.json()["price"] > 0.0

    def test_quadrature_override(self, client):
        resp = client.post("/price/call", json={
            "model": MODEL, "s0": 1.0, "strike": 1.05, "maturity": 0.5,
            "quadrature": {"damping": 2.5},
        })
        assert resp.status_code == 200

    def test_damping_out_of_strip_maps_to_400(self, client):
        resp = client.post("/price/call", json={
            "model": MODEL, "s0": 1.0, "strike": 1.05, "maturity": 0.5,
            "quadrature": {"damping": 5.0},
        })
        assert resp.status_code == 400
        assert resp.json()["error"] == "DampingOutOfStrip"


class TestStrictSchemas:
    def test_unknown_model_key_rejected(self, client):
        bad = dict(MODEL, mystery=1.0)
        resp = client.post("/price/call", json={
            "model": bad, "s0": 1.0, "strike": 1.0, "maturity": 0.5,
        })
        assert resp.status_code == 422

    def test_unknown_request_key_rejected(self, client):
        resp = client.post("/price/call", json={
            "model": MODEL, "s0": 1.0, "strike": 1.0, "maturity": 0.5, "oops": 1,
        })
        assert resp.status_code == 422

    def test_invalid_model_maps_to_400(self, client):
        bad = dict(MODEL, lambda_plus=0.5)
        resp = client.post("/price/call", json={
            "model": bad, "s0": 1.0, "strike": 1.0, "maturity": 0.5,
        })
        assert resp.status_code == 400
        assert resp.json()["error"] == "MomentConditionFailed"


class TestBlackScholes:
    def test_price(self, client):
        resp = client.post("/bs/price", json={
            "maturity": 1.0, "log_strike": 0.0, "sigma": 0.2, "is_call": True,
        })
        assert resp.json()["price"] == pytest.approx(bs_call(1.0, 0.0, 0.2), rel=1e-14)

    def test_implied_vol_round_trip(self, client):
        price = bs_call(1.0, 0.1, 0.25)
        resp = client.post("/bs/implied-vol", json={
            "maturity": 1.0, "log_strike": 0.1, "price": price, "is_call": True,
        })
        assert resp.json()["implied_vol"] == pytest.approx(0.25, abs=1e-10)

    def test_out_of_bounds_price_maps_to_400(self, client):
        resp = client.post("/bs/implied-vol", json={
            "maturity": 1.0, "log_strike": 0.0, "price": 1.5, "is_call": True,
        })
        assert resp.status_code == 400
        assert resp.json()["error"] == "PriceOutOfBounds"


class TestModelEndpoints:
    def test_drift(self, client):
        resp = client.post("/model/drift", json=MODEL)
        assert resp.json()["gamma"] == pytest.approx(-1.030675484626, abs=1e-9)

    def test_activity(self, client):
        data = client.post("/model/activity", json=MODEL).json()
        assert data["c_plus_tail"] == pytest.approx(2.0 / 3.0)
        assert data["gamma_plus"] is None
        assert data["bg_plus"] == 1.5


class TestAsymptoticEndpoints:
    def test_smile_expansion(self, client):
        data = client.post("/asymptotics/smile-expansion", json={
            "model": dict(MODEL, c_plus=0.01, c_minus=0.01),
            "maturity": math.exp(-10.0), "theta": 0.3,
        }).json()
        assert data["branch"] == "jump_dominated"
        assert data["sigma_0"] == pytest.approx(0.3 / math.sqrt(0.5))

    def test_limit_smile(self, client):
        data = client.post("/asymptotics/limit-smile", json={
            "model": dict(MODEL, sigma=0.2), "theta": 0.1,
        }).json()
        assert data["sigma_0"] == pytest.approx(0.2)

    def test_uncovered_case_maps_to_400(self, client):
        resp = client.post("/asymptotics/limit-smile", json={
            "model": dict(MODEL, c_plus=0.0), "theta": 0.3,
        })
        assert resp.status_code == 400
        assert resp.json()["error"] == "UncoveredCase"


class TestMcEndpoint:
    def test_deterministic(self, client):
        req = {
            "model": MODEL, "maturity": 0.01, "payoff": "call",
            "strike": 1.0, "n_paths": 20000, "seed": 5,
        }
        a = client.post("/mc/price", json=req).json()
        b = client.post("/mc/price", json=req).json()
        assert a == b
        assert a["standard_error"] > 0.0


class TestExperimentEndpoints:
    def test_table(self, client):
        data = client.post("/experiments/table", json={"tolerance": 1e-4}).json()
        assert data["passed"] is True
        assert len(data["rows"]) == 3
        assert "PASS" in data["report"]

    def test_converge_atm(self, client):
        data = client.post("/experiments/converge-atm", json={
            "model": MODEL, "t_min": 1e-3, "t_max": 1e-2, "points": 3,
        }).json()
        assert len(data["rows"]) == 3
        assert data["rows"][0]["limit_value"] == pytest.approx(0.991256775753, abs=1e-9)

    def test_converge_otm(self, client):
        data = client.post("/experiments/converge-otm", json={
            "model": MODEL, "strike_rule": "power", "alpha_prime": 1.9,
            "t_min": 1e-3, "t_max": 1e-2, "points": 2,
        }).json()
        assert len(data["rows"]) == 2
        assert data["rows"][0]["limit_value"] == pytest.approx(4.0 / 3.0)

    def test_smile(self, client):
        data = client.post("/experiments/smile", json={
            "model": dict(MODEL, c_plus=0.01, c_minus=0.01, sigma=0.2),
            "thetas": [0.1, 0.3], "t_list": [1e-3], "expansion_only": False,
        }).json()
        assert len(data["rows"]) == 2
        assert data["skipped_quotes"] == 0
        assert data["rows"][0]["implied_vol"] is not None
