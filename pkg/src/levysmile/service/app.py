"""FastAPI service wrapping the pricing library.

Domain errors map to HTTP 400 with the exception class name in the payload;
validation errors surface as FastAPI's usual 422.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import asymptotics, blackscholes, experiments, fourier, models, montecarlo
from ..errors import LevySmileError
from . import schemas


def _quadrature(settings: schemas.QuadratureSettings | None):
    if settings is None:
        return None
    return fourier.QuadratureConfig(**settings.model_dump())


def create_app() -> FastAPI:
    app = FastAPI(
        title="levysmile",
        description=(
            "Vanilla option pricing under tempered-stable exponential Levy "
            "models and the short-maturity smile asymptotics under the "
            "moving log-strike."
        ),
        version="0.1.0",
    )

    @app.exception_handler(LevySmileError)
    async def _domain_error(request: Request, exc: LevySmileError):
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    # ------------------------------------------------------------ pricing --

    @app.post("/price/call", response_model=schemas.PriceResponse)
    def price_call(req: schemas.PriceRequest):
        value = fourier.price_call_fourier(
            req.model.to_params(), req.s0, req.strike, req.maturity,
            _quadrature(req.quadrature),
        )
        return schemas.PriceResponse(price=value)

    @app.post("/price/put", response_model=schemas.PriceResponse)
    def price_put(req: schemas.PriceRequest):
        value = fourier.price_put_fourier(
            req.model.to_params(), req.s0, req.strike, req.maturity,
            _quadrature(req.quadrature),
        )
        return schemas.PriceResponse(price=value)

    @app.post("/price/linear-call", response_model=schemas.PriceResponse)
    def price_linear(req: schemas.LinearPriceRequest):
        value = fourier.price_linear_call(
            req.model.to_params(), req.log_strike, req.maturity,
            _quadrature(req.quadrature),
        )
        return schemas.PriceResponse(price=value)

    # ------------------------------------------------------- black-scholes --

    @app.post("/bs/price", response_model=schemas.PriceResponse)
    def bs_price(req: schemas.BsPriceRequest):
        fn = blackscholes.bs_call if req.is_call else blackscholes.bs_put
        return schemas.PriceResponse(price=fn(req.maturity, req.log_strike, req.sigma))

    @app.post("/bs/implied-vol", response_model=schemas.ImpliedVolResponse)
    def bs_implied_vol(req: schemas.ImpliedVolRequest):
        quote = blackscholes.OptionQuote(
            t=req.maturity, k=req.log_strike, is_call=req.is_call, price=req.price,
        )
        return schemas.ImpliedVolResponse(implied_vol=blackscholes.implied_vol(quote))

    # ------------------------------------------------------------- model ---

    @app.post("/model/drift", response_model=schemas.DriftResponse)
    def model_drift(spec: schemas.ModelSpec):
        triplet = models.levy_triplet(spec.to_params())
        return schemas.DriftResponse(gamma=triplet.gamma, sigma_sq=triplet.sigma_sq)

    @app.post("/model/activity", response_model=schemas.ActivityResponse)
    def model_activity(spec: schemas.ModelSpec):
        params = spec.to_params()
        constants = models.jump_activity_constants(params)
        bg = models.blumenthal_getoor(params)
        return schemas.ActivityResponse(
            alpha_plus=constants.alpha_plus, alpha_minus=constants.alpha_minus,
            c_plus_tail=constants.c_plus_tail, c_minus_tail=constants.c_minus_tail,
            gamma_plus=constants.gamma_plus, gamma_minus=constants.gamma_minus,
            bg_plus=bg[0], bg_minus=bg[1],
        )

    # -------------------------------------------------------- asymptotics --

    @app.post("/asymptotics/smile-expansion",
              response_model=schemas.SmileExpansionResponse)
    def smile_expansion(req: schemas.SmileExpansionRequest):
        params = req.model.to_params()
        constants = models.jump_activity_constants(params)
        exp = asymptotics.smile_expansion(
            req.maturity, req.theta, constants, params.sigma,
        )
        k_t = asymptotics.moving_strike(req.theta, req.maturity).k_t
        return schemas.SmileExpansionResponse(
            branch=exp.branch,
            decay_index=None if math.isnan(exp.decay_index) else exp.decay_index,
            correction=exp.correction, sigma_t=exp.sigma_t, sigma_0=exp.sigma_0,
            k_t=k_t,
        )

    @app.post("/asymptotics/limit-smile", response_model=schemas.LimitSmileResponse)
    def limit_smile(req: schemas.LimitSmileRequest):
        params = req.model.to_params()
        constants = models.jump_activity_constants(params)
        return schemas.LimitSmileResponse(
            sigma_0=asymptotics.limit_smile(req.theta, params.sigma, constants)
        )

    # -------------------------------------------------------------- monte --

    @app.post("/mc/price", response_model=schemas.McPriceResponse)
    def mc_price(req: schemas.McPriceRequest):
        cfg = montecarlo.SimConfig(
            n_paths=req.n_paths, epsilon=req.epsilon,
            seed=req.seed, antithetic=req.antithetic,
        )
        samples = montecarlo.simulate_increments(req.model.to_params(), req.maturity, cfg)
        est, se = montecarlo.mc_price(
            samples, req.payoff, req.strike, antithetic_pairs=req.antithetic,
        )
        return schemas.McPriceResponse(estimate=est, standard_error=se)

    # -------------------------------------------------------- experiments --

    @app.post("/experiments/table", response_model=schemas.TableResponse)
    def table(req: schemas.TableRequest):
        report = experiments.run_table(tolerance=req.tolerance)
        return schemas.TableResponse(
            rows=[schemas.TableRowModel(**r.__dict__) for r in report.rows],
            tolerance=report.tolerance,
            passed=report.passed,
            report=experiments.format_table_report(report),
        )

    @app.post("/experiments/converge-atm", response_model=schemas.RowsResponse)
    def converge_atm(req: schemas.ConvergeAtmRequest):
        rows = experiments.run_converge_atm(
            req.model.to_params(),
            experiments.log_grid(req.t_min, req.t_max, req.points),
        )
        return schemas.RowsResponse(
            rows=[schemas.ExperimentRowModel(**r.as_record()) for r in rows]
        )

    @app.post("/experiments/converge-otm", response_model=schemas.RowsResponse)
    def converge_otm(req: schemas.ConvergeOtmRequest):
        rule = experiments.StrikeRule(
            kind=req.strike_rule, alpha_prime=req.alpha_prime, theta=req.theta,
        )
        rows = experiments.run_converge_otm(
            req.model.to_params(), rule,
            experiments.log_grid(req.t_min, req.t_max, req.points),
        )
        return schemas.RowsResponse(
            rows=[schemas.ExperimentRowModel(**r.as_record()) for r in rows]
        )

    @app.post("/experiments/smile", response_model=schemas.RowsResponse)
    def smile(req: schemas.SmileRequest):
        result = experiments.run_smile(
            req.model.to_params(), req.thetas, req.t_list,
            expansion_only=req.expansion_only,
        )
        return schemas.RowsResponse(
            rows=[schemas.ExperimentRowModel(**r.as_record()) for r in result.rows],
            skipped_quotes=result.skipped_quotes,
        )

    return app


app = create_app()
