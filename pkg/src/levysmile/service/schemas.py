"""Pydantic request/response models for the pricing service.

ModelSpec mirrors the flat JSON wire format of the model; unknown keys are
rejected everywhere (strict parsing).
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..models import TemperedStableParams


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelSpec(StrictModel):
    c_plus: float = Field(ge=0)
    c_minus: float = Field(ge=0)
    lambda_plus: float
    lambda_minus: float = Field(gt=0)
    alpha_plus: float
    alpha_minus: float
    sigma: float = Field(default=0.0, ge=0)
    r: float = 0.0

    def to_params(self) -> TemperedStableParams:
        return TemperedStableParams(**self.model_dump())

    @classmethod
    def from_params(cls, params: TemperedStableParams) -> "ModelSpec":
        return cls(**params.to_dict())


class QuadratureSettings(StrictModel):
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    damping: Optional[float] = None


class PriceRequest(StrictModel):
    model: ModelSpec
    s0: float = Field(gt=0)
    strike: float = Field(gt=0)
    maturity: float = Field(gt=0)
    quadrature: Optional[QuadratureSettings] = None


class LinearPriceRequest(StrictModel):
    model: ModelSpec
    log_strike: float
    maturity: float = Field(gt=0)
    quadrature: Optional[QuadratureSettings] = None


class PriceResponse(StrictModel):
    price: float


class BsPriceRequest(StrictModel):
    maturity: float = Field(gt=0)
    log_strike: float
    sigma: float = Field(ge=0)
    is_call: bool = True


class ImpliedVolRequest(StrictModel):
    maturity: float = Field(gt=0)
    log_strike: float
    price: float
    is_call: bool = True


class ImpliedVolResponse(StrictModel):
    implied_vol: float


class DriftResponse(StrictModel):
    gamma: float
    sigma_sq: float


class ActivityResponse(StrictModel):
    alpha_plus: float
    alpha_minus: float
    c_plus_tail: float
    c_minus_tail: float
    gamma_plus: Optional[float]
    gamma_minus: Optional[float]
    bg_plus: float
    bg_minus: float


class SmileExpansionRequest(StrictModel):
    model: ModelSpec
    maturity: float = Field(gt=0)
    theta: float


class SmileExpansionResponse(StrictModel):
    branch: Literal["jump_dominated", "diffusion_dominated"]
    decay_index: Optional[float]  # None when the reference price underflows
    correction: float
    sigma_t: float
    sigma_0: float
    k_t: float


class LimitSmileRequest(StrictModel):
    model: ModelSpec
    theta: float


class LimitSmileResponse(StrictModel):
    sigma_0: float


class McPriceRequest(StrictModel):
    model: ModelSpec
    maturity: float = Field(gt=0)
    payoff: Literal["call", "put", "linear_call"]
    strike: float
    n_paths: int = Field(default=100_000, ge=1)
    seed: int = 0
    epsilon: Optional[float] = None
    antithetic: bool = False


class McPriceResponse(StrictModel):
    estimate: float
    standard_error: float


class TableRequest(StrictModel):
    tolerance: float = Field(default=1e-4, gt=0)


class TableRowModel(StrictModel):
    label: str
    option_type: str
    computed: float
    reference: float
    reference_alt: float
    rel_err: float
    rel_err_alt: float
    passed: bool


class TableResponse(StrictModel):
    rows: list[TableRowModel]
    tolerance: float
    passed: bool
    report: str


class ExperimentRowModel(StrictModel):
    t: float
    theta: Optional[float] = None
    k_t: Optional[float] = None
    exact_price: Optional[float] = None
    approx_price: Optional[float] = None
    normalised_price: Optional[float] = None
    implied_vol: Optional[float] = None
    expansion_vol: Optional[float] = None
    limit_value: Optional[float] = None


class RowsResponse(StrictModel):
    rows: list[ExperimentRowModel]
    skipped_quotes: int = 0


class ConvergeAtmRequest(StrictModel):
    model: ModelSpec
    t_min: float = Field(gt=0)
    t_max: float = Field(gt=0)
    points: int = Field(ge=1)


class ConvergeOtmRequest(StrictModel):
    model: ModelSpec
    strike_rule: Literal["power", "moving"]
    alpha_prime: Optional[float] = None
    theta: Optional[float] = None
    t_min: float = Field(gt=0)
    t_max: float = Field(gt=0)
    points: int = Field(ge=1)


class SmileRequest(StrictModel):
    model: ModelSpec
    thetas: list[float]
    t_list: list[float]
    expansion_only: bool = False
