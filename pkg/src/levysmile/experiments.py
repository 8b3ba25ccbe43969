"""Experiment harness: the validation table and the convergence studies,
emitted as RFC-4180 CSV rows with a fixed header.

Columns are always

    t,theta,k_t,exact_price,approx_price,normalised_price,implied_vol,
    expansion_vol,limit_value

with absent fields left empty.  Grid points are priced through a
deterministic parallel map; ordering follows the grid index, never
completion order, so output bytes are stable across runs and worker counts.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import asymptotics, blackscholes, fourier
from .errors import InvalidInput, PriceOutOfBounds, UncoveredCase
from .models import TemperedStableParams, jump_activity_constants
from .parallel import deterministic_map

CSV_HEADER = (
    "t", "theta", "k_t", "exact_price", "approx_price",
    "normalised_price", "implied_vol", "expansion_vol", "limit_value",
)


@dataclass(frozen=True)
class ExperimentRow:
    """One CSV record; None renders as an empty field."""

    t: float
    theta: float | None = None
    k_t: float | None = None
    exact_price: float | None = None
    approx_price: float | None = None
    normalised_price: float | None = None
    implied_vol: float | None = None
    expansion_vol: float | None = None
    limit_value: float | None = None

    def as_record(self) -> dict:
        return {name: getattr(self, name) for name in CSV_HEADER}


def _fmt(value: float | None) -> str:
    return "" if value is None else format(value, ".12g")


def render_csv(rows: list[ExperimentRow]) -> str:
    """RFC-4180 text ('.' decimal, CRLF, fixed header)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_fmt(getattr(row, name)) for name in CSV_HEADER])
    return buf.getvalue()


def load_default_config(section: str) -> dict:
    text = resources.files("levysmile.data").joinpath("default_experiments.json").read_text()
    return json.loads(text)[section]


def log_grid(t_min: float, t_max: float, points: int) -> list[float]:
    if not 0.0 < t_min <= t_max:
        raise InvalidInput("need 0 < t_min <= t_max")
    if points < 1:
        raise InvalidInput("points must be >= 1")
    if points == 1 or t_min == t_max:
        return [t_max]
    # descending in t, as the convergence plots read left to right in log t
    return [float(x) for x in np.geomspace(t_max, t_min, points)]


# ---------------------------------------------------------------- table ----

@dataclass(frozen=True)
class TableRowResult:
    label: str
    option_type: str
    computed: float
    reference: float
    reference_alt: float
    rel_err: float
    rel_err_alt: float
    passed: bool


@dataclass(frozen=True)
class TableReport:
    rows: list[TableRowResult]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def load_table_fixture() -> dict:
    text = resources.files("levysmile.data").joinpath("table_reference.json").read_text()
    return json.loads(text)


def run_table(fixture: dict | None = None, tolerance: float = 1e-4) -> TableReport:
    """Reprice the validation table and compare against its reference column."""
    fixture = fixture or load_table_fixture()
    rows = fixture.get("rows")
    if not rows:
        raise InvalidInput("table fixture has no rows")

    def one(row: dict) -> TableRowResult:
        model = TemperedStableParams(
            c_plus=row["c"], c_minus=row["c"],
            lambda_plus=row["lambda_plus"], lambda_minus=row["lambda_minus"],
            alpha_plus=row["alpha"], alpha_minus=row["alpha"],
            sigma=row.get("sigma", 0.0), r=row["rate"],
        )
        pricer = (fourier.price_call_fourier if row["option_type"] == "call"
                  else fourier.price_put_fourier)
        value = pricer(model, row["s0"], row["strike"], row["maturity"])
        rel = value / row["reference"] - 1.0
        rel_alt = value / row["reference_alt"] - 1.0
        return TableRowResult(
            label=row.get("label", ""), option_type=row["option_type"],
            computed=value, reference=row["reference"],
            reference_alt=row["reference_alt"], rel_err=rel,
            rel_err_alt=rel_alt, passed=abs(rel) <= tolerance,
        )

    return TableReport(rows=deterministic_map(one, rows), tolerance=tolerance)


def format_table_report(report: TableReport) -> str:
    lines = []
    for r in report.rows:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{status} {r.label}: computed={r.computed:.7f} "
            f"reference={r.reference} (rel {r.rel_err:+.2e}) "
            f"alt={r.reference_alt} (rel {r.rel_err_alt:+.2e})"
        )
    lines.append(
        f"{'PASS' if report.passed else 'FAIL'} overall at tolerance {report.tolerance:g}"
    )
    return "\n".join(lines)


# ---------------------------------------------------------------- ATM ------

def _symmetric_alpha(model: TemperedStableParams) -> float:
    if model.c_plus <= 0.0 or model.c_minus <= 0.0:
        raise InvalidInput("ATM normalisation needs jumps on both sides")
    if model.alpha_plus != model.alpha_minus or model.c_plus != model.c_minus:
        raise InvalidInput("ATM normalisation is defined for symmetric models")
    return model.alpha_plus


def run_converge_atm(model: TemperedStableParams, t_grid: list[float],
                     cfg: fourier.QuadratureConfig | None = None) -> list[ExperimentRow]:
    """Rows of the re-normalised ATM convergence study.

    exact_price is E[(e^{X_t}-1)^+]; normalised_price scales it by t^{-1/alpha};
    approx_price carries the same normalisation of the linear-payoff price
    t^{-1/alpha} E[(X_t)^+]; limit_value is the stable constant.
    """
    alpha = _symmetric_alpha(model)
    limit = asymptotics.atm_stable_constant(model.c_plus, alpha)

    def one(t: float) -> ExperimentRow:
        exact = fourier.forward_call(model, t, 0.0, cfg)
        linear = fourier.price_linear_call(model, 0.0, t, cfg)
        scale = t ** (-1.0 / alpha)
        return ExperimentRow(
            t=t, exact_price=exact, approx_price=scale * linear,
            normalised_price=scale * exact, limit_value=limit,
        )

    return deterministic_map(one, t_grid)


# ---------------------------------------------------------------- OTM ------

@dataclass(frozen=True)
class StrikeRule:
    """k_t = t^(1/alpha_prime) ("power") or theta sqrt(t log 1/t) ("moving")."""

    kind: str
    alpha_prime: float | None = None
    theta: float | None = None

    def __post_init__(self):
        if self.kind == "power":
            if not self.alpha_prime or self.alpha_prime <= 1.0:
                raise InvalidInput("power rule needs alpha_prime > 1")
        elif self.kind == "moving":
            if not self.theta:
                raise InvalidInput("moving rule needs a nonzero theta")
        else:
            raise InvalidInput(f"unknown strike rule {self.kind!r}")

    def k(self, t: float) -> float:
        if self.kind == "power":
            return t ** (1.0 / self.alpha_prime)
        return asymptotics.moving_strike(self.theta, t).k_t


def run_converge_otm(model: TemperedStableParams, rule: StrikeRule,
                     t_grid: list[float],
                     cfg: fourier.QuadratureConfig | None = None) -> list[ExperimentRow]:
    """Rows of the re-normalised OTM convergence study.

    Calls for positive strikes, puts (with the negative-side constants) for a
    negative moving theta.  normalised_price is exact/(t |k_t|^(1-alpha));
    approx_price is the same normalisation of the linear-payoff price and
    limit_value the c/(alpha(alpha-1)) constant of the exercised side.
    """
    put_side = rule.kind == "moving" and (rule.theta or 0.0) < 0.0
    if put_side:
        c_scale, alpha = model.c_minus, model.alpha_minus
    else:
        c_scale, alpha = model.c_plus, model.alpha_plus
    if c_scale <= 0.0:
        raise InvalidInput("the exercised side carries no jumps")
    if alpha <= 1.0:
        raise InvalidInput("normalisation needs an infinite-variation side (alpha > 1)")
    limit = c_scale / (alpha * (alpha - 1.0))

    def one(t: float) -> ExperimentRow:
        k_t = rule.k(t)
        norm = t * abs(k_t) ** (1.0 - alpha)
        if put_side:
            exact = fourier.forward_put(model, t, k_t, cfg)
            linear = fourier.price_linear_put(model, k_t, t, cfg)
        else:
            exact = fourier.forward_call(model, t, k_t, cfg)
            linear = fourier.price_linear_call(model, k_t, t, cfg)
        return ExperimentRow(
            t=t, theta=rule.theta, k_t=k_t, exact_price=exact,
            approx_price=linear / norm, normalised_price=exact / norm,
            limit_value=limit,
        )

    return deterministic_map(one, t_grid)


# ---------------------------------------------------------------- smile ----

@dataclass
class SmileResult:
    rows: list[ExperimentRow] = field(default_factory=list)
    skipped_quotes: int = 0


def run_smile(model: TemperedStableParams, thetas: list[float],
              t_list: list[float], expansion_only: bool = False,
              cfg: fourier.QuadratureConfig | None = None) -> SmileResult:
    """Implied-vol smile rows over (t, theta): exact Fourier implied vol,
    the explicit expansion vol and the limiting smile.

    Quotes whose exact price is numerically at or outside the arbitrage
    bounds are emitted with an empty implied_vol and counted in
    skipped_quotes.
    """
    constants = jump_activity_constants(model)
    grid = [(t, th) for t in t_list for th in thetas]

    def one(point: tuple[float, float]):
        t, theta = point
        k_t = asymptotics.moving_strike(theta, t).k_t
        try:
            expansion = asymptotics.smile_expansion(t, theta, constants, model.sigma)
            expansion_vol = expansion.sigma_t
        except UncoveredCase:
            expansion_vol = None
        try:
            limit = asymptotics.limit_smile(theta, model.sigma, constants)
        except UncoveredCase:
            limit = None
        if expansion_only:
            return ExperimentRow(t=t, theta=theta, k_t=k_t,
                                 expansion_vol=expansion_vol, limit_value=limit), 0
        if theta > 0.0:
            exact = fourier.forward_call(model, t, k_t, cfg)
        else:
            exact = fourier.forward_put(model, t, k_t, cfg)
        skipped = 0
        try:
            if theta > 0.0:
                vol = blackscholes.implied_vol_call(t, k_t, exact)
            else:
                vol = blackscholes.implied_vol_put(t, k_t, exact)
        except PriceOutOfBounds:
            vol, skipped = None, 1
        return ExperimentRow(t=t, theta=theta, k_t=k_t, exact_price=exact,
                             implied_vol=vol, expansion_vol=expansion_vol,
                             limit_value=limit), skipped

    out = SmileResult()
    for row, skipped in deterministic_map(one, grid):
        out.rows.append(row)
        out.skipped_quotes += skipped
    return out
