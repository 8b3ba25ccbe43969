"""Tempered-stable (CGMY-type) exponential Levy models.

The jump density is

    nu(x) = c_plus * exp(-lambda_plus * x) / x**(1 + alpha_plus)        (x > 0)
          + c_minus * exp(-lambda_minus * |x|) / |x|**(1 + alpha_minus) (x < 0)

plus an independent diffusion of volatility sigma.  The spot S = S0 * exp(X)
is kept risk-neutral: the drift is always the unique value making
E[exp(X_t)] = exp(r * t), never user-supplied.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import quad
from scipy.special import gammainc, gammaincc

from .errors import FrequencyOutOfStrip, InvalidInput, MomentConditionFailed

_MODEL_KEYS = (
    "c_plus", "c_minus", "lambda_plus", "lambda_minus",
    "alpha_plus", "alpha_minus", "sigma", "r",
)

_INTEGER_GUARD = 1e-6


def gamma_negative(alpha: float) -> float:
    """Gamma(-alpha) for alpha in (0, 2) \\ {1}, via the recurrence
    Gamma(-a) = -Gamma(2 - a) / (a * (1 - a))."""
    if min(abs(alpha), abs(alpha - 1.0), abs(alpha - 2.0)) < _INTEGER_GUARD:
        raise InvalidInput(f"alpha={alpha} too close to a pole of Gamma(-alpha)")
    if not 0.0 < alpha < 2.0:
        raise InvalidInput(f"alpha={alpha} outside (0, 2)")
    return -math.gamma(2.0 - alpha) / (alpha * (1.0 - alpha))


def upper_gamma(a: float, z: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Upper incomplete Gamma(a, z) for a in (-2, 1], z > 0, vectorised in z.

    scipy only covers a > 0; negative orders are lifted with
    Gamma(a, z) = (Gamma(a+1, z) - z^a e^{-z}) / a.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise InvalidInput("upper_gamma requires z > 0")
    aa = a
    while aa <= 0.0:
        aa += 1.0
    out = gammaincc(aa, z) * math.gamma(aa)
    while aa > a:
        aa -= 1.0
        out = (out - z ** aa * np.exp(-z)) / aa
    return out if out.shape else float(out)


@dataclass(frozen=True)
class TemperedStableParams:
    """Full model: two one-sided tempered-stable jump components, diffusion
    volatility sigma (per sqrt-year) and continuously compounded rate r."""

    c_plus: float
    c_minus: float
    lambda_plus: float
    lambda_minus: float
    alpha_plus: float
    alpha_minus: float
    sigma: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if self.c_plus < 0.0 or self.c_minus < 0.0:
            raise InvalidInput("jump scales c_plus, c_minus must be >= 0")
        if self.sigma < 0.0:
            raise InvalidInput("sigma must be >= 0")
        if self.c_plus == 0.0 and self.c_minus == 0.0 and self.sigma == 0.0:
            raise InvalidInput("degenerate model: no jumps and no diffusion")
        if self.lambda_plus <= 1.0:
            raise MomentConditionFailed(
                f"lambda_plus={self.lambda_plus} must exceed 1 so that "
                "E[exp(X_t)] exists"
            )
        if self.lambda_minus <= 0.0:
            raise InvalidInput("lambda_minus must be > 0")
        for alpha in (self.alpha_plus, self.alpha_minus):
            if not 0.0 < alpha < 2.0:
                raise InvalidInput(f"alpha={alpha} outside (0, 2)")
            if abs(alpha - 1.0) < _INTEGER_GUARD:
                raise InvalidInput(
                    f"alpha={alpha} too close to 1 (log case is not supported)"
                )
            if min(alpha, 2.0 - alpha) < _INTEGER_GUARD:
                raise InvalidInput(f"alpha={alpha} too close to an endpoint of (0, 2)")

    @property
    def is_pure_diffusion(self) -> bool:
        return self.c_plus == 0.0 and self.c_minus == 0.0

    def to_dict(self) -> dict:
        return {key: getattr(self, key) for key in _MODEL_KEYS}

    @classmethod
    def from_dict(cls, data: dict) -> "TemperedStableParams":
        unknown = set(data) - set(_MODEL_KEYS)
        if unknown:
            raise InvalidInput(f"unknown model keys: {sorted(unknown)}")
        missing = {k for k in _MODEL_KEYS[:6] if k not in data}
        if missing:
            raise InvalidInput(f"missing model keys: {sorted(missing)}")
        try:
            fields = {k: float(v) for k, v in data.items()}
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"model values must be numeric: {exc}")
        return cls(**fields)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TemperedStableParams":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise InvalidInput("model JSON must be a flat object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class LevyTriplet:
    """Characteristic triplet (sigma^2, nu, gamma) under truncation x*1{|x|<=1}.

    gamma is always the martingale-consistent drift; there is no user override.
    """

    sigma_sq: float
    jump_density: TemperedStableParams
    gamma: float


@dataclass(frozen=True)
class JumpActivityConstants:
    """Jump-activity data: stability indices, the small-x tail-limit constants
    c_tail = lim x^alpha * nu((x, inf)) = c / alpha, and the finite-variation
    integrals gamma_+- = int (e^x - 1)^+- nu(dx) (None when alpha >= 1)."""

    alpha_plus: float
    alpha_minus: float
    c_plus_tail: float
    c_minus_tail: float
    gamma_plus: float | None
    gamma_minus: float | None


def _jump_symbol(model: TemperedStableParams, u) -> complex:
    """Fully compensated jump integral int (e^{iux} - 1 - iux) nu(dx).

    Closed form c * Gamma(-alpha) * ((lam -+ iu)^alpha - lam^alpha
    +- iu * alpha * lam^(alpha-1)) per side; valid on the analyticity strip.
    """
    out = 0.0 + 0.0j if np.isscalar(u) else np.zeros(np.shape(u), dtype=complex)
    if model.c_plus > 0.0:
        ap, lp = model.alpha_plus, model.lambda_plus
        out = out + model.c_plus * gamma_negative(ap) * (
            (lp - 1j * u) ** ap - lp ** ap + 1j * u * ap * lp ** (ap - 1.0)
        )
    if model.c_minus > 0.0:
        am, lm = model.alpha_minus, model.lambda_minus
        out = out + model.c_minus * gamma_negative(am) * (
            (lm + 1j * u) ** am - lm ** am - 1j * u * am * lm ** (am - 1.0)
        )
    return out


def compensated_drift(model: TemperedStableParams) -> float:
    """Drift b in X_t = b*t + sigma*W_t + (fully compensated jumps), chosen so
    that E[exp(X_t)] = exp(r*t)."""
    jump_at_minus_i = _jump_symbol(model, -1j)
    return model.r - 0.5 * model.sigma ** 2 - float(np.real(jump_at_minus_i))


def characteristic_exponent(model: TemperedStableParams, u) -> complex:
    """Levy exponent psi with E[exp(i*u*X_t)] = exp(t*psi(u)).

    Accepts complex scalars or arrays.  Im(u) must lie inside the analyticity
    strip (-lambda_plus, lambda_minus); in particular psi(-i) = r by the
    martingale drift.
    """
    im = np.imag(u)
    if np.any(im <= -model.lambda_plus) or np.any(im >= model.lambda_minus):
        raise FrequencyOutOfStrip(
            f"Im(u) must lie in (-{model.lambda_plus}, {model.lambda_minus})"
        )
    b = compensated_drift(model)
    return 1j * u * b - 0.5 * (model.sigma * u) ** 2 + _jump_symbol(model, u)


def tail_mass(c: float, lam: float, alpha: float, x) -> Union[float, np.ndarray]:
    """nu((x, inf)) for one tempered-stable side, x > 0."""
    if c == 0.0:
        return np.zeros(np.shape(x)) if np.ndim(x) else 0.0
    return c * lam ** alpha * upper_gamma(-alpha, lam * np.asarray(x, dtype=float))


def tail_first_moment(c: float, lam: float, alpha: float, x) -> Union[float, np.ndarray]:
    """int_x^inf y nu(dy) for one side, x > 0."""
    if c == 0.0:
        return np.zeros(np.shape(x)) if np.ndim(x) else 0.0
    return c * lam ** (alpha - 1.0) * upper_gamma(1.0 - alpha, lam * np.asarray(x, dtype=float))


def truncated_second_moment(c: float, lam: float, alpha: float, eps: float) -> float:
    """int_0^eps y^2 nu(dy) for one side."""
    if c == 0.0:
        return 0.0
    a = 2.0 - alpha
    return c * lam ** (alpha - 2.0) * math.gamma(a) * float(gammainc(a, lam * eps))


def second_moment_rate(model: TemperedStableParams) -> float:
    """Variance rate Var(X_t)/t = sigma^2 + int x^2 nu(dx)."""
    out = model.sigma ** 2
    for c, lam, alpha in (
        (model.c_plus, model.lambda_plus, model.alpha_plus),
        (model.c_minus, model.lambda_minus, model.alpha_minus),
    ):
        if c > 0.0:
            out += c * math.gamma(2.0 - alpha) * lam ** (alpha - 2.0)
    return out


def martingale_drift(model: TemperedStableParams) -> float:
    """The triplet drift gamma (truncation x*1{|x|<=1}) making psi(-i) = r.

    gamma = b - int_{|x|>1} x nu(dx) with b the fully compensated drift; the
    tail moment has no elementary closed form and is evaluated by quadrature.
    """
    if model.lambda_plus <= 1.0:
        raise MomentConditionFailed("lambda_plus must exceed 1")
    b = compensated_drift(model)
    tail = 0.0
    for c, lam, alpha, sign in (
        (model.c_plus, model.lambda_plus, model.alpha_plus, 1.0),
        (model.c_minus, model.lambda_minus, model.alpha_minus, -1.0),
    ):
        if c > 0.0:
            val, _ = quad(
                lambda x, lam=lam, alpha=alpha: math.exp(-lam * x) * x ** (-alpha),
                1.0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200,
            )
            tail += sign * c * val
    return b - tail


def levy_triplet(model: TemperedStableParams) -> LevyTriplet:
    return LevyTriplet(
        sigma_sq=model.sigma ** 2,
        jump_density=model,
        gamma=martingale_drift(model),
    )


def jump_activity_constants(model: TemperedStableParams) -> JumpActivityConstants:
    """Tail-limit constants c/alpha and, on finite-variation sides (alpha < 1),
    the integrals gamma_+ = int_(0,inf) (e^x - 1) nu(dx) and
    gamma_- = int_(-inf,0) (1 - e^x) nu(dx) in closed form."""

    def one_side(c: float, lam: float, alpha: float, positive: bool):
        c_tail = c / alpha if c > 0.0 else 0.0
        if c == 0.0:
            return c_tail, 0.0
        if alpha >= 1.0:
            return c_tail, None
        if positive:
            g = c * gamma_negative(alpha) * ((lam - 1.0) ** alpha - lam ** alpha)
        else:
            g = -c * gamma_negative(alpha) * ((lam + 1.0) ** alpha - lam ** alpha)
        return c_tail, g

    cpt, gp = one_side(model.c_plus, model.lambda_plus, model.alpha_plus, True)
    cmt, gm = one_side(model.c_minus, model.lambda_minus, model.alpha_minus, False)
    return JumpActivityConstants(
        alpha_plus=model.alpha_plus,
        alpha_minus=model.alpha_minus,
        c_plus_tail=cpt,
        c_minus_tail=cmt,
        gamma_plus=gp,
        gamma_minus=gm,
    )


def blumenthal_getoor(model: TemperedStableParams) -> tuple[float, float]:
    """Blumenthal-Getoor indices of the positive and negative jump parts;
    0 for a side with no jumps."""
    return (
        model.alpha_plus if model.c_plus > 0.0 else 0.0,
        model.alpha_minus if model.c_minus > 0.0 else 0.0,
    )
