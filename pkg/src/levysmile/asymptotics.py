"""Short-maturity asymptotics under the moving log-strike.

Everything here is closed-form: the moving strike k_t = theta sqrt(t log 1/t),
the price approximations for infinite- and finite-variation jumps, the
implied-volatility expansion driven by the price's decay index, the explicit
smile expansions with their first-order corrections, the limiting smile, and
the at-the-money stable limit.

Maturities are restricted to t < e^-1 so that log(1/t) > 1 and
log log(1/t) > 0; every expansion denominator is then positive.

The price approximations assume the strike family vanishes slowly enough
(k_t must dominate t^{1/a} for some a above the jump indices in the pure-jump
case, and sqrt(t) otherwise).  That is a property of the whole strike curve,
not of a single (t, k) pair, so it is the caller's responsibility; the moving
strike k_t = theta sqrt(t log 1/t) and the power rules t^{1/a'} used by the
experiment harness satisfy it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .blackscholes import bs_call, bs_put
from .errors import ExpansionOutsideDomain, InvalidInput, UncoveredCase
from .models import JumpActivityConstants

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_T_MAX = math.exp(-1.0)

Branch = Literal["jump_dominated", "diffusion_dominated"]


def _check_t(t: float) -> None:
    if not 0.0 < t < _T_MAX:
        raise InvalidInput(f"maturity must lie in (0, e^-1); got {t}")


@dataclass(frozen=True)
class MovingStrike:
    """The renormalised strike coordinate theta and its induced log-strike
    k_t = theta * sqrt(t log(1/t))."""

    theta: float
    t: float
    k_t: float


def moving_strike(theta: float, t: float) -> MovingStrike:
    if theta == 0.0:
        raise InvalidInput("theta must be nonzero")
    _check_t(t)
    k_t = theta * math.sqrt(t * math.log(1.0 / t))
    return MovingStrike(theta=theta, t=t, k_t=k_t)


def decay_index(t: float, x: float) -> float:
    """log(x)/log(t) - log(log(1/t))/log(1/t) for x, t > 0: the power of t
    that x represents, shifted by the loglog correction the implied-vol
    expansion needs."""
    _check_t(t)
    if x <= 0.0:
        raise InvalidInput("decay_index requires a positive argument")
    ell = math.log(1.0 / t)
    return math.log(x) / math.log(t) - math.log(ell) / ell


def infvar_call_approx(t: float, k: float, sigma: float,
                       alpha_plus: float, c_plus_tail: float) -> float:
    """Infinite-variation call approximation:
    bs_call(t, k, sigma) + t k^(1-alpha_+) c_+/(alpha_+ - 1),
    with c_+ the small-x tail-limit constant."""
    if not 1.0 < alpha_plus < 2.0:
        raise InvalidInput("alpha_plus must lie in (1, 2)")
    if t <= 0.0 or k <= 0.0:
        raise InvalidInput("requires t > 0 and k > 0")
    if c_plus_tail < 0.0:
        raise InvalidInput("c_plus_tail must be >= 0")
    return bs_call(t, k, sigma) + t * k ** (1.0 - alpha_plus) * c_plus_tail / (alpha_plus - 1.0)


def infvar_put_approx(t: float, k: float, sigma: float,
                      alpha_minus: float, c_minus_tail: float) -> float:
    """Mirror of the call: the put struck at e^{-k} is approximated by
    bs_put(t, -k, sigma) + t k^(1-alpha_-) c_-/(alpha_- - 1)."""
    if not 1.0 < alpha_minus < 2.0:
        raise InvalidInput("alpha_minus must lie in (1, 2)")
    if t <= 0.0 or k <= 0.0:
        raise InvalidInput("requires t > 0 and k > 0")
    if c_minus_tail < 0.0:
        raise InvalidInput("c_minus_tail must be >= 0")
    return bs_put(t, -k, sigma) + t * k ** (1.0 - alpha_minus) * c_minus_tail / (alpha_minus - 1.0)


def finvar_call_approx(t: float, k: float, sigma: float, gamma_plus: float) -> float:
    """Finite-variation call approximation: bs_call(t, k, sigma) + t gamma_+."""
    if t <= 0.0:
        raise InvalidInput("maturity must be positive")
    if gamma_plus < 0.0 or not math.isfinite(gamma_plus):
        raise InvalidInput("gamma_plus must be finite and >= 0")
    return bs_call(t, k, sigma) + t * gamma_plus


def finvar_put_approx(t: float, k: float, sigma: float, gamma_minus: float) -> float:
    """Finite-variation put approximation: bs_put(t, -k, sigma) + t gamma_-."""
    if t <= 0.0:
        raise InvalidInput("maturity must be positive")
    if gamma_minus < 0.0 or not math.isfinite(gamma_minus):
        raise InvalidInput("gamma_minus must be finite and >= 0")
    return bs_put(t, -k, sigma) + t * gamma_minus


def implied_vol_from_price_expansion(t: float, theta: float, price: float) -> float:
    """Implied-vol expansion in terms of q = 2 * decay_index(t, price) - 1:

        |theta|/sqrt(q) + |theta| log(q^{3/2} sqrt(2 pi)/|theta|) / (q^{3/2} log(1/t)).

    Requires q > 0 (the price must vanish faster than sqrt(t)), else
    ExpansionOutsideDomain.
    """
    if theta == 0.0:
        raise InvalidInput("theta must be nonzero")
    if price <= 0.0:
        raise InvalidInput("price must be positive")
    _check_t(t)
    g = 2.0 * decay_index(t, price) - 1.0
    if g <= 0.0:
        raise ExpansionOutsideDomain(
            f"2 * decay_index - 1 = {g:.6f} <= 0; price decays too slowly"
        )
    a = abs(theta)
    g32 = g ** 1.5
    return a / math.sqrt(g) + a * math.log(g32 * _SQRT_2PI / a) / (g32 * math.log(1.0 / t))


@dataclass(frozen=True)
class SmileExpansion:
    """Result of the explicit smile expansion at one (t, theta): the branch
    taken, the decay index of the dominant price term, the first-order
    correction, the expanded vol and its t->0 limit."""

    t: float
    theta: float
    branch: Branch
    decay_index: float
    correction: float
    sigma_t: float
    sigma_0: float


def _require_t_theta(t: float, theta: float) -> None:
    if theta == 0.0:
        raise InvalidInput("theta must be nonzero")
    _check_t(t)


def _side(theta: float, constants: JumpActivityConstants):
    """Constants of the side the moving strike exercises: (alpha, c_tail,
    gamma, alpha_other)."""
    if theta > 0.0:
        return (constants.alpha_plus, constants.c_plus_tail,
                constants.gamma_plus, constants.alpha_minus,
                constants.c_minus_tail)
    return (constants.alpha_minus, constants.c_minus_tail,
            constants.gamma_minus, constants.alpha_plus,
            constants.c_plus_tail)


def smile_expansion(t: float, theta: float,
                    constants: JumpActivityConstants,
                    sigma: float) -> SmileExpansion:
    """Explicit smile expansion sigma_t(theta).

    Infinite-variation side (alpha > 1, c_tail > 0):
        sigma_t = (|theta|/sqrt(2-alpha)) (1 + I)  if |theta| >= sigma sqrt(2-alpha)
        sigma_t = sigma                            otherwise,
        I = (3-alpha)/(2(2-alpha)) loglog(1/t)/log(1/t)
            + log((2-alpha)^{3/2} c_tail sqrt(2 pi) / (|theta|^alpha (alpha-1)))
              / ((2-alpha) log(1/t)).

    Finite-variation jump part (both alphas < 1, side gamma > 0):
        sigma_t = |theta| (1 + F)  if |theta| >= sigma, else sigma,
        F = loglog(1/t)/log(1/t) + log(gamma sqrt(2 pi)/|theta|)/log(1/t).

    The boundary case |theta| = sigma * (slope) is assigned to the jump
    branch.  Raises UncoveredCase when the exercised side carries no jump
    activity, or when the sides mix finite and infinite variation in a way
    the expansion does not cover.
    """
    _require_t_theta(t, theta)
    if sigma < 0.0:
        raise InvalidInput("sigma must be >= 0")
    alpha, c_tail, gamma_side, alpha_other, c_other = _side(theta, constants)
    a = abs(theta)
    ell = math.log(1.0 / t)
    ll = math.log(ell)
    k_t = moving_strike(theta, t).k_t

    if alpha > 1.0 and c_tail > 0.0:
        # infinite-variation branch
        slope = 1.0 / math.sqrt(2.0 - alpha)
        sigma_0_jump = a * slope
        if a >= sigma * math.sqrt(2.0 - alpha):
            correction = (
                (3.0 - alpha) / (2.0 * (2.0 - alpha)) * ll / ell
                + math.log(
                    (2.0 - alpha) ** 1.5 * c_tail * _SQRT_2PI
                    / (a ** alpha * (alpha - 1.0))
                ) / ((2.0 - alpha) * ell)
            )
            sigma_t = sigma_0_jump * (1.0 + correction)
            price_hat = t * abs(k_t) ** (1.0 - alpha) * c_tail / (alpha - 1.0)
            branch: Branch = "jump_dominated"
        else:
            correction = 0.0
            sigma_t = sigma
            price_hat = bs_call(t, abs(k_t), sigma)
            branch = "diffusion_dominated"
        j_val = decay_index(t, price_hat) if price_hat > 0.0 else math.nan  # fp underflow
        return SmileExpansion(
            t=t, theta=theta, branch=branch, decay_index=j_val,
            correction=correction, sigma_t=sigma_t,
            sigma_0=max(sigma_0_jump, sigma),
        )

    if alpha < 1.0 and gamma_side is not None and gamma_side > 0.0:
        # finite-variation branch requires the whole jump part of finite variation
        if c_other > 0.0 and alpha_other >= 1.0:
            raise UncoveredCase(
                "mixed finite/infinite variation sides are not covered"
            )
        if a >= sigma:
            correction = ll / ell + math.log(gamma_side * _SQRT_2PI / a) / ell
            sigma_t = a * (1.0 + correction)
            price_hat = t * gamma_side
            branch = "jump_dominated"
        else:
            correction = 0.0
            sigma_t = sigma
            price_hat = bs_call(t, abs(k_t), sigma)
            branch = "diffusion_dominated"
        j_val = decay_index(t, price_hat) if price_hat > 0.0 else math.nan  # fp underflow
        return SmileExpansion(
            t=t, theta=theta, branch=branch, decay_index=j_val,
            correction=correction, sigma_t=sigma_t, sigma_0=max(a, sigma),
        )

    raise UncoveredCase(
        f"no expansion formula: side alpha={alpha}, c_tail={c_tail}, "
        f"gamma={gamma_side}"
    )


def limit_smile(theta: float, sigma: float,
                constants: JumpActivityConstants) -> float:
    """Limiting smile sigma_0(theta) = max of the diffusion level and the
    exercised jump wing:

        wing = |theta| / sqrt(1 - (alpha - 1)^+),

    with (alpha - 1)^+ = 0 on a finite-variation side (wing slope 1).
    Raises UncoveredCase when neither diffusion nor relevant-side jumps exist.
    """
    if theta == 0.0:
        raise InvalidInput("theta must be nonzero")
    if sigma < 0.0:
        raise InvalidInput("sigma must be >= 0")
    alpha, c_tail, gamma_side, _, _ = _side(theta, constants)
    terms = []
    if sigma > 0.0:
        terms.append(sigma)
    side_active = (alpha > 1.0 and c_tail > 0.0) or (
        alpha < 1.0 and gamma_side is not None and gamma_side > 0.0
    )
    if side_active:
        terms.append(abs(theta) / math.sqrt(1.0 - max(alpha - 1.0, 0.0)))
    if not terms:
        raise UncoveredCase(
            "no diffusion and no jump activity on the exercised side"
        )
    return max(terms)


def atm_stable_constant(c: float, alpha: float) -> float:
    """The at-the-money limit constant

        C = (2c)^{1/alpha}/pi * Gamma(1 - 1/alpha)
            * (-Gamma(alpha) cos(pi alpha / 2))^{1/alpha},

    for a symmetric jump density with scale c and index alpha in (1, 2)."""
    if not 1.0 < alpha < 2.0:
        raise InvalidInput("alpha must lie in (1, 2)")
    if c <= 0.0:
        raise InvalidInput("c must be positive")
    base = -math.gamma(alpha) * math.cos(0.5 * math.pi * alpha)
    return (2.0 * c) ** (1.0 / alpha) / math.pi * math.gamma(1.0 - 1.0 / alpha) * base ** (1.0 / alpha)


def atm_price_approx(t: float, c: float, alpha: float) -> float:
    """t^{1/alpha} * atm_stable_constant(c, alpha)."""
    if t <= 0.0:
        raise InvalidInput("maturity must be positive")
    return t ** (1.0 / alpha) * atm_stable_constant(c, alpha)
