"""Black-Scholes pricing on forward units (S0 = 1, zero rates), the
short-maturity call expansion under the moving strike, put-call symmetry,
Bachelier (linear payoff) pricing and robust implied-volatility inversion.

Prices here are forward values: C(t, k) = E[(exp(X_t) - exp(k))^+] with
X_t = sigma * W_t - sigma^2 t / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInput, NoConvergence, PriceOutOfBounds

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

_VOL_LO = 1e-8
_VOL_HI = 5.0
_MAX_ITER = 200


def norm_cdf(x: float) -> float:
    """Standard normal CDF via erfc; keeps full relative accuracy in the far
    lower tail, where short-maturity option values live."""
    return 0.5 * math.erfc(-x / _SQRT2)


def norm_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / _SQRT_2PI


def bs_call(t: float, k: float, sigma: float) -> float:
    """Forward call value N(d+) - e^k N(d-), d+- = -k/(sigma sqrt t) +- sigma sqrt t / 2.

    sigma = 0 returns the intrinsic limit (1 - e^k)^+.
    """
    if t <= 0.0:
        raise InvalidInput("maturity must be positive")
    if sigma < 0.0:
        raise InvalidInput("volatility must be >= 0")
    if sigma == 0.0:
        return max(1.0 - math.exp(k), 0.0)
    sq = sigma * math.sqrt(t)
    d_plus = -k / sq + 0.5 * sq
    d_minus = d_plus - sq
    return norm_cdf(d_plus) - math.exp(k) * norm_cdf(d_minus)


def bs_put(t: float, k: float, sigma: float) -> float:
    """Forward put value e^k N(-d-) - N(-d+); equals e^k * bs_call(t, -k, sigma)."""
    if t <= 0.0:
        raise InvalidInput("maturity must be positive")
    if sigma < 0.0:
        raise InvalidInput("volatility must be >= 0")
    if sigma == 0.0:
        return max(math.exp(k) - 1.0, 0.0)
    sq = sigma * math.sqrt(t)
    d_plus = -k / sq + 0.5 * sq
    d_minus = d_plus - sq
    return math.exp(k) * norm_cdf(-d_minus) - norm_cdf(-d_plus)


def bs_vega(t: float, k: float, sigma: float) -> float:
    if sigma <= 0.0:
        return 0.0
    sq = sigma * math.sqrt(t)
    return norm_pdf(-k / sq + 0.5 * sq) * math.sqrt(t)


def bachelier_call(t: float, k: float, sigma: float) -> float:
    """E[(sigma W_t - k)^+] = sigma sqrt(t) n(k/(sigma sqrt t)) - k N(-k/(sigma sqrt t)).

    Validates the linear-payoff Fourier pricer in the diffusion-only case.
    """
    if t <= 0.0:
        raise InvalidInput("maturity must be positive")
    if sigma < 0.0:
        raise InvalidInput("volatility must be >= 0")
    if sigma == 0.0:
        return max(-k, 0.0)
    s = sigma * math.sqrt(t)
    return s * norm_pdf(k / s) - k * norm_cdf(-k / s)


@dataclass(frozen=True)
class OptionQuote:
    """One vanilla quote in forward units (S0 = 1): maturity t, log-strike k,
    call/put flag and forward price, validated against strict arbitrage bounds."""

    t: float
    k: float
    is_call: bool
    price: float

    def __post_init__(self):
        if self.t <= 0.0:
            raise InvalidInput("maturity must be positive")
        if self.is_call:
            lo, hi = max(1.0 - math.exp(self.k), 0.0), 1.0
        else:
            lo, hi = max(math.exp(self.k) - 1.0, 0.0), math.exp(self.k)
        if not lo < self.price < hi:
            raise PriceOutOfBounds(
                f"{'call' if self.is_call else 'put'} price {self.price} outside "
                f"({lo}, {hi}) at k={self.k}"
            )


def implied_vol(quote: OptionQuote) -> float:
    """Invert the Black-Scholes formula for the quote's volatility.

    Bracketed bisection on [1e-8, 5] down to 1e-4, then safeguarded Newton
    down to a vega-scaled 1e-12 price tolerance; 200 iterations total cap.
    Raises NoConvergence if the cap is exhausted.
    """
    # Work on the call via parity: same implied vol, monotone objective.
    if quote.is_call:
        t, k, target = quote.t, quote.k, quote.price
    else:
        t, k = quote.t, quote.k
        target = quote.price + 1.0 - math.exp(quote.k)

    lo, hi = _VOL_LO, _VOL_HI
    if bs_call(t, k, hi) < target:
        raise NoConvergence(f"price {target} above bs_call at sigma={hi}")
    iterations = 0
    while hi - lo > 1e-4:
        iterations += 1
        if iterations > _MAX_ITER:
            raise NoConvergence("bisection failed to bracket the volatility")
        mid = 0.5 * (lo + hi)
        if bs_call(t, k, mid) < target:
            lo = mid
        else:
            hi = mid

    sigma = 0.5 * (lo + hi)
    # vega-scaled target, floored at the rounding noise of the price formula
    floor = 4e-16 * max(1.0, math.exp(k))
    for _ in range(_MAX_ITER - iterations):
        diff = bs_call(t, k, sigma) - target
        if abs(diff) <= max(1e-12 * bs_vega(t, k, sigma), floor):
            return sigma
        if diff > 0.0:
            hi = min(hi, sigma)
        else:
            lo = max(lo, sigma)
        if hi - lo < 1e-14 * (1.0 + sigma):  # bracket at fp resolution
            return 0.5 * (lo + hi)
        vega = bs_vega(t, k, sigma)
        if vega > 0.0:
            step = sigma - diff / vega
        else:
            step = 0.5 * (lo + hi)
        # fall back to bisection when Newton leaves the bracket
        sigma = step if lo < step < hi else 0.5 * (lo + hi)
    raise NoConvergence("implied volatility iteration cap reached")


def implied_vol_call(t: float, k: float, price: float) -> float:
    """Shorthand: implied volatility of a forward call price."""
    return implied_vol(OptionQuote(t=t, k=k, is_call=True, price=price))


def implied_vol_put(t: float, k: float, price: float) -> float:
    """Shorthand: implied volatility of a forward put price."""
    return implied_vol(OptionQuote(t=t, k=k, is_call=False, price=price))


def bs_call_expansion(t: float, theta: float, sigma: float) -> float:
    """Two-term short-maturity call expansion at the moving strike
    k_t = theta * sqrt(t log(1/t)):

        sigma/sqrt(2 pi) * t^(1/2 + theta^2/(2 sigma^2))
            * [ (sigma^2/theta^2) / log(1/t) - 3 (sigma^4/theta^4) / log^2(1/t) ]
    """
    if not 0.0 < t < math.exp(-1.0):
        raise InvalidInput("maturity must lie in (0, e^-1)")
    if theta == 0.0:
        raise InvalidInput("theta must be nonzero")
    if sigma <= 0.0:
        raise InvalidInput("sigma must be positive")
    ell = math.log(1.0 / t)
    ratio = (sigma / theta) ** 2
    prefactor = sigma / _SQRT_2PI * t ** (0.5 + 0.5 * theta ** 2 / sigma ** 2)
    return prefactor * (ratio / ell - 3.0 * ratio ** 2 / ell ** 2)
