"""Option pricing under tempered-stable exponential Levy models, with the
short-maturity implied-volatility asymptotics under the moving log-strike
k_t = theta * sqrt(t log(1/t))."""

from .blackscholes import (
    OptionQuote,
    bachelier_call,
    bs_call,
    bs_call_expansion,
    bs_put,
    implied_vol,
)
from .fourier import (
    QuadratureConfig,
    forward_call,
    forward_put,
    price_call_fourier,
    price_linear_call,
    price_put_fourier,
)
from .models import (
    JumpActivityConstants,
    LevyTriplet,
    TemperedStableParams,
    blumenthal_getoor,
    characteristic_exponent,
    jump_activity_constants,
    levy_triplet,
    martingale_drift,
)

__all__ = [
    "JumpActivityConstants",
    "LevyTriplet",
    "OptionQuote",
    "QuadratureConfig",
    "TemperedStableParams",
    "bachelier_call",
    "blumenthal_getoor",
    "bs_call",
    "bs_call_expansion",
    "bs_put",
    "characteristic_exponent",
    "forward_call",
    "forward_put",
    "implied_vol",
    "jump_activity_constants",
    "levy_triplet",
    "martingale_drift",
    "price_call_fourier",
    "price_linear_call",
    "price_put_fourier",
]

__version__ = "0.1.0"
