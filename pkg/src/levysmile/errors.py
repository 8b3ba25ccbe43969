"""Exception hierarchy for the levysmile package."""


class LevySmileError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(LevySmileError, ValueError):
    """An argument is outside the domain of the operation."""


class FrequencyOutOfStrip(LevySmileError):
    """Complex frequency lies outside the analyticity strip of the exponent."""


class MomentConditionFailed(LevySmileError):
    """The exponential moment needed for the martingale drift does not exist."""


class PriceOutOfBounds(LevySmileError):
    """Option price is at or outside the strict arbitrage bounds."""


class NoConvergence(LevySmileError):
    """Root finding failed to converge within the iteration cap."""


class DampingOutOfStrip(LevySmileError):
    """Fourier damping parameter lies outside the admissible strip."""


class QuadratureNoConvergence(LevySmileError):
    """Adaptive integration hit the subdivision cap before meeting tolerances."""


class ExpansionOutsideDomain(LevySmileError):
    """Price is outside the admissible region of the implied-vol expansion."""


class UncoveredCase(LevySmileError):
    """The requested asymptotic regime has no formula; refusing to guess."""


class InvalidCutoff(LevySmileError):
    """Small-jump cutoff is invalid for the simulation scheme."""
