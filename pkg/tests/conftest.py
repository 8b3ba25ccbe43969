import pytest

from levysmile.models import TemperedStableParams


@pytest.fixture
def symmetric_15():
    """Tempered-stable benchmark: c=1, lambda=3, alpha=1.5, no diffusion."""
    return TemperedStableParams(
        c_plus=1.0, c_minus=1.0, lambda_plus=3.0, lambda_minus=3.0,
        alpha_plus=1.5, alpha_minus=1.5, sigma=0.0, r=0.0,
    )


@pytest.fixture
def smile_pure_jump():
    """Smile-study model: c=0.01, lambda=3, alpha=1.5, sigma=0."""
    return TemperedStableParams(
        c_plus=0.01, c_minus=0.01, lambda_plus=3.0, lambda_minus=3.0,
        alpha_plus=1.5, alpha_minus=1.5, sigma=0.0, r=0.0,
    )


@pytest.fixture
def smile_with_diffusion():
    """Smile-study model with a diffusion component: sigma=0.2."""
    return TemperedStableParams(
        c_plus=0.01, c_minus=0.01, lambda_plus=3.0, lambda_minus=3.0,
        alpha_plus=1.5, alpha_minus=1.5, sigma=0.2, r=0.0,
    )


@pytest.fixture
def pure_diffusion():
    """sigma=0.2 and no jumps (lambda/alpha are inert placeholders)."""
    return TemperedStableParams(
        c_plus=0.0, c_minus=0.0, lambda_plus=3.0, lambda_minus=3.0,
        alpha_plus=1.5, alpha_minus=1.5, sigma=0.2, r=0.0,
    )


@pytest.fixture
def table_row3():
    """alpha=1.8 benchmark row: c=1, lambda+=9.2, lambda-=8.8, r=0.1."""
    return TemperedStableParams(
        c_plus=1.0, c_minus=1.0, lambda_plus=9.2, lambda_minus=8.8,
        alpha_plus=1.8, alpha_minus=1.8, sigma=0.0, r=0.10,
    )
