"""Shared fixtures-as-functions for the test suite."""

from qportval.grids import scenario_grid
from qportval.valuation import (
    AssetInput,
    MarketScenario,
    PortfolioSpec,
    portfolio_coefficients,
    value_bounds,
)


def toy_asset(**overrides) -> AssetInput:
    """Zero-rate asset with a 5% long-term spread: closed forms by hand."""
    kwargs = dict(
        name="TOY",
        eps_first_year=100.0,
        risk_premium=0.0,
        discount_y1=0.0,
        discount_y2=0.0,
        discount_longterm_mean=0.05,
        growth_rate=0.0,
    )
    kwargs.update(overrides)
    return AssetInput(**kwargs)


def spx_stable() -> AssetInput:
    return AssetInput(
        name="SPX",
        eps_first_year=171.0,
        risk_premium=0.0473,
        discount_y1=0.0411,
        discount_y2=0.0453,
        discount_longterm_mean=0.0523 - 0.0473,
        growth_rate=0.01,
    )


def stable_market() -> MarketScenario:
    return MarketScenario(
        label="stable",
        growth_rates=(0.0, 0.01),
        delta_e_sigma=0.1,
        delta_r_sigma=0.01,
        delta_e_bound=0.3,
        delta_r_bound=0.03,
    )


def two_asset_pipeline():
    """Market, portfolio, coefficients, scale, and q=2 grid in one call."""
    market = stable_market()
    spec = PortfolioSpec(
        assets=(toy_asset(), spx_stable()), holdings=(0.4, 1.2), market_value=5000.0
    )
    coeffs = portfolio_coefficients(spec)
    scale = value_bounds(spec, coeffs, market)
    grid = scenario_grid(market, bits=2)
    return market, spec, coeffs, scale, grid
