"""Earnings-based intrinsic-value model for an index portfolio.

A modified growing-perpetuity (Gordon-Shapiro style) model prices each asset
from its forecast earnings per share: one explicit year, a second year derived
from the growth rate, and a maturity term discounted at a long-term rate.  The
long-term earnings and discount rate carry relative stochastic shifts
``delta_e`` and ``delta_r``; a first-order expansion in those shifts gives
per-asset coefficients ``(a, b, c)`` such that

    portfolio value  ~  sum_j holdings_j * (a_j + b_j*delta_e + c_j*delta_r).

Portfolio values are affinely rescaled to [0, 1] between the extreme corner
values of the shift box so they can be written into a qubit amplitude.

All rates are plain decimal fractions here; scenario files carry percentages
and are converted once at parse time (see :mod:`qportval.scenario`).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import DegenerateDenominator, DegenerateScale, LengthMismatch

# Relative slack (vs. scale span) tolerated silently when clamping rescaled
# values; anything larger indicates a value genuinely outside the scale.
_CLAMP_SLACK = 1e-9


@dataclass(frozen=True)
class AssetInput:
    """Per-asset model inputs, all rates as decimal fractions.

    ``discount_longterm_mean`` is the economy-wide mean long-term rate; the
    asset's own long-term discount rate is that mean (shifted by ``delta_r``)
    plus ``risk_premium``.
    """

    name: str
    eps_first_year: float
    risk_premium: float
    discount_y1: float
    discount_y2: float
    discount_longterm_mean: float
    growth_rate: float

    def __post_init__(self) -> None:
        for label, rate in (
            ("discount_y1", self.discount_y1),
            ("discount_y2", self.discount_y2),
            ("discount_longterm_mean", self.discount_longterm_mean),
        ):
            if rate <= -1.0:
                raise DegenerateDenominator(
                    f"{self.name}: {label}={rate} must be > -1"
                )
        if self.perpetuity_denominator == 0.0:
            raise DegenerateDenominator(
                f"{self.name}: long-term rate equals growth rate, perpetuity diverges"
            )

    @property
    def perpetuity_denominator(self) -> float:
        """Mean long-term spread over growth: r_mean + premium - growth."""
        return self.discount_longterm_mean + self.risk_premium - self.growth_rate


@dataclass(frozen=True)
class PortfolioSpec:
    """Ordered assets with share counts and the reference market value."""

    assets: tuple[AssetInput, ...]
    holdings: tuple[float, ...]
    market_value: float

    def __post_init__(self) -> None:
        if len(self.assets) != len(self.holdings):
            raise LengthMismatch(
                f"{len(self.assets)} assets vs {len(self.holdings)} holdings"
            )
        if any(w < 0 for w in self.holdings):
            raise ValueError("holdings must be non-negative")


@dataclass(frozen=True)
class MarketScenario:
    """Market-trend parameters: per-asset growth plus shift distributions."""

    label: str
    growth_rates: tuple[float, ...]
    delta_e_sigma: float
    delta_r_sigma: float
    delta_e_bound: float
    delta_r_bound: float

    def __post_init__(self) -> None:
        if self.delta_e_sigma <= 0 or self.delta_r_sigma <= 0:
            raise ValueError(f"{self.label}: sigmas must be positive")
        if self.delta_e_bound <= 0 or self.delta_r_bound <= 0:
            raise ValueError(f"{self.label}: bounds must be positive")


@dataclass(frozen=True)
class LinearCoefficients:
    """Per-asset first-order coefficients of the value model."""

    a: tuple[float, ...]
    b: tuple[float, ...]
    c: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (len(self.a) == len(self.b) == len(self.c)):
            raise LengthMismatch("coefficient lists differ in length")


@dataclass(frozen=True)
class ValueScale:
    """Affine [0, 1] rescaling window in euros."""

    v_min: float
    v_max: float

    def __post_init__(self) -> None:
        if not self.v_min < self.v_max:
            raise DegenerateScale(f"v_min={self.v_min} must be < v_max={self.v_max}")

    @property
    def span(self) -> float:
        return self.v_max - self.v_min


def intrinsic_value_exact(asset: AssetInput, delta_e: float = 0.0, delta_r: float = 0.0) -> float:
    """Single-asset intrinsic value at given relative shifts, in euros.

    Second-year earnings are ``eps1 * (1 + g) * (1 + delta_e)``; the long-term
    discount rate is ``r_mean * (1 + delta_r) + premium``.  The value is the
    discounted first-year earnings plus the discounted second-year earnings
    carrying a growing-perpetuity tail.

    Raises:
        DegenerateDenominator: if the long-term spread over growth is not
            positive, or any one-year discount factor is non-positive.
    """
    d1 = 1.0 + asset.discount_y1
    d2 = 1.0 + asset.discount_y2
    if d1 <= 0.0 or d2 <= 0.0:
        raise DegenerateDenominator(f"{asset.name}: (1 + r) factor not positive")
    r_long = asset.discount_longterm_mean * (1.0 + delta_r) + asset.risk_premium
    spread = r_long - asset.growth_rate
    if spread <= 0.0:
        raise DegenerateDenominator(
            f"{asset.name}: long-term rate {r_long:.6f} does not exceed growth "
            f"{asset.growth_rate:.6f}"
        )
    eps2 = asset.eps_first_year * (1.0 + asset.growth_rate) * (1.0 + delta_e)
    return (
        asset.eps_first_year / d1
        + eps2 / (d1 * d2) * (1.0 + (1.0 + asset.growth_rate) / spread)
    )


def linear_coefficients(asset: AssetInput) -> tuple[float, float, float]:
    """First-order expansion coefficients ``(a, b, c)`` at zero shifts.

    ``a`` is the value at zero shifts, ``b`` the sensitivity to ``delta_e``,
    ``c`` the sensitivity to ``delta_r``.  Structurally, ``a - b`` equals the
    discounted first-year earnings.
    """
    d1 = 1.0 + asset.discount_y1
    d2 = 1.0 + asset.discount_y2
    if d1 <= 0.0 or d2 <= 0.0:
        raise DegenerateDenominator(f"{asset.name}: (1 + r) factor not positive")
    spread = asset.perpetuity_denominator
    if spread <= 0.0:
        raise DegenerateDenominator(
            f"{asset.name}: mean long-term rate does not exceed growth"
        )
    base = asset.eps_first_year / d1
    growth = 1.0 + asset.growth_rate
    b = base * growth / d2 * (1.0 + growth / spread)
    a = base + b
    c = -base * growth**2 / d2 * asset.discount_longterm_mean / spread**2
    return a, b, c


def portfolio_coefficients(spec: PortfolioSpec) -> LinearCoefficients:
    """Linear coefficients for every asset of a portfolio, in asset order."""
    triples = [linear_coefficients(asset) for asset in spec.assets]
    return LinearCoefficients(
        a=tuple(t[0] for t in triples),
        b=tuple(t[1] for t in triples),
        c=tuple(t[2] for t in triples),
    )


def portfolio_value_linear(
    spec: PortfolioSpec,
    coeffs: LinearCoefficients,
    delta_e: float,
    delta_r: float,
) -> float:
    """Linearized portfolio value, in euros.

    The earnings shift ``delta_e`` is shared by all assets (they ride one
    common market factor); ``delta_r`` shifts the economy-wide long-term rate.
    """
    if len(coeffs.a) != len(spec.assets):
        raise LengthMismatch(
            f"{len(coeffs.a)} coefficient rows vs {len(spec.assets)} assets"
        )
    return sum(
        w * (a + b * delta_e + c * delta_r)
        for w, a, b, c in zip(spec.holdings, coeffs.a, coeffs.b, coeffs.c)
    )


def value_bounds(
    spec: PortfolioSpec,
    coeffs: LinearCoefficients,
    scenario: MarketScenario,
) -> ValueScale:
    """Extreme portfolio values over the shift box, as a rescaling window.

    With the usual sign structure (every ``b > 0``, ``c < 0``) the minimum
    sits at ``(-bound_e, +bound_r)`` and the maximum at ``(+bound_e,
    -bound_r)``.  If any asset breaks that structure, all four corners are
    evaluated and the min/max taken.
    """
    be, br = scenario.delta_e_bound, scenario.delta_r_bound
    signs_ok = all(b > 0 for b in coeffs.b) and all(c < 0 for c in coeffs.c)
    if signs_ok:
        v_min = portfolio_value_linear(spec, coeffs, -be, +br)
        v_max = portfolio_value_linear(spec, coeffs, +be, -br)
    else:
        corners = [
            portfolio_value_linear(spec, coeffs, se * be, sr * br)
            for se in (-1.0, 1.0)
            for sr in (-1.0, 1.0)
        ]
        v_min, v_max = min(corners), max(corners)
    return ValueScale(v_min=v_min, v_max=v_max)


def rescale(value: float, scale: ValueScale) -> float:
    """Map a euro value into [0, 1] on the given scale, clamping edge noise.

    Values outside the window are clamped; a clamp beyond floating-point
    slack triggers a RuntimeWarning since in-model values are guaranteed to
    lie inside the window.
    """
    x = (value - scale.v_min) / scale.span
    if x < 0.0 or x > 1.0:
        if x < -_CLAMP_SLACK or x > 1.0 + _CLAMP_SLACK:
            warnings.warn(
                f"value {value} lies outside scale [{scale.v_min}, {scale.v_max}]; clamped",
                RuntimeWarning,
                stacklevel=2,
            )
        x = min(max(x, 0.0), 1.0)
    return x


def unscale(x: float, scale: ValueScale) -> float:
    """Inverse of :func:`rescale`: map a [0, 1] fraction back to euros."""
    return scale.v_min + x * scale.span
