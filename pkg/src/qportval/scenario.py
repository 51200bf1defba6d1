"""Scenario file ingestion.

A scenario file is a JSON document holding the per-asset inputs, the share
counts, the reference market value, and one block per market trend:

    {
      "assets": [{"name", "eps_y1", "nu", "r1", "r2", "r_inf"}, ...],
      "holdings": [...],
      "market_value": 5000.0,
      "scenarios": {
        "bearish": {"g": [...], "sigma_e", "sigma_r", "bound_e", "bound_r"},
        "stable":  {...},
        "bullish": {...}
      }
    }

Rate fields (``nu``, ``r1``, ``r2``, ``r_inf``, ``g``) are percentages, as
financial tables print them, and are converted to decimal fractions here,
exactly once.  ``sigma_*`` and ``bound_*`` describe the dimensionless shifts
``delta_e`` / ``delta_r`` directly and are not rescaled.

``r_inf`` is the asset's mean long-term discount rate; the economy-wide mean
is recovered as ``r_inf - nu`` and must agree across assets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ScenarioFormatError
from .valuation import AssetInput, MarketScenario, PortfolioSpec

MARKET_LABELS = ("bearish", "stable", "bullish")

_ASSET_KEYS = ("name", "eps_y1", "nu", "r1", "r2", "r_inf")
_SCENARIO_KEYS = ("g", "sigma_e", "sigma_r", "bound_e", "bound_r")

# Tolerance on the recovered economy-wide long-term rate agreeing across assets.
_RBAR_TOL = 1e-9


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario file: one portfolio definition, three market trends."""

    asset_names: tuple[str, ...]
    eps_y1: tuple[float, ...]
    nu: tuple[float, ...]
    r1: tuple[float, ...]
    r2: tuple[float, ...]
    rbar_longterm: float
    holdings: tuple[float, ...]
    market_value: float
    markets: dict[str, MarketScenario]

    def market(self, label: str) -> MarketScenario:
        if label not in self.markets:
            raise ScenarioFormatError(
                f"unknown market {label!r}; expected one of {sorted(self.markets)}"
            )
        return self.markets[label]

    def portfolio(self, label: str) -> PortfolioSpec:
        """Portfolio spec with growth rates bound to the given market trend."""
        market = self.market(label)
        assets = tuple(
            AssetInput(
                name=self.asset_names[j],
                eps_first_year=self.eps_y1[j],
                risk_premium=self.nu[j],
                discount_y1=self.r1[j],
                discount_y2=self.r2[j],
                discount_longterm_mean=self.rbar_longterm,
                growth_rate=market.growth_rates[j],
            )
            for j in range(len(self.asset_names))
        )
        return PortfolioSpec(
            assets=assets, holdings=self.holdings, market_value=self.market_value
        )


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ScenarioFormatError(f"{context}: missing key {key!r}")
    return mapping[key]


def parse_scenario(doc: dict) -> Scenario:
    """Validate a decoded scenario document and convert rates to fractions."""
    assets_raw = _require(doc, "assets", "scenario")
    holdings = _require(doc, "holdings", "scenario")
    market_value = float(_require(doc, "market_value", "scenario"))
    scenarios_raw = _require(doc, "scenarios", "scenario")

    if not assets_raw:
        raise ScenarioFormatError("scenario: empty asset list")
    if len(holdings) != len(assets_raw):
        raise ScenarioFormatError(
            f"scenario: {len(holdings)} holdings vs {len(assets_raw)} assets"
        )

    names, eps, nu, r1, r2, rinf = [], [], [], [], [], []
    for k, entry in enumerate(assets_raw):
        ctx = f"assets[{k}]"
        for key in _ASSET_KEYS:
            _require(entry, key, ctx)
        names.append(str(entry["name"]))
        eps.append(float(entry["eps_y1"]))
        nu.append(float(entry["nu"]) / 100.0)
        r1.append(float(entry["r1"]) / 100.0)
        r2.append(float(entry["r2"]) / 100.0)
        rinf.append(float(entry["r_inf"]) / 100.0)

    rbars = [ri - n for ri, n in zip(rinf, nu)]
    rbar = rbars[0]
    for name, value in zip(names, rbars):
        if abs(value - rbar) > _RBAR_TOL:
            raise ScenarioFormatError(
                f"asset {name}: r_inf - nu = {value:.12f} disagrees with "
                f"{names[0]}'s {rbar:.12f}; the long-term mean must be shared"
            )

    markets: dict[str, MarketScenario] = {}
    for label in MARKET_LABELS:
        block = _require(scenarios_raw, label, "scenarios")
        for key in _SCENARIO_KEYS:
            _require(block, key, f"scenarios.{label}")
        g = [float(x) / 100.0 for x in block["g"]]
        if len(g) != len(names):
            raise ScenarioFormatError(
                f"scenarios.{label}: {len(g)} growth rates vs {len(names)} assets"
            )
        try:
            markets[label] = MarketScenario(
                label=label,
                growth_rates=tuple(g),
                delta_e_sigma=float(block["sigma_e"]),
                delta_r_sigma=float(block["sigma_r"]),
                delta_e_bound=float(block["bound_e"]),
                delta_r_bound=float(block["bound_r"]),
            )
        except ValueError as exc:
            raise ScenarioFormatError(f"scenarios.{label}: {exc}") from exc

    return Scenario(
        asset_names=tuple(names),
        eps_y1=tuple(eps),
        nu=tuple(nu),
        r1=tuple(r1),
        r2=tuple(r2),
        rbar_longterm=rbar,
        holdings=tuple(float(w) for w in holdings),
        market_value=market_value,
        markets=markets,
    )


def load_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ScenarioFormatError(f"cannot read scenario file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioFormatError(f"{path}: top level must be a JSON object")
    return parse_scenario(doc)


def default_scenario_path() -> Path:
    """Path of the bundled five-index scenario file."""
    return Path(resources.files("qportval").joinpath("data/default_scenario.json"))


def load_default_scenario() -> Scenario:
    """Load the bundled five-index scenario."""
    return load_scenario(default_scenario_path())
