"""Experiment orchestration: pricing runs, scaling sweeps, fidelity studies.

Every run is driven by an :class:`ExperimentConfig`, draws all randomness from
seeded generators derived from ``(seed, circuit index)``, and emits plain
dictionaries / row lists that serialize deterministically to JSON and CSV.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baseline import McConfig, brute_force_mean, mc_estimate
from .errors import DomainMismatch
from .estimation import (
    EstimateReport,
    Schedule,
    ShotRecord,
    amplitude_to_value,
    estimation_error,
    mle_estimate,
    pooled_baseline_probability,
    query_count,
)
from .grids import JointGrid, grid_values_to_payoff, scenario_grid
from .scenario import Scenario, load_scenario
from .simulator import (
    Oracle,
    PayoffEncoding,
    amplified_state,
    depolarize,
    prepare_p,
    sample_shots,
)
from .valuation import (
    LinearCoefficients,
    PortfolioSpec,
    ValueScale,
    portfolio_coefficients,
    value_bounds,
)

SWEEP_BASE_POWERS = (0, 1, 2, 4, 8, 16, 32)
SWEEP_CSV_COLUMNS = ("method", "M", "n_queries", "sigma_amplitude", "sigma_euros", "slope_running")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one CLI run needs; the scenario file is the sole input."""

    scenario_path: str | Path
    market: str = "stable"
    grover_powers: tuple[int, ...] = (0, 2)
    shots: int = 1000
    seeds: tuple[int, ...] = (0,)
    mode: str = "exact"
    scaling: float = 0.25
    noise_rate: float = 0.0
    out_path: str | Path | None = None
    bits: int = 2

    def __post_init__(self) -> None:
        if len(self.grover_powers) < 1:
            raise ValueError("schedule must be nonempty")
        if len(self.seeds) < 1:
            raise ValueError("at least one seed is required")

    def load(self) -> Scenario:
        return load_scenario(self.scenario_path)

    def schedule(self) -> Schedule:
        return Schedule(grover_powers=self.grover_powers, shots_per_circuit=self.shots)


@dataclass(frozen=True)
class FidelityReport:
    """Hellinger fidelity of one circuit under the synthetic noise model."""

    circuit: str
    mu: float
    sigma: float
    gate_count: int

    def to_dict(self) -> dict:
        return {
            "circuit": self.circuit,
            "mu": self.mu,
            "sigma": self.sigma,
            "gate_count": self.gate_count,
        }


@dataclass
class _Pipeline:
    """Shared per-(scenario, market) objects for one experiment."""

    scenario: Scenario
    market_label: str
    mode: str
    scaling: float
    bits: int
    spec: PortfolioSpec = field(init=False)
    coeffs: LinearCoefficients = field(init=False)
    scale: ValueScale = field(init=False)
    grid: JointGrid = field(init=False)
    oracle: Oracle = field(init=False)

    def __post_init__(self) -> None:
        market = self.scenario.market(self.market_label)
        self.spec = self.scenario.portfolio(self.market_label)
        self.coeffs = portfolio_coefficients(self.spec)
        self.scale = value_bounds(self.spec, self.coeffs, market)
        self.grid = scenario_grid(market, bits=self.bits)
        payoff = grid_values_to_payoff(self.grid, self.spec, self.coeffs, self.scale)
        encoding = PayoffEncoding(mode=self.mode, f_values=payoff, scaling=self.scaling)
        self.oracle = Oracle(grid=self.grid, encoding=encoding)

    def reference_mean(self) -> float:
        return brute_force_mean(self.grid, self.spec, self.coeffs)


def hellinger_fidelity(p: np.ndarray, q: np.ndarray) -> float:
    """Overlap ``sum_i sqrt(p_i * q_i)`` of two distributions on one space."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DomainMismatch(f"distribution sizes differ: {p.shape} vs {q.shape}")
    for name, dist in (("p", p), ("q", q)):
        if abs(dist.sum() - 1.0) > 1e-9:
            raise DomainMismatch(f"{name} sums to {dist.sum()}, not 1")
    return float(np.sqrt(p * q).sum())


def simulate_records(
    oracle: Oracle, schedule: Schedule, seed: int
) -> list[ShotRecord]:
    """Shot records for every circuit of a schedule, one RNG stream each."""
    records = []
    for k, power in enumerate(schedule.grover_powers):
        state = amplified_state(oracle, power)
        record, _ = sample_shots(
            state, schedule.shots_per_circuit, seed=(seed, k), grover_power=power
        )
        records.append(record)
    return records


def estimate_from_records(
    records, schedule: Schedule, pipeline: _Pipeline
) -> EstimateReport:
    """Run the likelihood readout and convert to euros with errors."""
    theta_hat, a_hat = mle_estimate(records)
    p1 = pooled_baseline_probability(records)
    if p1 is None:
        p1 = a_hat
    sigma_a = estimation_error(p1, schedule)
    value, sigma_eur = _to_euros(a_hat, sigma_a, pipeline)
    return EstimateReport(
        theta_hat=theta_hat,
        a_hat=a_hat,
        sigma_amplitude=sigma_a,
        value_euros=value,
        sigma_euros=sigma_eur,
        n_queries=query_count(schedule),
        grover_powers=schedule.grover_powers,
        shots_per_circuit=schedule.shots_per_circuit,
        mode=pipeline.mode,
        scaling=pipeline.scaling,
    )


def _to_euros(a_hat: float, sigma_a: float, pipeline: _Pipeline) -> tuple[float, float]:
    return amplitude_to_value(
        a_hat, sigma_a, pipeline.mode, pipeline.scaling, pipeline.scale
    )


def run_price_scenario(cfg: ExperimentConfig) -> dict:
    """Price one market trend with both estimators, per seed.

    The classical baseline draws as many samples as the amplitude-estimation
    schedule spends queries, so both columns of the report carry equal cost.
    """
    scenario = cfg.load()
    pipeline = _Pipeline(scenario, cfg.market, cfg.mode, cfg.scaling, cfg.bits)
    schedule = cfg.schedule()
    n_queries = query_count(schedule)

    quantum = []
    classical = []
    for seed in cfg.seeds:
        records = simulate_records(pipeline.oracle, schedule, seed)
        quantum.append(estimate_from_records(records, schedule, pipeline).to_dict())
        mean, sigma_mu, n_used = mc_estimate(
            pipeline.spec,
            pipeline.coeffs,
            scenario.market(cfg.market),
            McConfig(n_samples=n_queries, seed=seed, bits=cfg.bits),
            grid=pipeline.grid,
        )
        classical.append(
            {"mean_euros": mean, "sigma_euros": sigma_mu, "n_queries": n_used}
        )

    return {
        "market": cfg.market,
        "mode": cfg.mode,
        "scaling": cfg.scaling,
        "grover_powers": list(cfg.grover_powers),
        "shots_per_circuit": cfg.shots,
        "seeds": list(cfg.seeds),
        "market_value_euros": scenario.market_value,
        "scale": {"v_min": pipeline.scale.v_min, "v_max": pipeline.scale.v_max},
        "reference_mean_euros": pipeline.reference_mean(),
        "amplitude_target": pipeline.oracle.amplitude,
        "gate_counts": {
            "preparation": pipeline.oracle.preparation_gate_count,
            "payoff": pipeline.oracle.payoff_gate_count,
            "per_amplification": pipeline.oracle.q_gate_count,
        },
        "grid": {
            "delta_e_points": pipeline.grid.delta_e_dist.points.tolist(),
            "delta_e_probs": pipeline.grid.delta_e_dist.probs.tolist(),
            "delta_r_points": pipeline.grid.delta_r_dist.points.tolist(),
            "delta_r_probs": pipeline.grid.delta_r_dist.probs.tolist(),
        },
        "quantum": quantum,
        "classical": classical,
        "summary": {
            "quantum_mean_euros": float(np.mean([r["value_euros"] for r in quantum])),
            "quantum_sigma_euros": float(np.mean([r["sigma_euros"] for r in quantum])),
            "classical_mean_euros": float(np.mean([r["mean_euros"] for r in classical])),
            "classical_sigma_euros": float(np.mean([r["sigma_euros"] for r in classical])),
            "n_queries": n_queries,
        },
    }


def _running_slope(log_nq: list[float], log_sigma: list[float]) -> float:
    if len(log_nq) < 2:
        return math.nan
    return float(np.polyfit(log_nq, log_sigma, 1)[0])


def run_scaling_sweep(cfg: ExperimentConfig) -> tuple[list[dict], dict[str, float]]:
    """Error-vs-queries table for growing circuit counts, both methods.

    Quantum points run prefixes of the configured power list (default
    ``0,1,2,4,8,16,32``); classical points use the same number of circuits
    with every power zero.  Each point simulates shot records per seed and
    reports the error formula at the pooled unamplified plug-in probability,
    averaged over seeds.  Returns the CSV rows plus the fitted log-log slope
    per method.
    """
    scenario = cfg.load()
    pipeline = _Pipeline(scenario, cfg.market, cfg.mode, cfg.scaling, cfg.bits)
    base = cfg.grover_powers
    methods = {
        "classical": [tuple([0] * m) for m in range(1, len(base) + 1)],
        "quantum": [tuple(base[:m]) for m in range(1, len(base) + 1)],
    }

    rows: list[dict] = []
    slopes: dict[str, float] = {}
    for method, schedules in methods.items():
        log_nq: list[float] = []
        log_sigma: list[float] = []
        for m_count, powers in enumerate(schedules, start=1):
            schedule = Schedule(grover_powers=powers, shots_per_circuit=cfg.shots)
            sigma_amps = []
            for seed in cfg.seeds:
                records = simulate_records(pipeline.oracle, schedule, seed)
                p1 = pooled_baseline_probability(records)
                if p1 is None:  # schedule without an unamplified circuit
                    p1 = mle_estimate(records)[1]
                sigma_amps.append(estimation_error(p1, schedule))
            sigma_amp = float(np.mean(sigma_amps))
            factor = 1.0 if cfg.mode == "exact" else 1.0 / cfg.scaling
            sigma_eur = sigma_amp * pipeline.scale.span * factor
            nq = query_count(schedule)
            log_nq.append(math.log(nq))
            log_sigma.append(math.log(sigma_amp))
            rows.append(
                {
                    "method": method,
                    "M": m_count,
                    "n_queries": nq,
                    "sigma_amplitude": sigma_amp,
                    "sigma_euros": sigma_eur,
                    "slope_running": _running_slope(log_nq, log_sigma),
                }
            )
        slopes[method] = _running_slope(log_nq, log_sigma)
    return rows, slopes


def run_fidelity_study(cfg: ExperimentConfig) -> list[FidelityReport]:
    """Hellinger fidelity of the noisy circuits against their ideal outputs.

    Two circuits are analyzed for the configured market: distribution loading
    alone, and loading plus payoff and amplification at the largest scheduled
    power.  ``mu`` compares ideal and depolarized outcome distributions at the
    probability level; ``sigma`` is the dispersion of the fidelity across
    seeded shot histograms drawn from the noisy distribution.
    """
    scenario = cfg.load()
    pipeline = _Pipeline(scenario, cfg.market, cfg.mode, cfg.scaling, cfg.bits)
    oracle = pipeline.oracle
    power = max(cfg.grover_powers)

    circuits = [
        (
            "state_preparation",
            prepare_p(pipeline.grid).probabilities(),
            oracle.preparation_gate_count,
        ),
        (
            "state_preparation_qae",
            amplified_state(oracle, power).probabilities(),
            oracle.circuit_gate_count(power),
        ),
    ]

    reports = []
    for circuit_index, (label, ideal, gates) in enumerate(circuits):
        noisy = depolarize(ideal, cfg.noise_rate, gates)
        mu = hellinger_fidelity(ideal, noisy)
        draws = []
        for seed in cfg.seeds:
            rng = np.random.default_rng((seed, circuit_index))
            hist = rng.multinomial(cfg.shots, noisy)
            draws.append(hellinger_fidelity(ideal, hist / hist.sum()))
        sigma = float(np.std(draws)) if len(draws) > 1 else 0.0
        reports.append(
            FidelityReport(circuit=label, mu=mu, sigma=sigma, gate_count=gates)
        )
    return reports


def write_json(obj, path: str | Path) -> None:
    """Serialize deterministically: sorted keys, fixed layout, trailing newline."""
    text = json.dumps(obj, indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def write_sweep_csv(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({key: row[key] for key in SWEEP_CSV_COLUMNS})


def validate_scenario_report(scenario: Scenario) -> dict:
    """Derived quantities for auditing a scenario file.

    Per market: the per-asset linear coefficients and the value window, the
    quantities a reviewer wants to eyeball before trusting a run.
    """
    report: dict = {
        "assets": list(scenario.asset_names),
        "holdings": list(scenario.holdings),
        "market_value_euros": scenario.market_value,
        "longterm_mean_rate": scenario.rbar_longterm,
        "markets": {},
    }
    for label in scenario.markets:
        spec = scenario.portfolio(label)
        coeffs = portfolio_coefficients(spec)
        scale = value_bounds(spec, coeffs, scenario.market(label))
        report["markets"][label] = {
            "a": list(coeffs.a),
            "b": list(coeffs.b),
            "c": list(coeffs.c),
            "v_min": scale.v_min,
            "v_max": scale.v_max,
            "mean_euros": brute_force_mean(
                scenario_grid(scenario.market(label)), spec, coeffs
            ),
        }
    return report
