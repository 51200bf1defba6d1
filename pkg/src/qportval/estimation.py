"""Maximum-likelihood amplitude readout over multi-circuit shot records.

Each circuit applies the amplification operator ``grover_power`` times before
measuring, so its ancilla-1 probability is ``sin^2((2m+1)*theta)`` where
``a = sin^2(theta)`` is the target amplitude.  Measurements are Bernoulli
trials; the joint log-likelihood over circuits is maximized on a dense theta
grid (fine enough to resolve the fastest oscillation) followed by local
refinement.

The statistical error of the combined estimate is

    sigma^2 = p(1-p) / (n_shots * sum_k (2 m_k + 1)^2)

evaluated at a plug-in probability; the query count (invocations of the
loading operator, the cost axis shared with the classical baseline) is
``n_shots * sum_k (2 m_k + 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateScale, DomainError, ModeMismatch
from .valuation import ValueScale, unscale

# Boundary clamp for degenerate all-zero / all-one counts.
_THETA_EPS = 1e-8
# Grid points per unit of the fastest oscillation frequency (2*m_max + 1).
_GRID_DENSITY = 10_000


@dataclass(frozen=True)
class Schedule:
    """Amplification powers per circuit and the common shot count."""

    grover_powers: tuple[int, ...]
    shots_per_circuit: int

    def __post_init__(self) -> None:
        if len(self.grover_powers) < 1:
            raise ValueError("schedule needs at least one circuit")
        if any(m < 0 for m in self.grover_powers):
            raise ValueError("amplification powers must be non-negative")
        if self.shots_per_circuit < 1:
            raise ValueError("shots_per_circuit must be >= 1")

    @classmethod
    def parse(cls, text: str, shots_per_circuit: int) -> "Schedule":
        """Parse a comma-separated power list, e.g. ``"0,1,2,4"``."""
        powers = tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
        return cls(grover_powers=powers, shots_per_circuit=shots_per_circuit)

    @property
    def sum_odd(self) -> int:
        return sum(2 * m + 1 for m in self.grover_powers)

    @property
    def sum_odd_squared(self) -> int:
        return sum((2 * m + 1) ** 2 for m in self.grover_powers)


@dataclass(frozen=True)
class ShotRecord:
    """Outcome of one circuit: amplification power, shots, good counts."""

    grover_power: int
    n_shots: int
    n_good: int

    def __post_init__(self) -> None:
        if not 0 <= self.n_good <= self.n_shots:
            raise ValueError(
                f"n_good={self.n_good} outside [0, n_shots={self.n_shots}]"
            )
        if self.grover_power < 0:
            raise ValueError("grover_power must be non-negative")


@dataclass(frozen=True)
class EstimateReport:
    """Full result of one estimation run, serializable to JSON."""

    theta_hat: float
    a_hat: float
    sigma_amplitude: float
    value_euros: float
    sigma_euros: float
    n_queries: int
    grover_powers: tuple[int, ...]
    shots_per_circuit: int
    mode: str
    scaling: float

    def to_dict(self) -> dict:
        return {
            "theta_hat": self.theta_hat,
            "a_hat": self.a_hat,
            "sigma_amplitude": self.sigma_amplitude,
            "value_euros": self.value_euros,
            "sigma_euros": self.sigma_euros,
            "n_queries": self.n_queries,
            "grover_powers": list(self.grover_powers),
            "shots_per_circuit": self.shots_per_circuit,
            "mode": self.mode,
            "scaling": self.scaling,
        }


def _log_likelihood_grid(thetas: np.ndarray, records: Sequence[ShotRecord]) -> np.ndarray:
    """Joint log-likelihood on an array of theta values."""
    total = np.zeros_like(thetas)
    with np.errstate(divide="ignore"):
        for rec in records:
            arg = (2 * rec.grover_power + 1) * thetas
            s2 = np.sin(arg) ** 2
            if rec.n_good > 0:
                total += rec.n_good * np.log(s2)
            if rec.n_good < rec.n_shots:
                total += (rec.n_shots - rec.n_good) * np.log1p(-s2)
    return total


def log_likelihood(theta: float, records: Sequence[ShotRecord]) -> float:
    """Joint log-likelihood at a single angle in the open interval (0, pi/2).

    Circuits with zero counts on one outcome contribute nothing for that
    outcome, even where the log argument vanishes.
    """
    if not 0.0 < theta < math.pi / 2:
        raise DomainError(f"theta={theta} outside (0, pi/2)")
    if not records:
        raise ValueError("records must be nonempty")
    return float(_log_likelihood_grid(np.array([theta]), records)[0])


def mle_estimate(records: Sequence[ShotRecord]) -> tuple[float, float]:
    """Global maximum-likelihood angle and amplitude from shot records.

    A dense grid scan (at least ``10^4 * max(2m+1)`` points, enough to resolve
    every likelihood oscillation) locates the basin; bounded scalar refinement
    then pins the optimum to 1e-10 in theta.  Ties break toward the smaller
    angle.  Records with all-zero (all-one) counts clamp to the lower (upper)
    boundary.
    """
    records = list(records)
    if not records:
        raise ValueError("records must be nonempty")
    if all(rec.n_good == 0 for rec in records):
        theta = _THETA_EPS
        return theta, math.sin(theta) ** 2
    if all(rec.n_good == rec.n_shots for rec in records):
        theta = math.pi / 2 - _THETA_EPS
        return theta, math.sin(theta) ** 2

    m_max = max(rec.grover_power for rec in records)
    n_points = _GRID_DENSITY * (2 * m_max + 1)
    thetas = np.linspace(_THETA_EPS, math.pi / 2 - _THETA_EPS, n_points)
    values = _log_likelihood_grid(thetas, records)
    best = int(np.argmax(values))  # first maximum: the smaller theta on ties

    lo = thetas[max(best - 1, 0)]
    hi = thetas[min(best + 1, n_points - 1)]
    result = minimize_scalar(
        lambda t: -_log_likelihood_grid(np.array([t]), records)[0],
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    theta = float(result.x)
    if -result.fun < values[best]:
        theta = float(thetas[best])
    return theta, math.sin(theta) ** 2


def query_count(schedule: Schedule) -> int:
    """Total loading-operator invocations: ``n_shots * sum_k (2 m_k + 1)``."""
    return schedule.shots_per_circuit * schedule.sum_odd


def estimation_error(p1: float, schedule: Schedule) -> float:
    """Standard error of the combined estimate at ancilla probability ``p1``."""
    if not 0.0 <= p1 <= 1.0:
        raise DomainError(f"p1={p1} outside [0, 1]")
    return math.sqrt(
        p1 * (1.0 - p1) / (schedule.shots_per_circuit * schedule.sum_odd_squared)
    )


def amplitude_to_value(
    a_hat: float,
    sigma_a: float,
    mode: str,
    scaling: float,
    scale: ValueScale,
) -> tuple[float, float]:
    """Convert an amplitude estimate and its error into euros.

    Exact mode reads the amplitude as the rescaled value directly.  Linear
    rotation mode first inverts ``a = sin^2(c*(f-1/2) + pi/4)`` to first
    order, ``f = (a - 1/2)/c + 1/2`` (clamped to [0, 1]), which also scales
    the error by ``1/c``.  Euro errors propagate linearly through the affine
    unscaling.
    """
    if mode == "exact":
        f_hat = a_hat
        factor = 1.0
    elif mode == "linear_rotation":
        if scaling <= 0:
            raise ValueError("scaling must be positive in linear_rotation mode")
        f_hat = (a_hat - 0.5) / scaling + 0.5
        f_hat = min(max(f_hat, 0.0), 1.0)
        factor = 1.0 / scaling
    else:
        raise ModeMismatch(f"unknown payoff mode {mode!r}")
    if scale.span <= 0:
        raise DegenerateScale("value scale has non-positive span")
    return unscale(f_hat, scale), sigma_a * scale.span * factor


def pooled_baseline_probability(records: Iterable[ShotRecord]) -> float | None:
    """Pooled good-count fraction over the unamplified (power-0) circuits.

    Returns None when the schedule contains no power-0 circuit; callers then
    fall back to the maximum-likelihood amplitude as the plug-in.
    """
    n_shots = n_good = 0
    for rec in records:
        if rec.grover_power == 0:
            n_shots += rec.n_shots
            n_good += rec.n_good
    if n_shots == 0:
        return None
    return n_good / n_shots
