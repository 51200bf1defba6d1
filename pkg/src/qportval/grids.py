"""Discretization of the stochastic shifts onto qubit-sized grids.

Each shift (``delta_e``, ``delta_r``) follows a normal distribution truncated
to symmetric bounds.  A register of ``q`` bits holds ``2**q`` equally spaced
points spanning the bounds inclusive; point weights are the Gaussian density
evaluated at the points, normalized to sum one.  The two registers are
independent, so the joint distribution over ``2*q`` bits is the outer product
of the marginals.

Joint index convention: the low ``q`` bits of a joint index select the
``delta_e`` point, the high bits the ``delta_r`` point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGrid
from .valuation import (
    LinearCoefficients,
    MarketScenario,
    PortfolioSpec,
    ValueScale,
    portfolio_value_linear,
    rescale,
)

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Truncated-normal grid parameters for one shift register."""

    bits: int
    mean: float
    sigma: float
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if self.bits < 1:
            raise InvalidGrid(f"bits={self.bits} must be >= 1")
        if not self.lower < self.upper:
            raise InvalidGrid(f"lower={self.lower} must be < upper={self.upper}")
        if self.sigma <= 0:
            raise InvalidGrid(f"sigma={self.sigma} must be > 0")

    @classmethod
    def for_delta_e(cls, scenario: MarketScenario, bits: int = 2) -> GridSpec:
        return cls(
            bits=bits,
            mean=0.0,
            sigma=scenario.delta_e_sigma,
            lower=-scenario.delta_e_bound,
            upper=+scenario.delta_e_bound,
        )

    @classmethod
    def for_delta_r(cls, scenario: MarketScenario, bits: int = 2) -> GridSpec:
        return cls(
            bits=bits,
            mean=0.0,
            sigma=scenario.delta_r_sigma,
            lower=-scenario.delta_r_bound,
            upper=+scenario.delta_r_bound,
        )


@dataclass(frozen=True)
class DiscreteDistribution:
    """Grid points with their probabilities."""

    points: np.ndarray
    probs: np.ndarray

    def __post_init__(self) -> None:
        if self.points.shape != self.probs.shape or self.points.ndim != 1:
            raise InvalidGrid("points and probs must be 1-d arrays of equal length")
        if np.any(np.diff(self.points) <= 0):
            raise InvalidGrid("points must be strictly increasing")
        if np.any(self.probs < 0):
            raise InvalidGrid("probabilities must be non-negative")
        if abs(self.probs.sum() - 1.0) > _NORM_TOL:
            raise InvalidGrid(f"probabilities sum to {self.probs.sum()}, not 1")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def mean(self) -> float:
        return float(self.points @ self.probs)


@dataclass(frozen=True)
class JointGrid:
    """Product grid over both shift registers.

    Joint index ``i`` decomposes as ``i = i_r * 2**q_e + i_e``: the
    ``delta_e`` register occupies the low bits.
    """

    delta_e_dist: DiscreteDistribution
    delta_r_dist: DiscreteDistribution
    probs: np.ndarray = field(init=False)
    delta_e_values: np.ndarray = field(init=False)
    delta_r_values: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        pe, pr = self.delta_e_dist.probs, self.delta_r_dist.probs
        # outer(pr, pe).ravel() puts i_e in the low bits
        object.__setattr__(self, "probs", np.outer(pr, pe).ravel())
        object.__setattr__(
            self, "delta_e_values", np.tile(self.delta_e_dist.points, len(pr))
        )
        object.__setattr__(
            self, "delta_r_values", np.repeat(self.delta_r_dist.points, len(pe))
        )

    def __len__(self) -> int:
        return len(self.probs)

    @property
    def n_qubits(self) -> int:
        """Total grid qubits across both registers."""
        n = len(self.delta_e_dist) * len(self.delta_r_dist)
        return int(n - 1).bit_length()

    def shifts(self, i: int) -> tuple[float, float]:
        """(delta_e, delta_r) encoded by joint index ``i``."""
        return float(self.delta_e_values[i]), float(self.delta_r_values[i])


def discretize_truncated_normal(spec: GridSpec) -> DiscreteDistribution:
    """Evaluate the Gaussian density on the grid and normalize.

    Points are ``2**bits`` equally spaced values from ``lower`` to ``upper``
    inclusive, so the extreme grid points reach the truncation bounds exactly.
    """
    points = np.linspace(spec.lower, spec.upper, 2**spec.bits)
    if spec.lower == -spec.upper:
        # make interior points exactly antisymmetric so symmetric grids stay
        # palindromic even at extreme sigma-to-spacing ratios
        points = 0.5 * (points - points[::-1])
    z2 = ((points - spec.mean) / spec.sigma) ** 2
    # shift by the smallest exponent so narrow sigmas cannot underflow to 0/0
    weights = np.exp(-0.5 * (z2 - z2.min()))
    return DiscreteDistribution(points=points, probs=weights / weights.sum())


def joint_grid(e_spec: GridSpec, r_spec: GridSpec) -> JointGrid:
    """Independent product grid of the two shift registers."""
    return JointGrid(
        delta_e_dist=discretize_truncated_normal(e_spec),
        delta_r_dist=discretize_truncated_normal(r_spec),
    )


def scenario_grid(scenario: MarketScenario, bits: int = 2) -> JointGrid:
    """Joint grid with both registers taken from a market scenario."""
    return joint_grid(
        GridSpec.for_delta_e(scenario, bits), GridSpec.for_delta_r(scenario, bits)
    )


def grid_values_to_payoff(
    grid: JointGrid,
    spec: PortfolioSpec,
    coeffs: LinearCoefficients,
    scale: ValueScale,
) -> np.ndarray:
    """Rescaled portfolio value at every joint grid point, each in [0, 1].

    With ``scale`` built from the same scenario's bounds, the corner grid
    points map to exactly 0 and 1.
    """
    return np.array(
        [
            rescale(portfolio_value_linear(spec, coeffs, de, dr), scale)
            for de, dr in zip(grid.delta_e_values, grid.delta_r_values)
        ]
    )
