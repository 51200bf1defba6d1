"""Portfolio intrinsic-value estimation via simulated amplitude estimation.

The package prices an asset portfolio under stochastic long-term earnings and
discount-rate shifts, estimates the mean intrinsic value two ways (classical
Monte Carlo and amplified-circuit maximum-likelihood readout), and verifies
the quadratic error-scaling advantage of the amplified estimator.
"""

from .baseline import McConfig, brute_force_mean, mc_estimate
from .errors import (
    DegenerateDenominator,
    DegenerateScale,
    DomainError,
    DomainMismatch,
    InvalidGrid,
    LengthMismatch,
    ModeMismatch,
    ModelError,
    ScenarioFormatError,
)
from .estimation import (
    EstimateReport,
    Schedule,
    ShotRecord,
    amplitude_to_value,
    estimation_error,
    log_likelihood,
    mle_estimate,
    query_count,
)
from .grids import (
    DiscreteDistribution,
    GridSpec,
    JointGrid,
    discretize_truncated_normal,
    grid_values_to_payoff,
    joint_grid,
    scenario_grid,
)
from .harness import (
    ExperimentConfig,
    FidelityReport,
    hellinger_fidelity,
    run_fidelity_study,
    run_price_scenario,
    run_scaling_sweep,
)
from .scenario import (
    Scenario,
    default_scenario_path,
    load_default_scenario,
    load_scenario,
)
from .simulator import (
    GateDecomposition,
    Oracle,
    PayoffEncoding,
    StateVector,
    amplified_state,
    ancilla_one_probability,
    apply_q,
    apply_w,
    depolarize,
    grover_rudolph_decompose,
    prepare_p,
    sample_shots,
)
from .valuation import (
    AssetInput,
    LinearCoefficients,
    MarketScenario,
    PortfolioSpec,
    ValueScale,
    intrinsic_value_exact,
    linear_coefficients,
    portfolio_coefficients,
    portfolio_value_linear,
    rescale,
    unscale,
    value_bounds,
)

__version__ = "0.1.0"
