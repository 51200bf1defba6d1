"""Exception types shared across the package."""


class ModelError(Exception):
    """Base class for model, grid, circuit, and estimation errors."""


class DegenerateDenominator(ModelError):
    """A discount denominator hit zero or the wrong sign (perpetuity diverges)."""


class DegenerateScale(ModelError):
    """Value scale collapsed: v_min equals v_max."""


class LengthMismatch(ModelError):
    """Per-asset lists disagree in length."""


class InvalidGrid(ModelError):
    """Grid specification violates its invariants (bounds, sigma, bit count)."""


class ModeMismatch(ModelError):
    """Payoff encoding does not match the state it is applied to."""


class DomainError(ModelError):
    """Argument outside the open interval the operation is defined on."""


class DomainMismatch(ModelError):
    """Two distributions do not share the same outcome space."""


class ScenarioFormatError(ModelError):
    """Scenario file is missing keys, has inconsistent data, or fails validation."""
