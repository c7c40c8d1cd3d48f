"""Uplink fronthaul (feeder-link) rate dimensioning for RAN functional splits
on non-terrestrial platforms."""

from .model import (
    Band,
    Bundle,
    InvariantViolation,
    LoadModel,
    McsTable,
    QuantizationConfig,
    RadioConfig,
    RateTable,
    ScenarioConfig,
    Service,
    ServiceProfile,
    SplitOption,
    get_preset,
    preset_bundles,
    preset_scenarios,
    validate,
)
from .ratecalc import compute_rate_table, feasible_splits, reduction_percent, sweep_mcs

__version__ = "0.1.0"
