"""Joint UAV deployment and task/resource allocation for vehicular edge computing."""

from .model import (
    ConfigError,
    DensitySpec,
    Position,
    RectRegion,
    ScenarioConfig,
    ServicePlan,
    TaskRequest,
    UavConfig,
    Velocity,
    benchmark_scenario,
    drifting_hotspot_scenario,
    paper_scenario,
    validate_config,
)
from .simulation import ALGORITHMS, RunSummary, SlotMetrics, run

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "ConfigError", "DensitySpec", "Position", "RectRegion", "RunSummary",
    "ScenarioConfig", "ServicePlan", "SlotMetrics", "TaskRequest", "UavConfig", "Velocity",
    "benchmark_scenario", "drifting_hotspot_scenario", "paper_scenario", "run", "validate_config",
]
