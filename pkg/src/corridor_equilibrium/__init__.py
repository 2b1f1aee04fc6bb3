"""Closed-form commuting equilibrium on a bottleneck corridor with telework and staggered hours."""
from .corridor import CorridorSpec, WageSpec, cumulative_free_flow, residual_capacities, validate
from .errors import (
    ConfigError,
    HorizonError,
    ModelError,
    OrderingError,
    QRPError,
    RegimeError,
    RegularityError,
)
from .instances import random_instance, worked_example_config
from .long_term import LongTermSolution, find_mixed_zone, g_value, mixed_zone_ratio, solve_long_term
from .scenarios import SCENARIOS, ModelConfig, ScenarioReport, compare, paradox_scan, run_all, run_scenario
from .schedule import ScheduleSpec, cbar, cost, envelope, level_set, minimizer_windows
from .short_term import (
    ShortTermSolution,
    check_qrp,
    equilibrium_from_qrp,
    flow_rates,
    so_schedule_cost,
    solve_st_so,
    total_commuting_cost,
)

__all__ = [
    "CorridorSpec", "WageSpec", "validate", "residual_capacities", "cumulative_free_flow",
    "ModelError", "ConfigError", "HorizonError", "RegimeError", "OrderingError", "RegularityError", "QRPError",
    "ScheduleSpec", "cost", "envelope", "minimizer_windows", "level_set", "cbar",
    "ShortTermSolution", "solve_st_so", "check_qrp", "equilibrium_from_qrp", "flow_rates",
    "total_commuting_cost", "so_schedule_cost",
    "LongTermSolution", "g_value", "find_mixed_zone", "mixed_zone_ratio", "solve_long_term",
    "SCENARIOS", "ModelConfig", "ScenarioReport", "run_scenario", "run_all", "compare", "paradox_scan",
    "worked_example_config", "random_instance",
]
__version__ = "0.1.0"
