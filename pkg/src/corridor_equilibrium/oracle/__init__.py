"""Brute-force checks that share no solver code with the closed forms."""
from .gap import IntegratedState, equilibrium_gap, gap_breakdown
from .lp import DiscreteInstance, OracleVerdict, lp_st_so
from .queue_sim import SimVerdict, queue_sim

__all__ = [
    "DiscreteInstance", "OracleVerdict", "lp_st_so",
    "SimVerdict", "queue_sim",
    "IntegratedState", "equilibrium_gap", "gap_breakdown",
]
