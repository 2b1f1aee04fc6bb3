"""Residential location and office-work ratio equilibrium.

Locations near the CBD are office-work zones (ratio 1), a single mixed
zone may follow, and everything beyond it works remotely (ratio 0).
Rents absorb the utility differences, with the outermost rent fixed at 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corridor import CorridorSpec, WageSpec, cumulative_free_flow, residual_capacities, validate
from .errors import RegularityError
from .schedule import Mode, ScheduleSpec, cbar, window_demand

OFFICE, MIXED, REMOTE = "office", "mixed", "remote"


@dataclass(frozen=True, eq=False)
class LongTermSolution:
    mixed_zone: int | None
    ratios: np.ndarray
    commuters: np.ndarray
    costs: np.ndarray
    rents: np.ndarray
    utility: float
    zones: tuple[str, ...]
    tlc_active: bool
    mode: str
    all_office: bool = False

    def deviation_cost(self, i: int) -> float:
        """Cheapest commuting cost a single worker at ``i`` could obtain."""
        if self.commuters[i] > 0:
            return float(self.costs[i])
        occupied = np.flatnonzero(self.commuters > 0)
        return float(self.costs[occupied[-1]]) if occupied.size else 0.0

    def utility_at(self, corridor: CorridorSpec, wages: WageSpec, i: int, h: float) -> float:
        lam = self.deviation_cost(i)
        return h * (wages.office - lam - cumulative_free_flow(corridor, i)) + (1 - h) * wages.remote - self.rents[i]


def g_value(corridor: CorridorSpec, sched: ScheduleSpec, wages: WageSpec, i: int, x: float, mode: Mode = "exact") -> float:
    """Daily utility of office work at location ``i`` when ``x`` workers commute from it."""
    mubar = residual_capacities(corridor)[i]
    return wages.office - cbar(sched, x, mubar, mode) - cumulative_free_flow(corridor, i)


def find_mixed_zone(corridor: CorridorSpec, sched: ScheduleSpec, wages: WageSpec, mode: Mode = "exact") -> int | None:
    for i, area in enumerate(corridor.areas):
        if g_value(corridor, sched, wages, i, area, mode) < wages.remote:
            return i
    return None


def mixed_zone_ratio(corridor: CorridorSpec, sched: ScheduleSpec, wages: WageSpec, i: int, mode: Mode = "exact") -> float:
    """Share of working days spent commuting at the mixed zone ``i``.

    Solves ``G_i(x) = remote wage``: commuting must cost exactly
    ``office - remote - free-flow``. The demand at that cost is read off the
    level-set measure (exact) or the merged-window line (merged_formula).
    """
    target = wages.office - wages.remote - cumulative_free_flow(corridor, i)
    if target <= 0:
        return 0.0
    mubar = residual_capacities(corridor)[i]
    if mode == "exact":
        x = window_demand(sched, target, mubar)
        cbar(sched, x, mubar, mode)  # raises if the window leaves the horizon
    else:
        d = sched.uniform_spacing
        x = mubar * (target / sched.delta + d * (sched.K - 1))
    return float(min(max(x / corridor.areas[i], 0.0), 1.0))


def _rents_from(g: np.ndarray, rho: float, cutoff: int) -> np.ndarray:
    rents = np.zeros_like(g)
    rents[:cutoff] = g[:cutoff] - rho
    neg = [i + 1 for i in range(cutoff) if rents[i] < -1e-12]
    if neg:
        raise RegularityError(f"negative land rent at location(s) {neg}: {rents[:cutoff].tolist()}")
    return rents


def solve_long_term(
    corridor: CorridorSpec, sched: ScheduleSpec, wages: WageSpec, tlc_active: bool, mode: Mode = "exact"
) -> LongTermSolution:
    validate(corridor)
    n = corridor.location_count
    areas = np.asarray(corridor.areas)
    mubar = residual_capacities(corridor)
    istar = find_mixed_zone(corridor, sched, wages, mode) if tlc_active else None

    if istar is None:
        ratios = np.ones(n)
        commuters = areas.copy()
        costs = np.array([cbar(sched, areas[i], mubar[i], mode) for i in range(n)])
        g = np.array([g_value(corridor, sched, wages, i, areas[i], mode) for i in range(n)])
        rho = float(g[-1])
        rents = _rents_from(g, rho, n)
        return LongTermSolution(
            mixed_zone=None,
            ratios=ratios,
            commuters=commuters,
            costs=costs,
            rents=rents,
            utility=rho,
            zones=(OFFICE,) * n,
            tlc_active=tlc_active,
            mode=mode,
            all_office=tlc_active,
        )

    eta = mixed_zone_ratio(corridor, sched, wages, istar, mode)
    ratios = np.zeros(n)
    ratios[:istar] = 1.0
    ratios[istar] = eta
    commuters = ratios * areas
    costs = np.array([cbar(sched, commuters[i], mubar[i], mode) if commuters[i] > 0 else 0.0 for i in range(n)])
    g = np.array([g_value(corridor, sched, wages, i, areas[i], mode) for i in range(istar)])
    rho = wages.remote
    rents = np.concatenate([_rents_from(g, rho, istar), np.zeros(n - istar)])
    zones = tuple(OFFICE if i < istar else (MIXED if i == istar and eta > 0 else REMOTE) for i in range(n))
    return LongTermSolution(
        mixed_zone=istar,
        ratios=ratios,
        commuters=commuters,
        costs=costs,
        rents=rents,
        utility=float(rho),
        zones=zones,
        tlc_active=True,
        mode=mode,
    )
