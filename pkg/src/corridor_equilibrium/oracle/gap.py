"""Residual of the integrated equilibrium conditions for any candidate state.

The candidate is just numbers and profiles; the checks evaluate every
condition directly and report the worst violation. Piecewise-linear
profiles are checked on the union of their breakpoints and the midpoints
between them, which is exact for conditions linear between breakpoints.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..corridor import CorridorSpec, WageSpec
from ..plf import PiecewiseLinearFn
from ..schedule import ScheduleSpec
from ..short_term import FlowProfile

ZERO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class IntegratedState:
    corridor: CorridorSpec
    schedule: ScheduleSpec
    wages: WageSpec
    tlc_active: bool
    ratios: np.ndarray
    costs: np.ndarray
    rents: np.ndarray
    utility: float
    delays: tuple[PiecewiseLinearFn, ...]
    flows: FlowProfile
    capacities: np.ndarray

    @classmethod
    def from_report(cls, report) -> IntegratedState:
        view = report.equilibrium
        if view is None:
            raise ValueError(f"{report.label}: no equilibrium view to evaluate")
        return cls(
            corridor=report.config.corridor,
            schedule=view.solution.schedule,
            wages=report.config.wages,
            tlc_active=report.scenario.tlc_active,
            ratios=np.array(report.ratios, dtype=float),
            costs=np.array(report.costs, dtype=float),
            rents=np.array(report.rents, dtype=float),
            utility=float(report.utility),
            delays=tuple(view.delays),
            flows=view.flows,
            capacities=np.array(view.capacities, dtype=float),
        )

    def perturbed(self, **changes) -> IntegratedState:
        return replace(self, **changes)

    @property
    def demands(self) -> np.ndarray:
        return self.ratios * np.asarray(self.corridor.areas)


def _grid(state: IntegratedState) -> np.ndarray:
    lo, hi = state.schedule.horizon
    pts = [np.array([lo, hi]), np.asarray(state.schedule.preferred_times), state.flows.breakpoints()]
    pts += [w.xs for w in state.delays]
    b, g = state.schedule.early, state.schedule.late
    tk = state.schedule.preferred_times
    pts.append(np.array([(g * tk[k] + b * tk[k + 1]) / (b + g) for k in range(len(tk) - 1)]))
    xs = np.unique(np.concatenate(pts))
    xs = xs[(xs >= lo) & (xs <= hi)]
    xs = xs[np.concatenate([[True], np.diff(xs) > 1e-7])]
    return np.unique(np.concatenate([xs, 0.5 * (xs[1:] + xs[:-1])]))


def _route(state: IntegratedState, i: int, t: np.ndarray) -> np.ndarray:
    return sum(state.delays[j](t) for j in range(i + 1))


def _slope(state: IntegratedState, j: int, t: np.ndarray) -> np.ndarray:
    return state.delays[j].derivative_at(t)


def gap_breakdown(state: IntegratedState) -> dict[str, float]:
    sched = state.schedule
    n = state.corridor.location_count
    free = np.cumsum(state.corridor.free_flow)
    t = _grid(state)
    mids = 0.5 * (t[1:] + t[:-1])
    tk = np.asarray(sched.preferred_times)[:, None]
    ck = np.where(t < tk, sched.early * (tk - t), sched.late * (t - tk))
    env = ck.min(axis=0)
    x = state.demands
    occupied = x > ZERO_TOL

    # conservation: flows carry each location's commuters, ratios within [0, 1]
    conservation = max(abs(state.flows.location_total(i) - x[i]) for i in range(n))
    conservation = max(conservation, float(np.max(np.maximum(0, -state.ratios))), float(np.max(np.maximum(0, state.ratios - 1))))

    # queueing: outflow at capacity while a queue exists, never above it
    queueing = 0.0
    downstream_slope = np.zeros_like(mids)
    for j in range(n):
        w = state.delays[j]
        queueing = max(queueing, float(np.max(np.maximum(0.0, -w(t)))))
        sigma_dot = 1.0 - downstream_slope
        through = sum(np.asarray(state.flows.rate(i, mids), dtype=float) for i in range(j, n))
        cap = state.capacities[j] * sigma_dot
        queued = w(mids) > ZERO_TOL
        queueing = max(queueing, float(np.max(np.maximum(0.0, through - cap))))
        if np.any(queued):
            queueing = max(queueing, float(np.max(np.abs(through - cap)[queued])))
        downstream_slope = downstream_slope + _slope(state, j, mids)

    # time choice: route cost never below the location's cost, equal where used
    time_choice = 0.0
    route_min = np.zeros(n)
    for i in range(n):
        route = _route(state, i, t)
        route_min[i] = float(np.min(env + route))
        if not occupied[i]:
            continue
        for k in range(sched.K):
            total = ck[k] + route
            time_choice = max(time_choice, float(np.max(np.maximum(0.0, state.costs[i] - total))))
            f = state.flows.rates[(i, k)]
            used = np.asarray(f(t), dtype=float) > 0
            left = np.concatenate([[False], np.asarray(f(mids), dtype=float) > 0])
            used = used | left
            if np.any(used):
                time_choice = max(time_choice, float(np.max(np.abs(total - state.costs[i])[used])))

    # land market: rents nonnegative, outermost rent zero, every lot taken
    land = max(0.0, float(np.max(-state.rents)), abs(float(state.rents[-1])))

    # location and ratio choice
    choice = 0.0
    hs = (0.0, 1.0) if state.tlc_active else (1.0,)
    for i in range(n):
        lam = state.costs[i] if occupied[i] else route_min[i]
        office = state.wages.office - lam - free[i]

        def util(h):
            return h * office + (1 - h) * state.wages.remote - state.rents[i]

        choice = max(choice, abs(util(state.ratios[i]) - state.utility))
        for h in hs:
            choice = max(choice, util(h) - state.utility)
    return {
        "conservation": float(conservation),
        "queueing": float(queueing),
        "time_choice": float(time_choice),
        "land_market": float(land),
        "location_choice": float(choice),
    }


def equilibrium_gap(state: IntegratedState) -> float:
    return max(gap_breakdown(state).values())
