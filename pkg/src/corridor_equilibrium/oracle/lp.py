"""Discretized system-optimal assignment solved as a min-cost flow.

Time-expanded network: each location's source feeds one node per time
slot, nodes of location ``i`` drain into those of ``i-1`` through a chain
arc of capacity ``mu_i * dt``, and the innermost chain arc carries the
slot's schedule cost to the sink. Masses and costs are scaled to integers.

Per-location duals and per-slot prices come from shortest distances to the
sink in the residual graph of the optimal flow. Nothing here reuses the
analytic solver.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from ortools.graph.python import min_cost_flow

from ..corridor import CorridorSpec
from ..errors import HorizonError
from ..schedule import ScheduleSpec

COST_SCALE = 1e6
UNITS_PER_SLOT = 1e4


@dataclass(frozen=True)
class DiscreteInstance:
    dt: float
    slots: np.ndarray  # midpoints
    capacities: np.ndarray
    demands: np.ndarray
    slot_costs: np.ndarray

    @classmethod
    def build(cls, corridor: CorridorSpec, sched: ScheduleSpec, demands, dt: float, drop_empty_tail: bool = True):
        x = np.asarray(demands, dtype=float)
        mu = np.asarray(corridor.capacities, dtype=float)
        if drop_empty_tail:
            pos = np.flatnonzero(x > 0)
            m = int(pos[-1]) + 1 if pos.size else 0
            # an empty outer zone frees its lane on every inner bottleneck
            if 0 < m < len(mu):
                mu = mu[:m] - mu[m]
                x = x[:m]
        lo, hi = sched.horizon
        n_slots = int(round((hi - lo) / dt))
        slots = lo + dt * (np.arange(n_slots) + 0.5)
        tk = np.asarray(sched.preferred_times)[:, None]
        per_k = np.where(slots < tk, sched.early * (tk - slots), sched.late * (slots - tk))
        return cls(dt, slots, mu, x, per_k.min(axis=0))

    def check_feasible(self) -> None:
        room = self.capacities * self.dt * self.slots.size
        need = np.cumsum(self.demands[::-1])[::-1]
        short = [i + 1 for i in range(len(need)) if need[i] > room[i] + 1e-9]
        if short:
            raise HorizonError(f"horizon too short for the demand through bottleneck(s) {short}")


@dataclass(frozen=True, eq=False)
class OracleVerdict:
    objective: float
    duals: np.ndarray
    max_dual_deviation: float | None
    max_price_deviation: float | None
    feasibility: dict[str, float] = field(default_factory=dict)
    slots: np.ndarray | None = None
    prices: np.ndarray | None = None


def _distances(inst: DiscreteInstance, x_flow, y_flow, caps) -> tuple[np.ndarray, np.ndarray]:
    """Shortest residual distances to the sink from every slot node and source."""
    n, s = x_flow.shape
    cost = np.zeros((n, s))
    cost[0] = inst.slot_costs
    dist = np.full((n, s), np.inf)
    dsrc = np.full(n, np.inf)
    for _ in range(10 * n + 100):
        old, olds = dist.copy(), dsrc.copy()
        for i in range(n):
            down = cost[i] + (dist[i - 1] if i > 0 else 0.0)
            cand = np.where(y_flow[i] < caps[i], down, np.inf)
            if i + 1 < n:
                cand = np.minimum(cand, np.where(y_flow[i + 1] > 0, dist[i + 1], np.inf))
            cand = np.minimum(cand, np.where(x_flow[i] > 0, dsrc[i], np.inf))
            dist[i] = np.minimum(dist[i], cand)
            dsrc[i] = min(dsrc[i], dist[i].min())
        if np.array_equal(old, dist) and np.array_equal(olds, dsrc):
            return dist, dsrc
    raise RuntimeError("residual shortest paths did not converge")


def lp_st_so(corridor: CorridorSpec, sched: ScheduleSpec, demands, dt: float, reference=None,
             drop_empty_tail: bool = True) -> OracleVerdict:
    """Solve the discretized optimum; compare against ``reference`` (a short-term solution) if given."""
    inst = DiscreteInstance.build(corridor, sched, demands, dt, drop_empty_tail)
    n = len(inst.demands)
    if n == 0 or not np.any(inst.demands > 0):
        return OracleVerdict(0.0, np.zeros(corridor.location_count), 0.0 if reference is not None else None,
                             0.0 if reference is not None else None, {"demand": 0.0, "capacity": 0.0})
    inst.check_feasible()
    s = inst.slots.size
    scale = UNITS_PER_SLOT / (inst.capacities.min() * dt)
    caps = np.round(inst.capacities * dt * scale).astype(np.int64)
    supply = np.round(inst.demands * scale).astype(np.int64)
    unit_cost = np.round(inst.slot_costs * COST_SCALE).astype(np.int64)

    # node ids: slot (i, k) -> i*s + k; source i -> n*s + i; sink -> n*s + n
    src0, sink = n * s, n * s + n
    idx = np.arange(s)
    tails, heads, arc_caps, arc_costs = [], [], [], []
    for i in range(n):
        tails.append(np.full(s, src0 + i))
        heads.append(i * s + idx)
        arc_caps.append(np.full(s, int(supply.sum())))
        arc_costs.append(np.zeros(s, np.int64))
    for i in range(n):
        tails.append(i * s + idx)
        heads.append((i - 1) * s + idx if i > 0 else np.full(s, sink))
        arc_caps.append(np.full(s, caps[i]))
        arc_costs.append(unit_cost if i == 0 else np.zeros(s, np.int64))
    mcf = min_cost_flow.SimpleMinCostFlow()
    mcf.add_arcs_with_capacity_and_unit_cost(
        np.concatenate(tails), np.concatenate(heads), np.concatenate(arc_caps), np.concatenate(arc_costs)
    )
    supplies = np.zeros(n * s + n + 1, np.int64)
    supplies[src0 : src0 + n] = supply
    supplies[sink] = -supply.sum()
    mcf.set_nodes_supplies(np.arange(supplies.size), supplies)
    status = mcf.solve()
    if status != mcf.OPTIMAL:
        raise HorizonError(f"discretized problem not solved to optimality (status {status})")
    flows = mcf.flows(np.arange(mcf.num_arcs()))
    x_flow = flows[: n * s].reshape(n, s)
    y_flow = flows[n * s :].reshape(n, s)
    objective = float(np.dot(y_flow[0], inst.slot_costs)) / scale

    dist, dsrc = _distances(inst, x_flow, y_flow, caps)
    prices = np.empty((n, s))
    for i in range(n):
        prices[i] = dist[i] - (inst.slot_costs if i == 0 else 0.0) - (dist[i - 1] if i > 0 else 0.0)
    duals = np.zeros(corridor.location_count)
    duals[:n] = dsrc

    feas = {
        "demand": float(np.max(np.abs(x_flow.sum(axis=1) - supply)) / scale),
        "capacity": float(max(0.0, np.max(y_flow - caps[:, None])) / scale),
        "capacity_rounding": float(np.max(np.abs(caps / scale - inst.capacities * dt))),
    }
    dual_dev = price_dev = None
    if reference is not None:
        occ = np.flatnonzero(np.asarray(reference.demands) > 0)
        dual_dev = float(np.max(np.abs(duals[occ] - reference.costs[occ]))) if occ.size else 0.0
        price_dev = 0.0
        for i in range(n):
            price_dev = max(price_dev, float(np.max(np.abs(prices[i] - reference.prices[i](inst.slots)))))
    return OracleVerdict(objective, duals, dual_dev, price_dev, feas, inst.slots, prices)
