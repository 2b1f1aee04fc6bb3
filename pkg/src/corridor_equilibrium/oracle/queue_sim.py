"""Point-queue simulation of the corridor fed by the analytic departures.

Topology: commuters leaving location ``i`` join the queue of bottleneck
``i``, then drive the free-flow link ``f_i`` to the merge point where
location ``i-1`` traffic joins, and so on down to the CBD. Queues are FIFO
with constant service rate and are advanced on a uniform grid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..short_term import EquilibriumView


@dataclass(frozen=True, eq=False)
class SimVerdict:
    dt: float
    max_delay_deviation: float
    cost_gap: float
    min_slack: float
    max_capacity_excess: float
    delay_deviation_by_bottleneck: tuple[float, ...]

    def passed(self, factor: float = 5.0) -> bool:
        tol = factor * self.dt
        return self.max_delay_deviation <= tol and self.cost_gap <= tol and self.min_slack >= -tol


def _envelope(sched, t):
    tk = np.asarray(sched.preferred_times)[:, None]
    t = np.atleast_1d(t)
    return np.min(np.where(t < tk, sched.early * (tk - t), sched.late * (t - tk)), axis=0)


def _departure_curves(view: EquilibriumView, free):
    """Cumulative origin departures per location as (times, counts) knots."""
    so = view.solution
    lo, hi = so.schedule.horizon
    knots = np.unique(np.concatenate([view.breakpoints(), [lo, hi]]))
    curves = []
    for i in range(so.corridor.location_count):
        edges = [view.flows.rates[(i, k)].edges for k in range(view.flows.K)]
        ts = np.unique(np.concatenate([knots, *edges]))
        ts = ts[(ts >= lo) & (ts <= hi)]
        rate = np.asarray(view.flows.rate(i, 0.5 * (ts[1:] + ts[:-1])), dtype=float)
        counts = np.concatenate([[0.0], np.cumsum(rate * np.diff(ts))])
        origin = ts - view.route_delay(i)(ts) - free[i]
        curves.append((origin, counts))
    return curves


def queue_sim(view: EquilibriumView, dt: float) -> SimVerdict:
    so = view.solution
    sched = so.schedule
    n = so.corridor.location_count
    m = so.occupied
    f = np.asarray(so.corridor.free_flow)
    free = np.cumsum(f)
    mu = np.where(view.capacities > 0, view.capacities, np.asarray(so.corridor.capacities))
    lo, hi = sched.horizon
    if m == 0:
        return SimVerdict(dt, 0.0, 0.0, 0.0, 0.0, (0.0,) * n)

    max_delay = max(float(np.max(view.route_delay(n - 1).ys)), 0.0)
    s_lo = lo - free[-1] - max_delay - 1.0
    s = s_lo + dt * np.arange(int(np.ceil((hi + 1.0 - s_lo) / dt)) + 1)
    curves = _departure_curves(view, free)

    # arrivals/outflows per bottleneck, outermost first
    arrivals = [None] * n
    outflow = [None] * n
    queue = [None] * n
    excess = 0.0
    for j in range(n - 1, -1, -1):
        own = np.interp(s, *curves[j], left=0.0, right=curves[j][1][-1])
        upstream = np.interp(s - f[j + 1], s, outflow[j + 1], left=0.0) if j + 1 < n else 0.0
        a = own + upstream
        q = np.zeros_like(s)
        inc = np.diff(a)
        cap = mu[j] * dt
        for t in range(1, s.size):
            q[t] = max(0.0, q[t - 1] + inc[t - 1] - cap)
        d = a - q
        excess = max(excess, float(np.max(np.diff(d) - cap)))
        arrivals[j], outflow[j], queue[j] = a, d, q

    def delay(j, u):
        return np.interp(u, s, queue[j]) / mu[j]

    # compare against analytic delays along the trajectory of each CBD arrival time
    t_grid = np.linspace(lo, hi, 4001)
    devs = []
    downstream = np.zeros_like(t_grid)
    for j in range(n):
        w = view.delays[j](t_grid)
        downstream = downstream + w + f[j]
        entry = t_grid - downstream
        devs.append(float(np.max(np.abs(delay(j, entry) - w))) if j < m else float(np.max(delay(j, entry))))

    # generalized cost of every departure time, by chaining the simulated queues
    gap = 0.0
    slack = np.inf
    for i in range(m):
        origin, counts = curves[i]
        tau = s[(s >= origin[0] - 5.0) & (s <= origin[-1] + 5.0)]
        t = tau.copy()
        for j in range(i, -1, -1):
            t = t + delay(j, t) + f[j]
        ok = (t >= lo) & (t <= hi)
        tau, t = tau[ok], t[ok]
        cost = _envelope(sched, t) + (t - tau - free[i])
        used = np.interp(tau + dt, origin, counts) - np.interp(tau - dt, origin, counts) > 1e-12
        if np.any(used):
            gap = max(gap, float(np.max(np.abs(cost[used] - so.costs[i]))))
        slack = min(slack, float(np.min(cost - so.costs[i])))
    return SimVerdict(dt, max(devs), gap, slack, excess, tuple(devs))
