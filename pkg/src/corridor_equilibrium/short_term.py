"""Short-term optimum and no-toll equilibrium on the corridor.

The optimum decomposes into one single-bottleneck problem per location,
each served by its residual capacity ``mu_i - mu_{i+1}``. The optimal
prices are then reused as queueing delays to build the no-toll
equilibrium, which is valid when the late slope is small relative to the
capacity drop at every bottleneck.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corridor import CorridorSpec, effective_capacities, occupied_count, residual_capacities, validate
from .errors import OrderingError, QRPError, RegularityError
from .plf import IntervalSet, PiecewiseLinearFn, StepFunction
from .schedule import (
    Mode,
    ScheduleSpec,
    cbar,
    envelope_fn,
    in_merged_regime,
    level_set,
    merge_threshold,
    minimizer_windows,
)

IDENTITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ShortTermSolution:
    corridor: CorridorSpec
    schedule: ScheduleSpec
    demands: np.ndarray
    costs: np.ndarray
    windows: tuple[IntervalSet, ...]
    cumulative_prices: tuple[PiecewiseLinearFn, ...]
    prices: tuple[PiecewiseLinearFn, ...]
    mode: str
    warnings: tuple[str, ...] = ()

    @property
    def occupied(self) -> int:
        return occupied_count(self.demands)

    @property
    def residual(self) -> np.ndarray:
        return residual_capacities(self.corridor)

    def cost_at(self, i: int, h: float = 1.0) -> float:
        """Commuting cost per working day for office ratio ``h``."""
        return h * float(self.costs[i])


@dataclass(frozen=True)
class QRPCheck:
    ok: bool
    margins: tuple[float, ...]
    early_ok: bool = True

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class FlowProfile:
    """Destination-arrival rates per (location, preferred time)."""

    rates: dict[tuple[int, int], StepFunction]
    location_count: int
    K: int

    def rate(self, i: int, t):
        return sum(self.rates[(i, k)](t) for k in range(self.K))

    def location_total(self, i: int) -> float:
        return sum(self.rates[(i, k)].integral() for k in range(self.K))

    def breakpoints(self) -> np.ndarray:
        pts = [f.edges for f in self.rates.values() if f.edges.size]
        return np.unique(np.concatenate(pts)) if pts else np.array([])


@dataclass(frozen=True, eq=False)
class EquilibriumView:
    solution: ShortTermSolution
    capacities: np.ndarray
    delays: tuple[PiecewiseLinearFn, ...]
    flows: FlowProfile
    qrp: QRPCheck
    warnings: tuple[str, ...] = field(default=())

    @property
    def costs(self) -> np.ndarray:
        return self.solution.costs

    @property
    def windows(self) -> tuple[IntervalSet, ...]:
        return self.solution.windows

    def route_delay(self, i: int) -> PiecewiseLinearFn:
        """Total queueing delay on the route from location ``i``."""
        out = self.delays[0]
        for w in self.delays[1 : i + 1]:
            out = out + w
        return out

    def breakpoints(self) -> np.ndarray:
        pts = [w.xs for w in self.delays]
        pts.append(self.flows.breakpoints())
        lo, hi = self.solution.schedule.horizon
        xs = np.unique(np.concatenate(pts))
        return xs[(xs >= lo) & (xs <= hi)]


def solve_st_so(corridor: CorridorSpec, sched: ScheduleSpec, demands, mode: Mode = "exact") -> ShortTermSolution:
    validate(corridor)
    x = np.asarray(demands, dtype=float)
    n = corridor.location_count
    if x.shape != (n,):
        raise ValueError(f"expected {n} demands, got shape {x.shape}")
    if np.any(x < 0):
        raise ValueError("demands must be nonnegative")
    m = occupied_count(x)
    if np.any(x[:m] <= 0):
        gaps = [i + 1 for i in range(m) if x[i] <= 0]
        raise OrderingError(f"empty location(s) {gaps} lie inside the commuting zone")

    mubar = residual_capacities(corridor)
    lam = np.zeros(n)
    warnings = []
    for i in range(m):
        lam[i] = cbar(sched, x[i], mubar[i], mode)
        if mode == "merged_formula" and not in_merged_regime(sched, x[i], mubar[i]):
            warnings.append(
                f"location {i + 1}: merged formula used below its validity threshold "
                f"(demand {x[i]:.9g} < {merge_threshold(sched, mubar[i]):.9g})"
            )
    bad = [i + 1 for i in range(m - 1) if not lam[i] < lam[i + 1]]
    if bad:
        raise OrderingError(f"commuting costs not increasing after location(s) {bad}: {lam[:m].tolist()}")

    lo, hi = sched.horizon
    env = envelope_fn(sched)
    windows = []
    cumulative = []
    for i in range(n):
        if i < m:
            windows.append(level_set(sched, lam[i]))
            cumulative.append((lam[i] - env).clamp_nonnegative())
            if mode == "exact" and not windows[-1].is_convex:
                warnings.append(f"location {i + 1}: arrival window is not an interval")
        else:
            windows.append(IntervalSet())
            cumulative.append(cumulative[-1] if cumulative else PiecewiseLinearFn.constant(0.0, lo, hi))
    prices = [cumulative[0]] + [cumulative[i] - cumulative[i - 1] for i in range(1, n)]
    return ShortTermSolution(
        corridor=corridor,
        schedule=sched,
        demands=x,
        costs=lam,
        windows=tuple(windows),
        cumulative_prices=tuple(cumulative),
        prices=tuple(p.simplify() for p in prices),
        mode=mode,
        warnings=tuple(warnings),
    )


def qrp_margins(capacities, late: float) -> tuple[float, ...]:
    mu = np.asarray(capacities, dtype=float)
    out = []
    for i in range(len(mu)):
        nxt = mu[i + 1] if i + 1 < len(mu) else 0.0
        out.append((mu[i] - nxt) / nxt - late if nxt > 0 else float("inf"))
    return tuple(out)


def check_qrp(corridor: CorridorSpec, sched: ScheduleSpec) -> QRPCheck:
    margins = qrp_margins(corridor.capacities, sched.late)
    early_ok = sched.early < 1
    return QRPCheck(ok=early_ok and all(m > 0 for m in margins), margins=margins, early_ok=early_ok)


def _pieces(support: IntervalSet, cuts) -> list[tuple[float, float]]:
    out = []
    for a, b in support:
        pts = sorted({a, b, *(c for c in cuts if a < c < b)})
        out.extend(zip(pts[:-1], pts[1:]))
    return out


def _step_from_pieces(pieces: list[tuple[float, float, float]]) -> StepFunction:
    if not pieces:
        return StepFunction.zero()
    edges = [pieces[0][0]]
    values = []
    for a, b, v in pieces:
        if a > edges[-1] + 1e-12:
            values.append(0.0)
            edges.append(a)
        values.append(v)
        edges.append(b)
    return StepFunction(edges, values)


def flow_rates(so: ShortTermSolution) -> FlowProfile:
    """Destination-arrival rate of each location's commuters in equilibrium.

    Inside the next-inner location's window the rate is
    ``(mu_i - mu_{i+1}) * (1 + c')``; elsewhere in the own window it is
    ``mu_i - mu_{i+1} * (1 + c')``, with ``c'`` the schedule-cost slope.
    """
    sched = so.schedule
    mu = effective_capacities(so.corridor, so.demands)
    n = so.corridor.location_count
    m = so.occupied
    hat = minimizer_windows(sched)
    rates = {}
    for i in range(n):
        for k in range(sched.K):
            if i >= m:
                rates[(i, k)] = StepFunction.zero()
                continue
            support = so.windows[i].intersect(hat[k])
            inner = so.windows[i - 1] if i > 0 else IntervalSet()
            cuts = [*inner.endpoints(), sched.preferred_times[k]]
            nxt = mu[i + 1] if i + 1 < n else 0.0
            pieces = []
            for a, b in _pieces(support, cuts):
                mid = 0.5 * (a + b)
                slope = -sched.early if mid < sched.preferred_times[k] else sched.late
                if inner.contains(mid, tol=0.0):
                    v = (mu[i] - nxt) * (1 + slope)
                else:
                    v = mu[i] - nxt * (1 + slope)
                if v <= 0:
                    raise RegularityError(
                        f"nonpositive flow rate {v:.9g} for location {i + 1} near t={mid:.9g}"
                    )
                pieces.append((a, b, v))
            rates[(i, k)] = _step_from_pieces(pieces)
    return FlowProfile(rates=rates, location_count=n, K=sched.K)


def _tau_slopes_positive(view: EquilibriumView) -> bool:
    xs = view.breakpoints()
    mids = 0.5 * (xs[1:] + xs[:-1])
    for i in range(view.solution.corridor.location_count):
        route = view.route_delay(i)
        for t in mids:
            if not 1.0 - route.derivative_at(t) > 0:
                return False
    return True


def equilibrium_from_qrp(so: ShortTermSolution) -> EquilibriumView:
    """No-toll equilibrium whose queueing delays equal the optimal prices."""
    sched = so.schedule
    mu_eff = effective_capacities(so.corridor, so.demands)
    m = so.occupied
    margins = qrp_margins(mu_eff[:m], sched.late) if m else ()
    qrp = QRPCheck(ok=sched.early < 1 and all(x > 0 for x in margins), margins=margins)
    if not qrp.ok:
        raise QRPError(f"queue replacement condition fails; margins {margins}")
    flows = flow_rates(so)
    view = EquilibriumView(
        solution=so,
        capacities=mu_eff,
        delays=so.prices,
        flows=flows,
        qrp=qrp,
        warnings=so.warnings,
    )
    env = envelope_fn(sched)
    for i in range(m):
        route = view.route_delay(i)
        for k in range(sched.K):
            f = flows.rates[(i, k)]
            for t in f.edges:
                if f(t) > 0 or f(t - 1e-9) > 0:
                    gap = env(t) + route(t) - so.costs[i]
                    if abs(gap) > IDENTITY_TOL:
                        raise RegularityError(
                            f"cost identity off by {gap:.3g} for location {i + 1} at t={t:.9g}"
                        )
    if not _tau_slopes_positive(view):
        raise RegularityError("bottleneck arrival times are not increasing in destination time")
    return view


def total_commuting_cost(so: ShortTermSolution) -> float:
    return float(np.dot(so.costs, so.demands))


def so_schedule_cost(so: ShortTermSolution) -> float:
    """Objective of the short-term optimum: residual capacity times window cost."""
    env = envelope_fn(so.schedule)
    mubar = so.residual
    return float(sum(mubar[i] * sum(env.integral(a, b) for a, b in so.windows[i]) for i in range(so.occupied)))


def equilibrium_cost_split(view: EquilibriumView) -> tuple[float, float]:
    """(schedule-delay cost, queueing-delay cost) summed over all commuters."""
    env = envelope_fn(view.solution.schedule)
    sched_cost = 0.0
    queue_cost = 0.0
    for i in range(view.solution.occupied):
        route = view.route_delay(i)
        for k in range(view.flows.K):
            f = view.flows.rates[(i, k)]
            sched_cost += f.integral_with(env)
            queue_cost += f.integral_with(route)
    return sched_cost, queue_cost
