"""Piecewise-linear schedule-delay costs and the level-set algebra built on them.

A commuter with preferred time ``t_k`` arriving at ``t`` pays
``early * (t_k - t)`` when early and ``late * (t - t_k)`` when late. The
envelope is the cheapest over all preferred times; its level set at cost
``c`` is the set of arrival times that cost at most ``c``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConfigError, HorizonError, RegimeError
from .plf import TOL, IntervalSet, PiecewiseLinearFn

Mode = Literal["exact", "merged_formula"]
MODES = ("exact", "merged_formula")

EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class ScheduleSpec:
    preferred_times: tuple[float, ...]
    early: float
    late: float
    horizon: tuple[float, float]
    value_of_time: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "preferred_times", tuple(float(t) for t in self.preferred_times))
        object.__setattr__(self, "horizon", (float(self.horizon[0]), float(self.horizon[1])))
        tk = self.preferred_times
        if not tk:
            raise ConfigError("at least one preferred arrival time is required")
        if not 0 < self.early < 1:
            raise ConfigError(f"early slope must lie in (0, 1), got {self.early}")
        if not self.late > 0:
            raise ConfigError(f"late slope must be positive, got {self.late}")
        if self.value_of_time != 1.0:
            raise ConfigError("value of time is fixed to 1")
        if any(b <= a for a, b in zip(tk, tk[1:])):
            raise ConfigError("preferred arrival times must be strictly increasing")
        lo, hi = self.horizon
        if not lo < tk[0] or not tk[-1] < hi:
            raise ConfigError(f"preferred times must lie inside the horizon [{lo}, {hi}]")

    @property
    def K(self) -> int:
        return len(self.preferred_times)

    @property
    def delta(self) -> float:
        """Harmonic composite ``early * late / (early + late)``."""
        return self.early * self.late / (self.early + self.late)

    @property
    def spacings(self) -> tuple[float, ...]:
        tk = self.preferred_times
        return tuple(b - a for a, b in zip(tk, tk[1:]))

    @property
    def uniform_spacing(self) -> float | None:
        """Common gap ``d`` between preferred times (0 for K=1), or None."""
        d = self.spacings
        if not d:
            return 0.0
        return d[0] if all(abs(x - d[0]) <= 1e-12 * max(1.0, d[0]) for x in d) else None


def _check_time(spec: ScheduleSpec, t) -> np.ndarray:
    t_arr = np.asarray(t, dtype=float)
    lo, hi = spec.horizon
    if np.any(t_arr < lo - 1e-9) or np.any(t_arr > hi + 1e-9):
        raise ValueError(f"time outside horizon [{lo}, {hi}]")
    return t_arr


def cost(spec: ScheduleSpec, k: int, t):
    """Schedule-delay cost of preferred time ``k`` (0-based) at time ``t``."""
    if not 0 <= k < spec.K:
        raise IndexError(f"preferred-time index {k} out of range for K={spec.K}")
    t_arr = _check_time(spec, t)
    tk = spec.preferred_times[k]
    out = np.where(t_arr < tk, spec.early * (tk - t_arr), spec.late * (t_arr - tk))
    return float(out) if out.ndim == 0 else out


def envelope(spec: ScheduleSpec, t):
    t_arr = _check_time(spec, t)
    out = np.min([cost(spec, k, t_arr) for k in range(spec.K)], axis=0)
    return float(out) if np.ndim(out) == 0 else out


def crossing_times(spec: ScheduleSpec) -> list[float]:
    """Times where adjacent preferred-time costs are equal."""
    b, g = spec.early, spec.late
    tk = spec.preferred_times
    return [(g * tk[k] + b * tk[k + 1]) / (b + g) for k in range(spec.K - 1)]


def envelope_fn(spec: ScheduleSpec) -> PiecewiseLinearFn:
    lo, hi = spec.horizon
    xs = sorted({lo, hi, *spec.preferred_times, *crossing_times(spec)})
    return PiecewiseLinearFn(xs, [envelope(spec, x) for x in xs])


def minimizer_windows(spec: ScheduleSpec) -> list[IntervalSet]:
    """Partition of the horizon into the windows where each preferred time is cheapest."""
    lo, hi = spec.horizon
    cuts = [lo, *crossing_times(spec), hi]
    return [IntervalSet([(cuts[k], cuts[k + 1])]) for k in range(spec.K)]


def window_index(spec: ScheduleSpec, t: float) -> int:
    """Index of the cheapest preferred time at ``t``; boundary ties go to the lower index."""
    cuts = crossing_times(spec)
    return int(np.searchsorted(cuts, t, side="left"))


def envelope_slope(spec: ScheduleSpec, t: float) -> float:
    """Slope of the cheapest cost at a non-breakpoint time ``t``."""
    k = window_index(spec, t)
    return -spec.early if t < spec.preferred_times[k] else spec.late


def _raw_level_intervals(spec: ScheduleSpec, c: float) -> IntervalSet:
    return IntervalSet([(tk - c / spec.early, tk + c / spec.late) for tk in spec.preferred_times])


def level_set(spec: ScheduleSpec, c: float) -> IntervalSet:
    """Arrival times whose envelope cost is at most ``c``, clipped to the horizon."""
    if c < 0:
        raise ValueError(f"cost level must be nonnegative, got {c}")
    return _raw_level_intervals(spec, c).clip(*spec.horizon)


def level_measure(spec: ScheduleSpec, c: float) -> float:
    """Unclipped length of the level set at cost ``c``."""
    u = c / spec.delta
    return spec.K * u - sum(max(0.0, u - d) for d in spec.spacings)


def window_demand(spec: ScheduleSpec, c: float, mu: float) -> float:
    """Demand a capacity-``mu`` bottleneck serves with cost level ``c``."""
    return mu * level_measure(spec, c)


def merge_threshold(spec: ScheduleSpec, mu: float) -> float:
    """Smallest demand at which all level-set intervals have merged."""
    dmax = max(spec.spacings, default=0.0)
    return window_demand(spec, dmax * spec.delta, mu)


def _check_horizon(spec: ScheduleSpec, c: float) -> None:
    if c <= 0:
        return
    ivs = _raw_level_intervals(spec, c)
    lo, hi = spec.horizon
    a, b = ivs.hull
    if a < lo - EDGE_SLACK or b > hi + EDGE_SLACK:
        raise HorizonError(
            f"cost level {c:.9g} needs arrival window [{a:.9g}, {b:.9g}] beyond horizon [{lo}, {hi}]"
        )


def _cbar_exact(spec: ScheduleSpec, x: float, mu: float) -> float:
    target = x / mu
    thresholds = sorted(spec.spacings)
    passed = 0.0
    for j, dj in enumerate([*thresholds, np.inf]):
        slots = spec.K - j
        u = (target - passed) / slots
        if u <= dj + TOL:
            return u * spec.delta
        passed += dj
    raise AssertionError("unreachable")


def cbar(spec: ScheduleSpec, x: float, mu: float, mode: Mode = "exact") -> float:
    """Cost level at which a capacity-``mu`` bottleneck exactly serves demand ``x``.

    ``exact`` inverts the level-set measure regime by regime.
    ``merged_formula`` applies ``(x/mu - d(K-1)) * delta`` regardless of
    whether the level-set intervals have actually merged.
    """
    if x < 0 or not mu > 0:
        raise ValueError(f"need x >= 0 and mu > 0, got x={x}, mu={mu}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if x == 0:
        return 0.0
    if mode == "exact":
        c = _cbar_exact(spec, x, mu)
    else:
        if spec.K > 2:
            raise RegimeError("merged formula is defined for K in {1, 2} only")
        d = spec.uniform_spacing
        c = (x / mu - d * (spec.K - 1)) * spec.delta
        # with one start time the formula is positive for any positive demand, even if it underflows
        if spec.K > 1 and c <= 0:
            raise RegimeError(
                f"merged formula gives nonpositive cost {c:.9g} for demand {x:.9g} at capacity {mu:.9g}"
            )
    _check_horizon(spec, c)
    return c


def in_merged_regime(spec: ScheduleSpec, x: float, mu: float) -> bool:
    return spec.K == 1 or x == 0 or x >= merge_threshold(spec, mu) - 1e-9
