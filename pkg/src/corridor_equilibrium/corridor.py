"""Corridor network, land supply and wages.

Locations are numbered from the CBD outward. The Python API is 0-based;
messages and reports use 1-based location numbers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class CorridorSpec:
    capacities: tuple[float, ...]
    free_flow: tuple[float, ...]
    areas: tuple[float, ...]

    def __post_init__(self):
        for name in ("capacities", "free_flow", "areas"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        n = len(self.capacities)
        if n == 0:
            raise ConfigError("corridor needs at least one location")
        if len(self.free_flow) != n or len(self.areas) != n:
            raise ConfigError(
                f"length mismatch: {n} capacities, {len(self.free_flow)} free-flow times, "
                f"{len(self.areas)} areas"
            )

    @property
    def location_count(self) -> int:
        return len(self.capacities)

    @property
    def population(self) -> float:
        """Total workers; every lot is occupied."""
        return float(sum(self.areas))


@dataclass(frozen=True)
class WageSpec:
    office: float
    remote: float
    days_per_term: int = 1

    def __post_init__(self):
        if not self.office > self.remote > 0:
            raise ConfigError(
                f"wages must satisfy office > remote > 0, got {self.office} and {self.remote}"
            )
        if int(self.days_per_term) != self.days_per_term or self.days_per_term < 1:
            raise ConfigError(f"days_per_term must be a positive integer, got {self.days_per_term}")


def validate(spec: CorridorSpec) -> CorridorSpec:
    mu = spec.capacities
    for i, m in enumerate(mu):
        if not m > 0:
            raise ConfigError(f"capacity must be positive at i={i + 1}")
    for i in range(len(mu) - 1):
        if not mu[i] > mu[i + 1]:
            raise ConfigError(f"capacity ordering violated at i={i + 1}")
    for i, f in enumerate(spec.free_flow):
        if f < 0:
            raise ConfigError(f"negative free-flow time at i={i + 1}")
    for i, a in enumerate(spec.areas):
        if not a > 0:
            raise ConfigError(f"nonpositive area at i={i + 1}")
    return spec


def residual_capacities(spec: CorridorSpec) -> np.ndarray:
    mu = np.asarray(spec.capacities)
    return mu - np.append(mu[1:], 0.0)


def cumulative_free_flow(spec: CorridorSpec, i: int) -> float:
    """Free-flow time from location ``i`` (0-based) to the CBD."""
    if not 0 <= i < spec.location_count:
        raise IndexError(f"location index {i} out of range for {spec.location_count} locations")
    return float(sum(spec.free_flow[: i + 1]))


def occupied_count(demands) -> int:
    """Number of leading locations with positive demand."""
    x = np.asarray(demands, dtype=float)
    pos = np.flatnonzero(x > 0)
    return 0 if pos.size == 0 else int(pos[-1]) + 1


def effective_capacities(spec: CorridorSpec, demands) -> np.ndarray:
    """Bottleneck capacities seen by commuters when outer locations are empty.

    If only the first ``m`` locations send commuters, the residual lane
    ``mu[m]`` of every inner bottleneck stays unused; the closed-form costs
    (which keep ``mu_i - mu_{i+1}`` as location ``i``'s share) describe an
    equilibrium of the corridor with that lane removed.
    """
    mu = np.asarray(spec.capacities)
    m = occupied_count(demands)
    if m == 0:
        return mu.copy()
    out = mu[:m] - (mu[m] if m < len(mu) else 0.0)
    return np.concatenate([out, np.zeros(len(mu) - m)])
