"""Reference configuration and seeded random instances for property suites."""
from __future__ import annotations

import numpy as np

from .corridor import CorridorSpec, WageSpec, residual_capacities
from .errors import ModelError
from .long_term import solve_long_term
from .scenarios import ModelConfig, run_all
from .short_term import check_qrp


def worked_example_config() -> ModelConfig:
    """Three-location worked example with one or two start times."""
    return ModelConfig(
        corridor=CorridorSpec(capacities=(70, 40, 10), free_flow=(1.5, 1.0, 1.0), areas=(750, 1500, 700)),
        wages=WageSpec(office=40.0, remote=30.0),
        early=0.3,
        late=0.6,
        t_single=60.0,
        t_pair=(50.0, 70.0),
        horizon=(0.0, 140.0),
    )


def _candidate(rng: np.random.Generator) -> ModelConfig:
    n = int(rng.integers(2, 6))
    beta = rng.uniform(0.1, 0.8)
    gamma = rng.uniform(0.3, 1.2)
    d = rng.uniform(4.0, 20.0)

    mu = [rng.uniform(4.0, 15.0)]
    for _ in range(n - 1):
        mu.append(mu[-1] * (1.0 + gamma + rng.uniform(0.1, 1.0)))
    mu = np.array(mu[::-1])
    mubar = mu - np.append(mu[1:], 0.0)

    # demand per unit residual capacity: increasing and above the merge point
    slack = np.sort(rng.uniform(0.5, 30.0, size=n))
    areas = mubar * (2.0 * d + slack)
    free_flow = rng.uniform(0.2, 3.0, size=n)

    delta = beta * gamma / (beta + gamma)
    lam_ns = delta * areas / mubar
    g_swh = -(lam_ns - d * delta) - np.cumsum(free_flow)  # up to the office wage
    office = float(np.max(lam_ns + np.cumsum(free_flow)) + rng.uniform(5.0, 30.0))
    # remote wage high enough for a mixed zone under two start times
    lo = office + g_swh[-1]
    remote = float(rng.uniform(lo, office))

    half = float(lam_ns.max() / min(beta, gamma) + d + 1.0)
    return ModelConfig(
        corridor=CorridorSpec(tuple(mu), tuple(free_flow), tuple(areas)),
        wages=WageSpec(office, remote),
        early=beta,
        late=gamma,
        t_single=0.0,
        t_pair=(-d / 2, d / 2),
        horizon=(-half, half),
    )


def _long_term_ok(cfg: ModelConfig) -> bool:
    sched2 = cfg.schedule(2)
    mubar = residual_capacities(cfg.corridor)
    try:
        sols = {
            (tlc, K): solve_long_term(cfg.corridor, cfg.schedule(K), cfg.wages, tlc, "merged_formula")
            for tlc in (False, True)
            for K in (1, 2)
        }
    except ModelError:
        return False
    for lt in sols.values():
        lam = lt.costs[lt.commuters > 0]
        if np.any(np.diff(lam) <= 0):
            return False
    for K in (1, 2):
        lt = sols[(True, K)]
        if lt.mixed_zone is None or not lt.ratios[lt.mixed_zone] > 0:
            return False
    cs = sols[(True, 2)]
    i = cs.mixed_zone
    return bool(cs.commuters[i] >= 2 * sched2.spacings[0] * mubar[i])


def _acceptable(cfg: ModelConfig) -> bool:
    if not check_qrp(cfg.corridor, cfg.schedule(1)).ok or not _long_term_ok(cfg):
        return False
    try:
        reports = run_all(cfg, "merged_formula")
    except ModelError:
        return False
    return not any(r.warnings for r in reports.values())


def random_instance(seed: int, max_tries: int = 1000) -> ModelConfig:
    """Valid merged-regime instance with a mixed zone under both telework scenarios."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        cfg = _candidate(rng)
        if _acceptable(cfg):
            return cfg
    raise RuntimeError(f"no acceptable instance after {max_tries} draws (seed {seed})")
