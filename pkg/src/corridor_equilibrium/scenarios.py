"""Policy scenarios, pairwise welfare comparisons and the paradox scan."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .corridor import CorridorSpec, WageSpec, cumulative_free_flow, validate
from .errors import ModelError, QRPError, RegularityError
from .long_term import MIXED, OFFICE, REMOTE, LongTermSolution, solve_long_term
from .schedule import Mode, ScheduleSpec
from .short_term import (
    EquilibriumView,
    ShortTermSolution,
    equilibrium_from_qrp,
    solve_st_so,
    total_commuting_cost,
)

EQ_TOL = 1e-9


@dataclass(frozen=True)
class Scenario:
    label: str
    tlc_active: bool
    K: int


SCENARIOS = {
    "NS": Scenario("NS", False, 1),
    "SWH": Scenario("SWH", False, 2),
    "TLC": Scenario("TLC", True, 1),
    "CS": Scenario("CS", True, 2),
}


@dataclass(frozen=True)
class ModelConfig:
    """Everything needed to run any of the four scenarios."""

    corridor: CorridorSpec
    wages: WageSpec
    early: float
    late: float
    t_single: float
    t_pair: tuple[float, float]
    horizon: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "t_pair", tuple(float(t) for t in self.t_pair))
        object.__setattr__(self, "horizon", tuple(float(t) for t in self.horizon))
        validate(self.corridor)

    def schedule(self, K: int) -> ScheduleSpec:
        times = (self.t_single,) if K == 1 else self.t_pair
        return ScheduleSpec(times, self.early, self.late, self.horizon)

    @property
    def spacing(self) -> float:
        return self.t_pair[1] - self.t_pair[0]

    def with_pair_spacing(self, d: float) -> ModelConfig:
        """Same config with the two start times re-centred at spacing ``d``."""
        mid = 0.5 * (self.t_pair[0] + self.t_pair[1])
        return replace(self, t_pair=(mid - d / 2, mid + d / 2))


@dataclass(frozen=True, eq=False)
class ScenarioReport:
    scenario: Scenario
    config: ModelConfig
    mode: str
    long_term: LongTermSolution
    short_term: ShortTermSolution
    equilibrium: EquilibriumView | None
    total_cost: float
    utility: float
    warnings: tuple[str, ...] = ()
    footnotes: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        return self.scenario.label

    @property
    def costs(self) -> np.ndarray:
        return self.short_term.costs

    @property
    def rents(self) -> np.ndarray:
        return self.long_term.rents

    @property
    def ratios(self) -> np.ndarray:
        return self.long_term.ratios

    @property
    def zones(self) -> tuple[str, ...]:
        return self.long_term.zones

    @property
    def mixed_zone(self) -> int | None:
        return self.long_term.mixed_zone

    def consistency_residual(self) -> float:
        """Gap between stored aggregates and their recomputation from parts."""
        areas = np.asarray(self.config.corridor.areas)
        tc = float(np.sum(self.costs * self.ratios * areas))
        c = self.config.corridor
        w = self.config.wages
        n = c.location_count
        if self.scenario.tlc_active and self.mixed_zone is not None:
            rho = w.remote
        else:
            rho = w.office - self.costs[n - 1] - cumulative_free_flow(c, n - 1) - self.rents[n - 1]
        return max(abs(tc - self.total_cost), abs(rho - self.utility))


def _footnotes(lt: LongTermSolution, cfg: ModelConfig) -> list[str]:
    notes = []
    if lt.mixed_zone is not None and lt.ratios[lt.mixed_zone] > 0:
        i = lt.mixed_zone
        pinned = cfg.wages.office - cfg.wages.remote - cumulative_free_flow(cfg.corridor, i)
        notes.append(
            f"mixed zone {i + 1}: commuting cost is pinned at office - remote - free-flow = {pinned:.9g}"
        )
    if lt.all_office:
        notes.append("remote work available but no location prefers it; every zone is an office zone")
    return notes


def run_scenario(cfg: ModelConfig, scenario: Scenario | str, mode: Mode = "merged_formula") -> ScenarioReport:
    sc = SCENARIOS[scenario.upper()] if isinstance(scenario, str) else scenario
    sched = cfg.schedule(sc.K)
    lt = solve_long_term(cfg.corridor, sched, cfg.wages, sc.tlc_active, mode)
    so = solve_st_so(cfg.corridor, sched, lt.commuters, mode)
    gap = float(np.max(np.abs(so.costs - lt.costs)))
    if gap > EQ_TOL:
        raise ModelError(f"short- and long-term costs disagree by {gap:.3g}")
    warnings = list(so.warnings)
    try:
        view = equilibrium_from_qrp(so)
    except (QRPError, RegularityError) as exc:
        view = None
        warnings.append(f"no-toll equilibrium not constructed: {exc}")
    return ScenarioReport(
        scenario=sc,
        config=cfg,
        mode=mode,
        long_term=lt,
        short_term=so,
        equilibrium=view,
        total_cost=total_commuting_cost(so),
        utility=lt.utility,
        warnings=tuple(warnings),
        footnotes=tuple(_footnotes(lt, cfg)),
    )


def run_all(cfg: ModelConfig, mode: Mode = "merged_formula", labels=("NS", "SWH", "TLC", "CS")) -> dict[str, ScenarioReport]:
    return {lab: run_scenario(cfg, lab, mode) for lab in labels}


@dataclass(frozen=True)
class Verdict:
    claim: str
    expected: str
    observed: float
    passed: bool
    location: int | None = None  # 1-based when per-location


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    first: str
    second: str
    delta_costs: np.ndarray
    delta_rents: np.ndarray
    delta_utility: float
    delta_total_cost: float
    verdicts: tuple[Verdict, ...]
    paradox: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    @property
    def all_passed(self) -> bool:
        return not self.failures


def _check(expected: str, delta: float, target: float = 0.0) -> bool:
    x = delta - target
    return {
        "lower": x < -EQ_TOL,
        "higher": x > EQ_TOL,
        "equal": abs(x) <= EQ_TOL,
        "lower_or_equal": x <= EQ_TOL,
    }[expected]


def _verdict(claim, expected, delta, location=None, target=0.0):
    return Verdict(claim, expected, float(delta), _check(expected, delta, target), location)


def _telework_pair_claims(base, tele, prefix, dl, dr):
    """Base scenario without remote work against the same schedule with it."""
    out = []
    istar = tele.mixed_zone
    for i in range(len(dl)):
        inside = istar is not None and i >= istar
        out.append(_verdict(f"{prefix}-cost", "lower" if inside else "equal", dl[i], i + 1))
        out.append(_verdict(f"{prefix}-rent", "lower_or_equal", dr[i], i + 1))
    return out


_TLC_CS_TABLE = {
    (OFFICE, OFFICE): ("lower_or_equal", "higher"),
    (MIXED, OFFICE): ("lower_or_equal", "higher"),
    (REMOTE, OFFICE): ("higher", "higher"),
    (REMOTE, MIXED): ("higher", "equal"),
    (REMOTE, REMOTE): ("equal", "equal"),
    (MIXED, MIXED): ("equal", "equal"),
}


def _pair_claims(a: ScenarioReport, b: ScenarioReport, dl, dr, d_rho, d_tc) -> list[Verdict]:
    pair = (a.label, b.label)
    out = []
    if pair == ("NS", "SWH"):
        sched = b.config.schedule(2)
        shift = -sched.spacings[0] * sched.delta
        for i in range(len(dl)):
            out.append(_verdict("swh-cost", "lower", dl[i], i + 1))
            if a.mode == "merged_formula":
                out.append(_verdict("swh-cost-shift", "equal", dl[i], i + 1, target=shift))
                out.append(_verdict("swh-rent", "equal", dr[i], i + 1))
        out += [_verdict("swh-utility", "higher", d_rho), _verdict("swh-total-cost", "lower", d_tc)]
    elif pair == ("NS", "TLC"):
        out += _telework_pair_claims(a, b, "tlc", dl, dr)
        out += [_verdict("tlc-utility", "higher", d_rho), _verdict("tlc-total-cost", "lower", d_tc)]
    elif pair == ("SWH", "CS"):
        out += _telework_pair_claims(a, b, "cs-vs-swh", dl, dr)
        out += [_verdict("cs-vs-swh-utility", "higher", d_rho), _verdict("cs-vs-swh-total-cost", "lower", d_tc)]
    elif pair == ("TLC", "CS"):
        for i, zones in enumerate(zip(a.zones, b.zones)):
            if zones not in _TLC_CS_TABLE:
                out.append(Verdict("cs-vs-tlc-zones", "known zone pair", float("nan"), False, i + 1))
                continue
            exp_l, exp_r = _TLC_CS_TABLE[zones]
            out.append(_verdict("cs-vs-tlc-cost", exp_l, dl[i], i + 1))
            out.append(_verdict("cs-vs-tlc-rent", exp_r, dr[i], i + 1))
        out.append(_verdict("cs-vs-tlc-utility", "equal", d_rho))
    elif a.label == b.label:
        for i in range(len(dl)):
            out.append(_verdict("same-cost", "equal", dl[i], i + 1))
            out.append(_verdict("same-rent", "equal", dr[i], i + 1))
        out += [_verdict("same-utility", "equal", d_rho), _verdict("same-total-cost", "equal", d_tc)]
    return out


_CANONICAL = [("NS", "SWH"), ("NS", "TLC"), ("SWH", "CS"), ("TLC", "CS")]


def compare(a: ScenarioReport, b: ScenarioReport) -> ComparisonReport:
    """Deltas are ``b - a``; claims are checked in the canonical direction."""
    if a.config != b.config:
        raise ValueError("reports come from different configurations")
    if a.mode != b.mode:
        raise ValueError(f"reports use different modes ({a.mode} vs {b.mode})")
    notes = []
    if (a.label, b.label) not in _CANONICAL and (b.label, a.label) in _CANONICAL:
        first, second = b, a
        notes.append(f"claims evaluated for {b.label} -> {a.label}")
    else:
        first, second = a, b
    dl = second.costs - first.costs
    dr = second.rents - first.rents
    d_rho = second.utility - first.utility
    d_tc = second.total_cost - first.total_cost
    verdicts = _pair_claims(first, second, dl, dr, d_rho, d_tc)
    if not verdicts:
        notes.append(f"no claims cover the pair {a.label}/{b.label}")
    if first.long_term.all_office or second.long_term.all_office:
        notes.append("a telework scenario has no mixed zone; its claims may not apply")
    paradox = (first.label, second.label) == ("TLC", "CS") and d_tc > EQ_TOL and abs(d_rho) <= EQ_TOL
    sign = 1.0 if first is a else -1.0
    return ComparisonReport(
        first=a.label,
        second=b.label,
        delta_costs=sign * dl,
        delta_rents=sign * dr,
        delta_utility=sign * d_rho,
        delta_total_cost=sign * d_tc,
        verdicts=tuple(verdicts),
        paradox=paradox,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class ScanPoint:
    theta_remote: float
    spacing: float
    paradox: bool | None
    delta_tc: float | None
    error: str | None = None


def _lt_total_cost(lt: LongTermSolution) -> float:
    return float(np.dot(lt.costs, lt.commuters))


def _scan_point(cfg: ModelConfig, theta_r: float, d: float, mode: Mode) -> ScanPoint:
    if not theta_r < cfg.wages.office:
        return ScanPoint(theta_r, d, None, None, "invalid-config")
    try:
        wages = WageSpec(cfg.wages.office, theta_r, cfg.wages.days_per_term)
        c = cfg.with_pair_spacing(d)
        tlc = solve_long_term(c.corridor, c.schedule(1), wages, True, mode)
        cs = solve_long_term(c.corridor, c.schedule(2), wages, True, mode)
    except (ModelError, ValueError) as exc:
        return ScanPoint(theta_r, d, None, None, f"{type(exc).__name__}: {exc}")
    d_tc = _lt_total_cost(cs) - _lt_total_cost(tlc)
    same_rho = abs(cs.utility - tlc.utility) <= EQ_TOL
    return ScanPoint(theta_r, d, bool(d_tc > EQ_TOL and same_rho), d_tc)


def paradox_scan(cfg: ModelConfig, theta_remote_values, spacings, mode: Mode = "merged_formula", workers: int = 4) -> list[ScanPoint]:
    """Grid over (remote wage, start-time spacing); rows ordered remote wage first."""
    grid = [(float(tr), float(d)) for tr in theta_remote_values for d in spacings]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(pool.map(lambda p: _scan_point(cfg, p[0], p[1], mode), grid))
