import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corridor_equilibrium.corridor import CorridorSpec, WageSpec, cumulative_free_flow
from corridor_equilibrium.errors import ConfigError
from corridor_equilibrium.instances import random_instance
from corridor_equilibrium.long_term import find_mixed_zone, g_value, mixed_zone_ratio, solve_long_term
from corridor_equilibrium.schedule import ScheduleSpec, cbar

CORRIDOR = CorridorSpec((70, 40, 10), (1.5, 1.0, 1.0), (750, 1500, 700))
WAGES = WageSpec(40, 30)
ONE = ScheduleSpec((60,), 0.3, 0.6, (0, 140))
TWO = ScheduleSpec((50, 70), 0.3, 0.6, (0, 140))


def test_g_values():
    assert g_value(CORRIDOR, ONE, WAGES, 0, 750) == pytest.approx(33.5)
    assert g_value(CORRIDOR, ONE, WAGES, 2, 700) == pytest.approx(22.5)
    assert g_value(CORRIDOR, ONE, WAGES, 1, 0) == pytest.approx(40 - 2.5)


def test_mixed_zone_location():
    assert find_mixed_zone(CORRIDOR, ONE, WAGES) == 1
    assert find_mixed_zone(CORRIDOR, TWO, WAGES, "merged_formula") == 2


def test_remote_wage_cannot_be_zero():
    # a zero remote wage would mean remote work never competes; the wage spec forbids it outright
    with pytest.raises(ConfigError):
        WageSpec(40, 0)
    assert find_mixed_zone(CORRIDOR, ONE, WageSpec(40, 1e-6)) is None


def test_mixed_zone_ratios():
    for mode in ("exact", "merged_formula"):
        assert mixed_zone_ratio(CORRIDOR, ONE, WAGES, 1, mode) == pytest.approx(0.75)
    assert mixed_zone_ratio(CORRIDOR, TWO, WAGES, 2, "merged_formula") == pytest.approx(0.75)
    # the remote wage exceeds what office work pays even without congestion
    assert mixed_zone_ratio(CORRIDOR, ONE, WageSpec(40, 39.9), 0) == 0


@pytest.mark.parametrize(
    "sched, tlc, rho, rents, ratios",
    [
        (ONE, False, 22.5, [11, 5, 0], [1, 1, 1]),
        (ONE, True, 30, [3.5, 0, 0], [1, 0.75, 0]),
        (TWO, True, 30, [7.5, 1.5, 0], [1, 1, 0.75]),
    ],
)
def test_solutions(sched, tlc, rho, rents, ratios):
    sol = solve_long_term(CORRIDOR, sched, WAGES, tlc, "merged_formula")
    assert sol.utility == pytest.approx(rho, abs=1e-9)
    assert sol.rents.tolist() == pytest.approx(rents, abs=1e-9)
    assert sol.ratios.tolist() == pytest.approx(ratios, abs=1e-9)


def test_zone_labels():
    assert solve_long_term(CORRIDOR, ONE, WAGES, True).zones == ("office", "mixed", "remote")


def test_all_office_is_flagged():
    sol = solve_long_term(CORRIDOR, ONE, WageSpec(40, 5), True)
    assert sol.all_office and sol.mixed_zone is None and sol.utility == pytest.approx(22.5)


def _utility(corridor, wages, sol, i, h):
    lam = sol.deviation_cost(i)
    return h * (wages.office - lam - cumulative_free_flow(corridor, i)) + (1 - h) * wages.remote - sol.rents[i]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.booleans(), st.sampled_from([1, 2]))
def test_equilibrium_conditions(seed, tlc, K):
    cfg = random_instance(seed)
    sched = cfg.schedule(K)
    sol = solve_long_term(cfg.corridor, sched, cfg.wages, tlc, "merged_formula")
    n = cfg.corridor.location_count
    mubar = np.asarray(cfg.corridor.capacities) - np.append(cfg.corridor.capacities[1:], 0)
    assert sol.rents[-1] == 0 and np.all(sol.rents >= 0)
    if tlc:
        assert sol.utility == cfg.wages.remote
        i = sol.mixed_zone
        assert np.all(sol.ratios[:i] == 1) and np.all(sol.ratios[i + 1 :] == 0)
        assert np.all(sol.rents[i:] == 0)
    for i in range(n):
        if sol.ratios[i] > 0:
            lam = cbar(sched, sol.commuters[i], mubar[i], "merged_formula")
            assert sol.costs[i] == pytest.approx(lam)
            assert _utility(cfg.corridor, cfg.wages, sol, i, sol.ratios[i]) == pytest.approx(sol.utility, abs=1e-9)
        for h in ((0.0, sol.ratios[i], 1.0) if tlc else (1.0,)):
            assert _utility(cfg.corridor, cfg.wages, sol, i, h) <= sol.utility + 1e-9
    occ = np.flatnonzero(sol.commuters > 0)
    g = [g_value(cfg.corridor, sched, cfg.wages, i, sol.commuters[i], "merged_formula") for i in occ]
    assert np.all(np.diff(g) < 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_rent_differences_track_cost_differences(seed):
    # adjacent office locations: rent gap equals the gap in cost plus free-flow time
    cfg = random_instance(seed)
    sol = solve_long_term(cfg.corridor, cfg.schedule(1), cfg.wages, False)
    f = np.asarray(cfg.corridor.free_flow)
    dr = sol.rents[:-1] - sol.rents[1:]
    assert dr == pytest.approx(sol.costs[1:] - sol.costs[:-1] + f[1:], abs=1e-9)
