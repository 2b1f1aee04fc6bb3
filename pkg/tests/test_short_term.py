import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corridor_equilibrium.corridor import CorridorSpec
from corridor_equilibrium.errors import OrderingError, QRPError
from corridor_equilibrium.instances import random_instance
from corridor_equilibrium.scenarios import run_scenario
from corridor_equilibrium.schedule import ScheduleSpec, envelope_fn
from corridor_equilibrium.short_term import (
    check_qrp,
    equilibrium_cost_split,
    equilibrium_from_qrp,
    flow_rates,
    so_schedule_cost,
    solve_st_so,
    total_commuting_cost,
)

CORRIDOR = CorridorSpec((70, 40, 10), (1.5, 1.0, 1.0), (750, 1500, 700))
ONE = ScheduleSpec((60,), 0.3, 0.6, (0, 140))
TWO = ScheduleSpec((50, 70), 0.3, 0.6, (0, 140))
NS_DEMAND = [750, 1500, 700]


@pytest.fixture(scope="module")
def ns():
    return solve_st_so(CORRIDOR, ONE, NS_DEMAND)


def test_ns_costs_and_peak_prices(ns):
    assert ns.costs.tolist() == pytest.approx([5, 10, 14], abs=1e-12)
    assert [p(60) for p in ns.prices] == pytest.approx([5, 5, 4], abs=1e-12)


def test_zero_demand():
    so = solve_st_so(CORRIDOR, ONE, [0, 0, 0])
    assert so.costs.tolist() == [0, 0, 0]
    assert all(w.is_empty for w in so.windows)
    assert all(p.is_zero() for p in so.prices)
    view = equilibrium_from_qrp(so)
    assert all(w.is_zero() for w in view.delays)
    assert total_commuting_cost(so) == 0 and so_schedule_cost(so) == 0


def test_windows_saturated(ns):
    mubar = [30, 30, 10]
    for i in range(3):
        assert ns.windows[i].measure * mubar[i] == pytest.approx(NS_DEMAND[i])


def test_totals(ns):
    assert total_commuting_cost(ns) == pytest.approx(28550)
    assert so_schedule_cost(ns) == pytest.approx(14275)
    tlc = solve_st_so(CORRIDOR, ONE, [750, 1125, 0])
    assert total_commuting_cost(tlc) == pytest.approx(12187.5)


def test_single_bottleneck_objective():
    spec = ScheduleSpec((10,), 0.5, 0.5, (0, 20))
    so = solve_st_so(CorridorSpec((10,), (0,), (10,)), spec, [10])
    assert so.costs[0] == pytest.approx(0.25)
    assert so_schedule_cost(so) == pytest.approx(10 * 0.25**2 / (2 * 0.25))


def test_qrp_check():
    ok = check_qrp(CORRIDOR, ONE)
    assert ok.ok
    assert ok.margins[:2] == pytest.approx((0.15, 2.4))
    assert ok.margins[2] == float("inf")
    bad = check_qrp(CorridorSpec((70, 60, 10), (1, 1, 1), (1, 1, 1)), ONE)
    assert not bad.ok and bad.margins[0] == pytest.approx(1 / 6 - 0.6)


def test_qrp_failure_blocks_equilibrium():
    so = solve_st_so(CorridorSpec((70, 60, 10), (1, 1, 1), (50, 1500, 700)), ONE, [50, 1500, 700])
    with pytest.raises(QRPError):
        equilibrium_from_qrp(so)


def test_ordering_violation_reported():
    with pytest.raises(OrderingError, match="after location"):
        solve_st_so(CORRIDOR, ONE, [1500, 750, 700])
    with pytest.raises(OrderingError, match="inside the commuting zone"):
        solve_st_so(CORRIDOR, ONE, [750, 0, 700])


def test_equilibrium_delays_and_identity(ns):
    view = equilibrium_from_qrp(ns)
    assert [w(60) for w in view.delays] == pytest.approx([5, 5, 4])
    assert view.route_delay(2)(60) == pytest.approx(14)
    env = envelope_fn(ONE)
    for t in np.linspace(*ns.windows[0].hull, 11):
        assert env(t) + view.route_delay(0)(t) == pytest.approx(5)


def test_location3_flow_rates(ns):
    flows = flow_rates(ns)
    f = flows.rates[(2, 0)]
    t_early = 0.5 * (ns.windows[1].hull[0] + 60)
    t_late = 0.5 * (60 + ns.windows[1].hull[1])
    t_outer = 0.5 * (ns.windows[2].hull[0] + ns.windows[1].hull[0])
    assert f(t_early) == pytest.approx(7)
    assert f(t_late) == pytest.approx(16)
    assert f(t_outer) == pytest.approx(10)
    zero = flow_rates(solve_st_so(CORRIDOR, ONE, [750, 1125, 0])).rates[(2, 0)]
    assert zero.integral() == 0


def test_single_start_queue_equals_schedule_cost(ns):
    sched_cost, queue_cost = equilibrium_cost_split(equilibrium_from_qrp(ns))
    assert sched_cost == pytest.approx(14275, abs=1e-9)
    assert queue_cost == pytest.approx(14275, abs=1e-9)


def test_exact_mode_nonconvex_window_is_flagged():
    so = solve_st_so(CORRIDOR, TWO, NS_DEMAND, "exact")
    assert so.costs.tolist() == pytest.approx([2.5, 6, 10])
    assert any("not an interval" in w for w in so.warnings)
    merged = solve_st_so(CORRIDOR, TWO, NS_DEMAND, "merged_formula")
    assert any("validity threshold" in w for w in merged.warnings)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["NS", "SWH", "TLC", "CS"]))
def test_structural_properties_on_random_instances(seed, label):
    rep = run_scenario(random_instance(seed), label, "exact")
    so, view = rep.short_term, rep.equilibrium
    m = so.occupied
    for i in range(m - 1):
        assert so.windows[i].is_subset(so.windows[i + 1])
    lo, hi = so.schedule.horizon
    t = np.linspace(lo, hi, 2001)
    env = envelope_fn(so.schedule)(t)
    for i, p in enumerate(so.prices):
        vals = p(t)
        assert np.all(vals >= -1e-12)
        outside = np.array([not so.windows[i].contains(x, tol=1e-9) for x in t])
        assert np.all(np.abs(vals[outside]) <= 1e-9)
    for i in range(m):
        assert np.all(env + view.route_delay(i)(t) >= so.costs[i] - 1e-9)
        assert view.flows.location_total(i) == pytest.approx(so.demands[i], rel=1e-9)
