import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corridor_equilibrium.plf import IntervalSet, PiecewiseLinearFn, StepFunction


@st.composite
def plfs(draw, lo=0.0, hi=10.0):
    n = draw(st.integers(2, 8))
    inner = sorted(draw(st.lists(st.floats(lo + 0.01, hi - 0.01), min_size=n - 2, max_size=n - 2, unique=True)))
    xs = [lo, *inner, hi]
    if np.any(np.diff(xs) <= 1e-6):
        xs = list(np.linspace(lo, hi, n))
    ys = draw(st.lists(st.floats(-10, 10), min_size=len(xs), max_size=len(xs)))
    return PiecewiseLinearFn(xs, ys)


def tent(peak=5.0, beta=0.3, gamma=0.6, t0=60.0):
    env = PiecewiseLinearFn([0, t0, 140], [beta * t0, 0, gamma * 80])
    return (peak - env).clamp_nonnegative()


def test_tent_peak_and_integral():
    f = tent()
    assert f(60) == 5
    assert f.integral() == pytest.approx(5**2 / (2 * 0.2), abs=1e-12)


def test_self_subtraction_is_zero():
    f = tent()
    assert (f - f).is_zero()


def test_disjoint_domains_rejected():
    with pytest.raises(ValueError, match="overlap"):
        PiecewiseLinearFn([0, 1], [0, 1]) + PiecewiseLinearFn([2, 3], [0, 1])


def test_evaluation_outside_domain():
    with pytest.raises(ValueError):
        PiecewiseLinearFn([0, 1], [0, 1])(2)


def test_breakpoints_must_increase():
    with pytest.raises(ValueError):
        PiecewiseLinearFn([0, 0], [1, 2])


@settings(max_examples=60)
@given(plfs(), plfs(), st.floats(-5, 5))
def test_algebra_matches_pointwise(f, g, c):
    t = np.linspace(0, 10, 201)
    np.testing.assert_allclose((f + g)(t), f(t) + g(t), atol=1e-9)
    np.testing.assert_allclose((f - g)(t), f(t) - g(t), atol=1e-9)
    np.testing.assert_allclose(f.maximum(c)(t), np.maximum(f(t), c), atol=1e-9)
    np.testing.assert_allclose(f.simplify()(t), f(t), atol=1e-9)


@settings(max_examples=60)
@given(plfs())
def test_integral_matches_fine_quadrature(f):
    t = np.linspace(0, 10, 200001)
    assert f.integral() == pytest.approx(np.trapezoid(f(t), t), abs=1e-6)
    assert f.integral(2.5, 7.5) == pytest.approx(np.trapezoid(f(t[50000:150001]), t[50000:150001]), abs=1e-6)


def test_step_function():
    s = StepFunction([0, 1, 3], [2, 5])
    assert s(0.5) == 2 and s(1) == 5 and s(3) == 0 and s(-1) == 0
    assert s.integral() == 12
    assert s.integral_with(PiecewiseLinearFn([0, 3], [1, 1])) == 12
    assert s.support().intervals == ((0, 3),)
    assert StepFunction.zero().integral() == 0


def test_interval_set_merging():
    s = IntervalSet([(3, 4), (0, 1), (0.5, 2)])
    assert s.intervals == ((0, 2), (3, 4))
    assert s.measure == 3
    assert not s.is_convex
    assert s.hull == (0, 4)
    assert s.contains(3.5) and not s.contains(2.5)
    assert s.intersect(IntervalSet([(1, 3.5)])).intervals == ((1, 2), (3, 3.5))
    assert IntervalSet([(1, 1.5)]).is_subset(s)


@given(st.lists(st.tuples(st.floats(0, 10), st.floats(0, 5)), max_size=8))
def test_interval_set_measure_matches_grid(pairs):
    ivs = [(a, a + w) for a, w in pairs]
    s = IntervalSet(ivs)
    assert all(b1 < a2 for (_, b1), (a2, _) in zip(s.intervals, s.intervals[1:]))
    grid = np.linspace(0, 15, 30001)
    covered = np.zeros_like(grid, dtype=bool)
    for a, b in ivs:
        covered |= (grid >= a) & (grid <= b)
    assert s.measure == pytest.approx(covered.mean() * 15, abs=0.01 * (len(ivs) + 1))
