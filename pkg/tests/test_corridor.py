import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from corridor_equilibrium.corridor import (
    CorridorSpec,
    WageSpec,
    cumulative_free_flow,
    effective_capacities,
    residual_capacities,
    validate,
)
from corridor_equilibrium.errors import ConfigError

EXAMPLE = CorridorSpec((70, 40, 10), (1.5, 1.0, 1.0), (750, 1500, 700))


def test_example_corridor_is_valid():
    assert validate(EXAMPLE) is EXAMPLE


def test_ordering_violation_names_index():
    with pytest.raises(ConfigError, match="capacity ordering violated at i=1"):
        validate(CorridorSpec((40, 70, 10), (1.5, 1.0, 1.0), (750, 1500, 700)))


@pytest.mark.parametrize(
    "spec, message",
    [
        (CorridorSpec((70, 40), (1, 1), (5, 0)), "nonpositive area at i=2"),
        (CorridorSpec((70, 40), (1, -1), (5, 5)), "negative free-flow time at i=2"),
        (CorridorSpec((70, 0), (1, 1), (5, 5)), "capacity must be positive at i=2"),
    ],
)
def test_invalid_specs(spec, message):
    with pytest.raises(ConfigError, match=message):
        validate(spec)


def test_length_mismatch():
    with pytest.raises(ConfigError, match="length mismatch"):
        CorridorSpec((70, 40), (1,), (5, 5))


def test_single_location():
    spec = validate(CorridorSpec((10,), (0,), (5,)))
    assert residual_capacities(spec).tolist() == [10]


@pytest.mark.parametrize("mu, expected", [((70, 40, 10), [30, 30, 10]), ((10,), [10]), ((100, 1), [99, 1])])
def test_residual_capacities(mu, expected):
    spec = CorridorSpec(mu, (0,) * len(mu), (1,) * len(mu))
    assert residual_capacities(spec).tolist() == expected


def test_cumulative_free_flow():
    assert cumulative_free_flow(EXAMPLE, 2) == 3.5
    assert cumulative_free_flow(EXAMPLE, 0) == 1.5
    assert cumulative_free_flow(CorridorSpec((2, 1), (0, 0), (1, 1)), 1) == 0
    with pytest.raises(IndexError):
        cumulative_free_flow(EXAMPLE, 3)


def test_wages():
    with pytest.raises(ConfigError):
        WageSpec(30, 40)
    with pytest.raises(ConfigError):
        WageSpec(40, 30, days_per_term=0)
    assert WageSpec(40, 30, 20).days_per_term == 20


def test_effective_capacities_drop_unused_lane():
    assert effective_capacities(EXAMPLE, [750, 1125, 0]).tolist() == [60, 30, 0]
    assert effective_capacities(EXAMPLE, [750, 1500, 700]).tolist() == [70, 40, 10]


@given(st.lists(st.floats(0.5, 100), min_size=1, max_size=6, unique=True))
def test_residuals_sum_to_first_capacity(values):
    mu = tuple(sorted(values, reverse=True))
    spec = validate(CorridorSpec(mu, (1.0,) * len(mu), (1.0,) * len(mu)))
    res = residual_capacities(spec)
    assert np.all(res > 0)
    assert res.sum() == pytest.approx(mu[0], rel=1e-12)
    assert validate(validate(spec)) == spec
