"""
Tests for the expanded multi-state system and average power bounds.
"""

import math

import numpy as np
import pytest

from sinr_region.exceptions import ModelError, SolverError
from sinr_region.linalg import psi
from sinr_region.model import ChannelModel, Direction, PowerConstraint, TimeVaryingChannel, normalize
from sinr_region.model.sampling import random_constraint, random_direction, random_time_varying
from sinr_region.oracle import bisect_max_sinr
from sinr_region.region.static import multi_constrained_max_sinr, unconstrained_max_sinr
from sinr_region.region.time_varying import (
    average_constraint_matrix,
    expand,
    tv_constrained_max_sinr,
    tv_multi,
)


@pytest.fixture
def two_states(moderate_channel, weak_channel) -> TimeVaryingChannel:
    return TimeVaryingChannel(states=(moderate_channel, weak_channel), rho=np.array([0.4, 0.6]))


def test_single_state_matches_static(moderate_channel, moderate_constraints):
    tv = TimeVaryingChannel(states=(moderate_channel,), rho=np.array([1.0]))
    direction = Direction(np.array([0.3, 0.8]))

    report = tv_multi(tv, direction, moderate_constraints)
    static = multi_constrained_max_sinr(moderate_channel, direction, moderate_constraints)

    assert report.gamma_star == pytest.approx(static.gamma_star, rel=1e-10)
    assert report.binding == static.binding
    np.testing.assert_allclose(report.average_power, static.power, rtol=1e-8)


def test_duplicated_states_match_static(moderate_channel, moderate_constraints):
    tv = TimeVaryingChannel(states=(moderate_channel, moderate_channel), rho=np.array([0.3, 0.7]))
    direction = Direction.uniform(2)

    report = tv_multi(tv, direction, moderate_constraints)
    static = multi_constrained_max_sinr(moderate_channel, direction, moderate_constraints)

    assert report.gamma_star == pytest.approx(static.gamma_star, rel=1e-9)
    np.testing.assert_allclose(report.state_power[0], report.state_power[1], rtol=1e-8)


def test_expanded_gain_is_block_diagonal(two_states):
    system = expand(two_states, Direction.uniform(2))

    assert system.a_exp.shape == (4, 4)
    np.testing.assert_array_equal(system.a_exp[:2, 2:], 0.0)
    np.testing.assert_array_equal(system.a_exp[2:, :2], 0.0)
    for i, state in enumerate(two_states.states):
        np.testing.assert_array_equal(system.a_exp[system.block(i), system.block(i)], normalize(state).matrix)
    np.testing.assert_array_equal(system.mu_exp, [1.0, 1.0, 1.0, 1.0])


def test_average_constraint_matrix_adds_weighted_noise_columns(two_states):
    direction = Direction(np.array([0.5, 0.9]))
    system = expand(two_states, direction)
    constraint = PowerConstraint(omega=(2,), bound=1.2)

    matrix = average_constraint_matrix(system, constraint)

    expected = system.weighted_gain.copy()
    for column in (1, 3):
        state = column // 2
        expected[:, column] += two_states.rho[state] * (system.eta_exp / constraint.bound)
    np.testing.assert_array_equal(matrix, expected)


def test_average_constraint_matrix_equals_chained_psi(two_states):
    system = expand(two_states, Direction.uniform(2))
    constraint = PowerConstraint(omega=(1, 2), bound=1.4)

    matrix = average_constraint_matrix(system, constraint)

    added = system.eta_exp / constraint.bound
    chained = psi(system.weighted_gain, 0.4 * added, [0, 1])
    chained = psi(chained, 0.6 * added, [2, 3])
    np.testing.assert_array_equal(matrix, chained)


def test_random_two_state_instances_match_bisection(rng):
    for _ in range(50):
        n = int(rng.integers(2, 5))
        tv = random_time_varying(rng, n, 2)
        direction = random_direction(rng, n)
        constraints = [random_constraint(rng, n) for _ in range(2)]

        closed = tv_multi(tv, direction, constraints).gamma_star
        oracle = bisect_max_sinr(expand(tv, direction), direction, constraints)

        assert abs(closed - oracle) / oracle <= 1e-7


def test_binding_average_bound_is_tight(two_states, moderate_constraints):
    direction = Direction(np.array([0.6, 0.8]))

    report = tv_multi(two_states, direction, moderate_constraints)

    for constraint in moderate_constraints:
        average = sum(report.average_power[i] for i in constraint.indices)
        if constraint.label == report.binding:
            assert average == pytest.approx(constraint.bound, rel=1e-8)
        else:
            assert average <= constraint.bound * (1 + 1e-8)


def test_every_state_is_balanced(rng):
    tv = random_time_varying(rng, 3, 3)
    direction = random_direction(rng, 3)

    report = tv_multi(tv, direction, [random_constraint(rng, 3)])

    assert report.state_sinr.shape == (3, 3)
    for row in report.state_sinr:
        np.testing.assert_allclose(row / direction.mu, report.gamma_star, rtol=1e-8)
    np.testing.assert_allclose(report.average_power, tv.rho @ report.state_power, rtol=1e-12)
    assert report.sinr.shape == (9,)


def test_single_constraint_wrapper(two_states, moderate_constraints):
    direction = Direction.uniform(2)
    for constraint in moderate_constraints:
        single = tv_constrained_max_sinr(two_states, direction, constraint)
        assert single.gamma_star == tv_multi(two_states, direction, [constraint]).gamma_star
        assert single.binding == constraint.label


def test_unconstrained_value_is_smallest_over_states(two_states):
    direction = Direction(np.array([0.7, 0.2]))

    report = tv_multi(two_states, direction, [])

    expected = min(unconstrained_max_sinr(normalize(state), direction) for state in two_states.states)
    assert report.gamma_star == expected
    assert report.binding == "unconstrained"


def test_unconstrained_without_interference_is_unbounded():
    states = tuple(ChannelModel(gains=np.diag([1.0, g]), sigma2=np.full(2, 0.1)) for g in (0.5, 2.0))
    tv = TimeVaryingChannel(states=states, rho=np.array([0.5, 0.5]))

    report = tv_multi(tv, Direction.uniform(2), [])

    assert report.unbounded
    assert math.isinf(report.gamma_star)
    assert report.state_power is None


def test_direction_must_match_and_be_positive(two_states):
    with pytest.raises(ModelError):
        expand(two_states, Direction.uniform(3))
    with pytest.raises(SolverError):
        tv_multi(two_states, Direction(np.array([1.0, 0.0])), [])


def test_constraint_users_are_checked(two_states):
    with pytest.raises(ModelError):
        tv_multi(two_states, Direction.uniform(2), [PowerConstraint(omega=(3,), bound=1.0)])


def test_value_falls_as_probability_moves_to_the_worse_state(moderate_channel, weak_channel, moderate_constraints):
    # The moderate channel has weaker direct and stronger cross gains, so it needs more power at every target.
    direction = Direction(np.array([0.6, 0.8]))
    values = [
        tv_multi(
            TimeVaryingChannel(states=(weak_channel, moderate_channel), rho=np.array([1.0 - worse, worse])),
            direction,
            moderate_constraints,
        ).gamma_star
        for worse in np.linspace(0.1, 0.9, 9)
    ]

    assert all(later <= earlier * (1 + 1e-12) for earlier, later in zip(values, values[1:], strict=False))
    assert values[-1] < values[0]
