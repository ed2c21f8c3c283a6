import numpy as np
import pytest
import scipy.linalg
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from netswitch.core.errors import PreconditionError
from netswitch.core.floquet import (
    SwitchSchedule,
    averaged_generator,
    averaging_gap,
    commutative_average,
    fit_decay_rate,
    monodromy,
    schedule_from_ratio,
    simulate,
)
from tests.helpers import polynomial_in, random_stable


def test_schedule_from_ratio():
    schedule = schedule_from_ratio(0.25, 2.0, 2)
    assert schedule.m == 2
    assert schedule.segments == [(0.25, 0.75), (0.25, 0.75)]
    assert schedule.k == pytest.approx(0.25)
    assert schedule.dwell_A == pytest.approx(0.5)
    assert schedule.to_dict()["period"] == 2.0

    assert schedule_from_ratio(1.0, 3.0).segments == [(3.0, 0.0)]


def test_schedule_validation():
    with pytest.raises(PreconditionError):
        SwitchSchedule(1.0, [(0.5, 0.6)])
    with pytest.raises(PreconditionError):
        SwitchSchedule(1.0, [(-0.5, 1.5)])
    with pytest.raises(PreconditionError):
        SwitchSchedule(0.0, [(0.0, 0.0)])
    with pytest.raises(PreconditionError):
        schedule_from_ratio(1.5, 1.0)


def test_monodromy_of_identical_networks(triangular_pair):
    A, _ = triangular_pair
    schedule = SwitchSchedule(2.0, [(0.5, 0.25), (1.0, 0.25)])
    assert_allclose(monodromy(A, A, schedule), scipy.linalg.expm(2.0 * A), rtol=1e-12, atol=1e-14)

    averaged = averaged_generator(A, A, schedule)
    assert_allclose(averaged.Q, A, atol=1e-8)
    assert averaged.alpha == pytest.approx(-1.0)


def test_averaged_generator_commuting(triangular_pair):
    A, B = triangular_pair
    schedule = schedule_from_ratio(0.3, 1.5, 3)
    averaged = averaged_generator(A, B, schedule)
    assert_allclose(averaged.Q, commutative_average(A, B, 0.3), atol=1e-8)


def test_commutative_average(triangular_pair):
    A, B = triangular_pair
    assert_allclose(commutative_average(A, B, 1.0), A)
    assert_allclose(commutative_average(A, B, 0.0), B)
    c = 2.0
    assert_allclose(commutative_average(A, -A - c * np.eye(3), 0.5), -(c / 2) * np.eye(3))
    with pytest.raises(PreconditionError):
        commutative_average(A, B, -0.1)


def test_simulate_one_period(triangular_pair):
    A, B = triangular_pair
    schedule = SwitchSchedule(1.0, [(0.2, 0.3), (0.4, 0.1)])
    x0 = np.array([1.0, -2.0, 0.5])
    trajectory = simulate(A, B, schedule, x0, periods=3, subsamples=4)

    assert len(trajectory.period_indices) == 4
    times, states = trajectory.period_states()
    assert_allclose(times, [0.0, 1.0, 2.0, 3.0])
    assert_allclose(states[0], x0)
    R = monodromy(A, B, schedule)
    assert_allclose(states[1], R @ x0, rtol=1e-9, atol=1e-12)
    assert_allclose(states[3], np.linalg.matrix_power(R, 3) @ x0, rtol=1e-9, atol=1e-12)
    assert np.all(np.diff(trajectory.times) >= 0)

    with pytest.raises(PreconditionError):
        simulate(A, B, schedule, np.ones(2), periods=1)
    with pytest.raises(PreconditionError):
        simulate(A, B, schedule, x0, periods=0)


def test_decay_rate_matches_averaged_abscissa(triangular_pair):
    A, B = triangular_pair
    schedule = schedule_from_ratio(0.5, 1.0)
    trajectory = simulate(A, B, schedule, np.ones(3), periods=60, subsamples=1)
    rate = fit_decay_rate(trajectory, skip=20)
    assert rate == pytest.approx(-1.75, rel=1e-2)


def test_averaging_gap():
    A = np.array([[-1.0, 1.0], [0.0, -2.0]])
    commuting = averaging_gap(A, -3.0 * np.eye(2) - 0.5 * A, 0.4, 1.0)
    assert commuting.deviation < 1e-8
    assert commuting.alpha_gap == pytest.approx(0.0, abs=1e-8)

    B = np.array([[-1.0, 0.0], [1.0, -2.0]])
    gap = averaging_gap(A, B, 0.5, 1.0)
    assert gap.deviation > 1e-6


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 5), m=st.integers(1, 5))
def test_averaged_generator_is_commutative_average(seed, n, m):
    rng = np.random.default_rng(seed)
    A = random_stable(rng, n)
    B = polynomial_in(A, rng.uniform(-1.0, 1.0, 2))
    period = rng.uniform(0.5, 1.5)
    dwells = rng.dirichlet(np.ones(2 * m)) * period
    schedule = SwitchSchedule(dwells.sum(), dwells.reshape(m, 2))

    averaged = averaged_generator(A, B, schedule)
    expected = commutative_average(A, B, schedule.k)
    assert_allclose(
        np.sort(np.linalg.eigvals(averaged.Q).real),
        np.sort(np.linalg.eigvals(expected).real),
        atol=1e-6,
    )
