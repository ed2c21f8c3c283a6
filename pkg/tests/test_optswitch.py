import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from netswitch.core.errors import (
    ImprovementConditionError,
    NonCommutingError,
    NonUniqueMaximumError,
    PreconditionError,
)
from netswitch.core.optswitch import (
    dominant_data,
    envelope,
    general_condition,
    general_lower_bound,
    improvement_condition,
    opt_switch,
    resilience_bounds,
    solve_ao1,
    solve_rros,
)
from tests.helpers import polynomial_in, random_stable

TWO_LINES = [(-2.0, -4.0), (-5.0, -3.0)]


def test_envelope_values():
    assert envelope(TWO_LINES, 0.0) == pytest.approx(-3.0)
    assert envelope(TWO_LINES, 1.0) == pytest.approx(-2.0)
    assert_allclose(envelope(TWO_LINES, [0.25, 0.5]), [-3.5, -3.0])


def test_solve_rros_two_lines():
    solution = solve_rros(TWO_LINES)
    assert solution.k_star == pytest.approx(0.25)
    assert solution.alpha_star == pytest.approx(-3.5)
    assert sorted(solution.active_pairs) == [0, 1]
    k, alpha, active = solution
    assert (k, alpha) == (solution.k_star, solution.alpha_star)


def test_solve_rros_flat_envelope_reports_left_end():
    solution = solve_rros([(-1.0, -1.0), (-2.0, -2.0)])
    assert solution.k_star == 0.0
    assert solution.alpha_star == pytest.approx(-1.0)
    assert solution.argmin_interval == (0.0, 1.0)
    assert solution.active_pairs == [0]


def test_solve_rros_endpoint_minimum():
    # Both lines decrease towards k = 1
    solution = solve_rros([(-3.0, -1.0), (-4.0, -2.0)])
    assert solution.k_star == 1.0
    assert solution.alpha_star == pytest.approx(-3.0)


def test_solve_rros_complex_pairs():
    pairs = [(-2.0 + 1.0j, -4.0 - 0.5j), (-2.0 - 1.0j, -4.0 + 0.5j), (-5.0, -3.0)]
    solution = solve_rros(pairs)
    assert solution.k_star == pytest.approx(0.25)
    assert sorted(solution.active_pairs) == [0, 1, 2]


def test_solve_rros_rejects_bad_input():
    with pytest.raises(PreconditionError):
        solve_rros([])
    with pytest.raises(PreconditionError):
        solve_rros([(np.nan, 1.0)])


def test_improvement_condition():
    d = dominant_data(TWO_LINES)
    assert (d.alpha_A, d.beta_B, d.alpha_B, d.beta_A) == (-2.0, -4.0, -3.0, -5.0)
    assert d.unique
    assert improvement_condition(d)

    boundary = dominant_data([(-2.0, -2.0), (-3.0, -1.0)])
    assert not improvement_condition(boundary)
    with pytest.raises(ImprovementConditionError):
        resilience_bounds(boundary)


def test_improvement_condition_needs_unique_maximum():
    pairs = [(-1.0, -2.0), (-1.0, -3.0), (-4.0, -1.0)]
    d = dominant_data(pairs)
    assert not d.unique
    with pytest.raises(NonUniqueMaximumError):
        improvement_condition(d)
    assert general_condition(pairs)
    assert general_lower_bound(pairs) == pytest.approx(-1.75)


def test_conjugate_maximizers_count_once():
    d = dominant_data([(-1.0 + 2.0j, -3.0 + 1.0j), (-1.0 - 2.0j, -3.0 - 1.0j), (-4.0, -2.0)])
    assert d.unique


def test_resilience_bounds_two_lines():
    d = dominant_data(TWO_LINES)
    lower, upper = resilience_bounds(d)
    assert lower == pytest.approx(-3.5)
    assert upper == -3.0
    assert solve_ao1(d).alpha_star == pytest.approx(lower)
    assert general_lower_bound(TWO_LINES) == pytest.approx(lower)


def test_resilience_bounds_symmetric():
    d = dominant_data([(-1.0, -4.0), (-4.0, -1.0), (-5.0, -5.0)])
    lower, _ = resilience_bounds(d)
    assert lower == pytest.approx((-1.0 + -4.0) / 2)


def test_bounds_bracket_random_commuting_pairs(rng):
    checked = 0
    for _ in range(300):
        n = int(rng.integers(2, 9))
        A = random_stable(rng, n)
        B = polynomial_in(A, rng.uniform(-1.0, 1.0, 3))
        certificate = opt_switch(A, B, tol_comm=1e-8)
        if not certificate.improvable:
            assert certificate.lower_bound is None
            continue
        assert certificate.lower_bound <= certificate.alpha_star + 1e-9
        assert certificate.alpha_star < certificate.upper_bound
        assert certificate.alpha_star < min(certificate.alpha_A, certificate.alpha_B)
        checked += 1
    assert checked > 30


def assert_matches_grid(pairs, points):
    """The exact minimum never exceeds the grid minimum, which is off by at most the grid error"""
    pairs = np.asarray(pairs)
    solution = solve_rros(pairs)
    grid = envelope(pairs, np.linspace(0.0, 1.0, points))
    slope = np.max(np.abs(pairs[:, 0] - pairs[:, 1]))
    assert solution.alpha_star <= grid.min() + 1e-12
    assert grid.min() - solution.alpha_star <= 0.5 * slope / (points - 1) + 1e-12
    assert envelope(pairs, solution.k_star) == pytest.approx(solution.alpha_star)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 15))
def test_solve_rros_matches_grid_search(seed, n):
    assert_matches_grid(np.random.default_rng(seed).uniform(-10.0, 0.0, (n, 2)), 10001)


@pytest.mark.slow
def test_solve_rros_matches_fine_grid_search():
    rng = np.random.default_rng(7)
    for _ in range(10**4):
        n = int(rng.integers(1, 16))
        assert_matches_grid(rng.uniform(-10.0, 0.0, (n, 2)), 10**5)


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(seed=st.integers(0, 2**32 - 1), shift=st.integers(-20, 20))
def test_solve_rros_shift_invariance(seed, shift):
    pairs = np.random.default_rng(seed).integers(-10, 0, (4, 2)).astype(float)
    base = solve_rros(pairs)
    shifted = solve_rros(pairs + shift)
    assert shifted.k_star == pytest.approx(base.k_star, abs=1e-9)
    assert shifted.alpha_star == pytest.approx(base.alpha_star + shift, abs=1e-9)


def test_opt_switch_triangular(triangular_pair):
    A, B = triangular_pair
    certificate = opt_switch(A, B)
    assert certificate.k_star == pytest.approx(1.0 / 3.0)
    assert certificate.alpha_star == pytest.approx(-2.0)
    assert sorted(certificate.active_pairs) == [0, 1, 2]
    assert certificate.improvable
    assert certificate.uniqueness
    assert certificate.lower_bound == pytest.approx(-2.0)
    assert certificate.upper_bound == pytest.approx(-1.0)

    data = certificate.to_dict()
    assert {"k_star", "alpha_star", "lower_bound", "upper_bound", "improvable"} <= set(data)
    assert len(data["pairs"]) == 3


def test_opt_switch_identical_networks(triangular_pair):
    A, _ = triangular_pair
    certificate = opt_switch(A, A)
    assert certificate.k_star == 0.0
    assert certificate.alpha_star == pytest.approx(-1.0)
    assert not certificate.improvable
    assert certificate.lower_bound is None


def test_opt_switch_five_node(five_node_A, five_node_B):
    certificate = opt_switch(five_node_A, five_node_B)
    assert certificate.k_star == pytest.approx(3.0 / 7.0, abs=1e-3)
    assert certificate.alpha_star == pytest.approx(-18.0 / 7.0, abs=1e-3)
    assert certificate.improvable
    assert certificate.alpha_A == pytest.approx(-2.0)
    assert certificate.alpha_B == pytest.approx(-2.25)
    assert certificate.lower_bound <= certificate.alpha_star + 1e-9
    assert certificate.alpha_star < certificate.upper_bound


def test_opt_switch_requires_commuting():
    A = np.array([[-1.0, 1.0], [0.0, -2.0]])
    B = np.array([[-1.0, 0.0], [1.0, -2.0]])
    with pytest.raises(NonCommutingError):
        opt_switch(A, B)
