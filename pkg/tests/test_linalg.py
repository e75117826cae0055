"""
Tests for the dense matrix kernels: psi, LU determinant and solve, and Perron eigenpairs.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sinr_region.config import Tolerances
from sinr_region.exceptions import LinalgError, NegativeEntryError, SingularMatrixError
from sinr_region.linalg import (
    characteristic_polynomial,
    determinant,
    dominant_real_root,
    is_nilpotent,
    psi,
    solve,
    spectral_radius,
)


def positive_matrices(max_n: int = 6):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: arrays(np.float64, (n, n), elements=st.floats(min_value=0.01, max_value=10.0))
    )


def test_psi_adds_vector_to_listed_columns_only():
    x = np.arange(9, dtype=float).reshape(3, 3)
    y = np.array([1.0, 2.0, 3.0])

    result = psi(x, y, [0, 2])

    np.testing.assert_array_equal(result[:, 0], x[:, 0] + y)
    np.testing.assert_array_equal(result[:, 1], x[:, 1])
    np.testing.assert_array_equal(result[:, 2], x[:, 2] + y)
    np.testing.assert_array_equal(x, np.arange(9, dtype=float).reshape(3, 3))


def test_psi_with_no_columns_is_a_copy():
    x = np.eye(2)
    result = psi(x, np.ones(2), [])
    np.testing.assert_array_equal(result, x)
    assert result is not x


@pytest.mark.parametrize(
    "columns,vector",
    [
        pytest.param([3], np.ones(3), id="column-out-of-range"),
        pytest.param([-1], np.ones(3), id="negative-column"),
        pytest.param([0], np.ones(2), id="vector-length"),
    ],
)
def test_psi_rejects_bad_arguments(columns, vector):
    with pytest.raises(LinalgError):
        psi(np.zeros((3, 3)), vector, columns)


def test_psi_rejects_non_square():
    with pytest.raises(LinalgError):
        psi(np.zeros((2, 3)), np.ones(2), [0])


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (4, 4), elements=st.floats(min_value=-5.0, max_value=5.0)))
def test_determinant_matches_numpy(x):
    expected = np.linalg.det(x)
    assert determinant(x) == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_determinant_sign_follows_row_swaps():
    assert determinant(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(-1.0)
    assert determinant(np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])) == pytest.approx(-1.0)


def test_determinant_of_singular_matrix_is_zero():
    assert determinant(np.array([[1.0, 2.0], [2.0, 4.0]])) == pytest.approx(0.0, abs=1e-15)


def test_columns_differing_in_one_place_split_the_determinant(rng):
    # det(X) - det(Y) equals det of X with column i replaced by x_i - y_i.
    for _ in range(100):
        x = rng.normal(size=(5, 5))
        y = x.copy()
        i = int(rng.integers(0, 5))
        y[:, i] = rng.normal(size=5)

        lhs = determinant(x) - determinant(y)
        rhs = determinant(psi(x, -y[:, i], [i]))

        assert rhs == pytest.approx(lhs, rel=1e-9, abs=1e-12)


def test_solve_returns_solution(rng):
    x = rng.normal(size=(5, 5)) + 5 * np.eye(5)
    b = rng.normal(size=5)
    np.testing.assert_allclose(x @ solve(x, b), b, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize(
    "matrix",
    [
        pytest.param(np.zeros((2, 2)), id="zero"),
        pytest.param(np.array([[1.0, 2.0], [2.0, 4.0]]), id="rank-one"),
        pytest.param(np.array([[1.0, 1.0], [1.0, 1.0 + 1e-16]]), id="near-singular"),
    ],
)
def test_solve_reports_singular_systems(matrix):
    with pytest.raises(SingularMatrixError):
        solve(matrix, np.ones(2))


def test_characteristic_polynomial_matches_numpy(rng):
    x = rng.uniform(0, 1, size=(4, 4))
    np.testing.assert_allclose(characteristic_polynomial(x), np.poly(x), rtol=1e-10, atol=1e-12)


def test_dominant_real_root_finds_double_root():
    # (t - 2)^2 (t - 1) has no sign change at its largest root.
    coefficients = np.poly([2.0, 2.0, 1.0])
    assert dominant_real_root(coefficients, upper=5.0) == pytest.approx(2.0, rel=1e-6)


def test_dominant_real_root_without_roots_in_range():
    assert dominant_real_root(np.poly([-1.0, -2.0]), upper=3.0) is None


@settings(max_examples=80, deadline=None)
@given(positive_matrices())
def test_spectral_radius_matches_eigenvalues(x):
    result = spectral_radius(x)

    expected = float(np.max(np.abs(np.linalg.eigvals(x))))
    assert result.converged
    assert result.lambda_star == pytest.approx(expected, rel=1e-9)
    assert result.is_positive()
    assert result.residual(x) <= 1e-8 * max(1.0, expected)
    assert result.vector.sum() == pytest.approx(1.0)


@pytest.mark.parametrize(
    "a,b",
    [
        pytest.param(0.25, 0.04, id="balanced"),
        pytest.param(1e-3, 2.0, id="skewed"),
        pytest.param(3.0, 5.0, id="large"),
    ],
)
def test_spectral_radius_of_periodic_two_by_two(a, b):
    x = np.array([[0.0, a], [b, 0.0]])
    assert spectral_radius(x).lambda_star == pytest.approx(math.sqrt(a * b), rel=1e-10)


def test_spectral_radius_of_random_two_by_two_closed_form(rng):
    for _ in range(100):
        a, b = 10.0 ** rng.uniform(-3, 1, size=2)
        mu1, mu2 = rng.uniform(0.1, 1.0, size=2)
        x = np.array([[0.0, mu1 * a], [mu2 * b, 0.0]])
        assert spectral_radius(x).lambda_star == pytest.approx(math.sqrt(mu1 * a * mu2 * b), rel=1e-10)


@pytest.mark.parametrize(
    "matrix",
    [
        pytest.param(np.zeros((3, 3)), id="zero"),
        pytest.param(np.triu(np.ones((4, 4)), k=1), id="strictly-upper"),
        pytest.param(np.array([[0.0, 0.0], [0.3, 0.0]]), id="one-way-interference"),
    ],
)
def test_spectral_radius_of_nilpotent_matrix_is_zero(matrix):
    result = spectral_radius(matrix)
    assert is_nilpotent(matrix)
    assert result.lambda_star == 0.0
    assert result.method == "nilpotent"


def test_spectral_radius_of_reducible_matrix():
    x = np.array([[0.5, 1.0, 0.0], [0.0, 0.2, 0.0], [0.0, 0.0, 0.3]])
    assert spectral_radius(x).lambda_star == pytest.approx(0.5, rel=1e-10)


def test_spectral_radius_rejects_negative_entries():
    with pytest.raises(NegativeEntryError):
        spectral_radius(np.array([[0.0, -1.0], [1.0, 0.0]]))


def test_spectral_radius_falls_back_to_characteristic_polynomial():
    x = np.array([[0.0, 0.3], [0.2, 0.0]])
    result = spectral_radius(x, tolerances=Tolerances(power_max_iter=1))

    assert not result.converged
    assert result.method == "charpoly"
    assert result.lambda_star == pytest.approx(math.sqrt(0.06), rel=1e-9)


def cofactor_determinant(x: np.ndarray) -> float:
    if x.shape[0] == 1:
        return float(x[0, 0])
    return sum(
        (-1) ** j * x[0, j] * cofactor_determinant(np.delete(x[1:], j, axis=1)) for j in range(x.shape[0])
    )


def test_determinant_matches_cofactor_expansion(rng):
    for n in range(1, 7):
        x = rng.normal(size=(n, n))
        assert determinant(x) == pytest.approx(cofactor_determinant(x), rel=1e-10, abs=1e-12)


def test_solve_matches_cramers_rule(rng):
    for _ in range(20):
        x = rng.normal(size=(4, 4)) + 4 * np.eye(4)
        b = rng.normal(size=4)

        cramer = [determinant(psi(x, b - x[:, i], [i])) / determinant(x) for i in range(4)]

        np.testing.assert_allclose(solve(x, b), cramer, rtol=1e-9, atol=1e-12)


def test_scaled_identity_determinant_is_reciprocal_polynomial(rng):
    # det(I - gamma M) = gamma^n det(I / gamma - M)
    for _ in range(30):
        n = int(rng.integers(2, 6))
        m = rng.uniform(0.0, 1.0, size=(n, n))
        gamma = float(rng.uniform(0.1, 3.0))

        lhs = determinant(np.eye(n) - gamma * m)
        rhs = gamma**n * determinant(np.eye(n) / gamma - m)

        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("scale", [1e-3, 0.5, 7.0, 1e3])
def test_spectral_radius_is_homogeneous(rng, scale):
    x = rng.uniform(0.0, 1.0, size=(5, 5))
    assert spectral_radius(scale * x).lambda_star == pytest.approx(scale * spectral_radius(x).lambda_star, rel=1e-9)


def test_spectral_radius_is_monotone_in_entries(rng):
    for _ in range(50):
        x = rng.uniform(0.0, 1.0, size=(5, 5))
        y = x + rng.uniform(0.0, 0.2, size=(5, 5)) * (rng.uniform(size=(5, 5)) < 0.3)

        assert spectral_radius(x).lambda_star <= spectral_radius(y).lambda_star * (1 + 1e-12)


def test_spectral_radius_is_largest_characteristic_root(rng):
    for _ in range(30):
        x = rng.uniform(0.01, 1.0, size=(6, 6))
        roots = np.roots(characteristic_polynomial(x))
        largest = float(np.max(roots[np.abs(roots.imag) <= 1e-9].real))

        assert spectral_radius(x).lambda_star == pytest.approx(largest, rel=1e-8)


def test_dominant_real_root_of_simple_roots():
    coefficients = np.poly([0.25, 1.0 / 3.0, 2.0 / 3.0])
    assert dominant_real_root(coefficients, upper=1.0) == pytest.approx(2.0 / 3.0, rel=1e-13)
