import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ltikit import matrixcore as mc
from ltikit.errors import DimensionMismatch, NonFiniteValue, SingularMatrix


def test_solve_identity():
    np.testing.assert_array_equal(mc.solve(np.eye(2), [3, 4]), [3, 4])


def test_solve_rotation_equilibrium():
    # A x = -B u for the rotation system with omega = 2, u = 1
    x = mc.solve([[0, 2], [-2, 0]], [0, -1])
    np.testing.assert_allclose(x, [0.5, 0], atol=1e-15)


def test_solve_rank_one_is_singular():
    with pytest.raises(SingularMatrix):
        mc.solve([[1, 2], [2, 4]], [1, 0])


def test_solve_ill_conditioned_rejected():
    A = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-12]])
    with pytest.raises(SingularMatrix):
        mc.solve(A, [1, 1])
    # a looser limit lets it through
    mc.solve(A, [1, 1], cond_limit=1e16)


def test_solve_matrix_rhs_and_shape_checks():
    A = np.array([[4.0, 1.0], [2.0, 3.0]])
    X = mc.solve(A, np.eye(2))
    np.testing.assert_allclose(A @ X, np.eye(2), atol=1e-15)
    with pytest.raises(DimensionMismatch):
        mc.solve(A, [1, 2, 3])
    with pytest.raises(DimensionMismatch):
        mc.solve(np.ones((2, 3)), [1, 2])


def test_non_finite_rejected():
    with pytest.raises(NonFiniteValue):
        mc.as_matrix([[1.0, math.nan]])


@pytest.mark.parametrize("A, expected", [
    (np.eye(3), 1.0),
    ([[1, 1], [1, 2]], 1.0),
    ([[1, 2], [2, 4]], 0.0),
    ([[2, 0, 0], [5, 3, 0], [1, 1, 4]], 24.0),
])
def test_determinant_examples(A, expected):
    assert mc.determinant(A) == pytest.approx(expected, abs=1e-14)


def test_determinant_sign_from_pivoting():
    assert mc.determinant([[0, 1], [1, 0]]) == -1.0


def test_eigenvalue_examples():
    assert list(mc.eigenvalues(np.diag([-1.0, -2.0]))) == [-2, -1]
    rot = mc.eigenvalues([[0, 2], [-2, 0]]).as_array()
    np.testing.assert_allclose(sorted(rot, key=lambda z: z.imag), [-2j, 2j], atol=1e-14)
    tri = mc.eigenvalues([[1, 0.08015], [0, 0.6313]]).as_array()
    np.testing.assert_allclose(tri, [0.6313, 1.0], atol=1e-14)


def test_eigenvalues_order_limit():
    with pytest.raises(DimensionMismatch):
        mc.eigenvalues(np.eye(33))


def test_eigenvalues_defective_and_zero():
    np.testing.assert_array_equal(mc.eigenvalues(np.zeros((3, 3))).as_array(), np.zeros(3))
    jordan = np.array([[2.0, 1.0], [0.0, 2.0]])
    np.testing.assert_allclose(mc.eigenvalues(jordan).as_array(), [2, 2], atol=1e-7)


def test_eigenvalue_residual_random(rng):
    for n in (1, 2, 3, 5, 8, 16, 32):
        A = rng.standard_normal((n, n))
        nrm = np.linalg.norm(A, 2)
        spec = mc.eigenvalues(A)
        for lam in spec:
            smin = np.linalg.svd(A - lam * np.eye(n), compute_uv=False)[-1]
            assert smin <= 1e-8 * nrm
        # conjugate pairs
        vals = spec.as_array()
        np.testing.assert_allclose(np.sort_complex(vals), np.sort_complex(vals.conj()), atol=1e-12)
        assert abs(np.prod(vals) - np.linalg.det(A)) <= 1e-8 * max(1, abs(np.linalg.det(A)))


@pytest.mark.parametrize("A", [[[0, 1], [-1, 0]], [[-3, 2], [1, -5]], [[0.5]]])
def test_expm_zero_time_is_identity(A):
    np.testing.assert_array_equal(mc.expm(A, 0.0), np.eye(len(A)))


def test_expm_rotation_quarter_turn():
    E = mc.expm([[0, 1], [-1, 0]], math.pi / 2)
    np.testing.assert_allclose(E, [[0, 1], [-1, 0]], atol=1e-15)


def test_expm_nilpotent():
    np.testing.assert_allclose(mc.expm([[0, 1], [0, 0]], 3.0), [[1, 3], [0, 1]], atol=1e-14)


def test_expm_against_scipy(rng):
    for _ in range(100):
        n = int(rng.integers(1, 7))
        A = rng.standard_normal((n, n))
        t = rng.uniform(-1, 1) * 50 / max(np.linalg.norm(A, 1), 1e-12)
        ref = scipy.linalg.expm(A * t)
        got = mc.expm(A, t)
        assert np.linalg.norm(got - ref) <= 1e-10 * np.linalg.norm(ref) + 1e-300


def test_matrix_power_matches_repeated_product():
    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    np.testing.assert_array_equal(mc.matrix_power(A, 5), [[1, 5], [0, 1]])
    np.testing.assert_array_equal(mc.matrix_power(A, 0), np.eye(2))


finite = st.floats(-2.0, 2.0, allow_nan=False)


@given(arrays(float, (3, 3), elements=finite), arrays(float, (3, 3), elements=finite))
def test_determinant_multiplicative(A, B):
    lhs = mc.determinant(A @ B)
    rhs = mc.determinant(A) * mc.determinant(B)
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))


@given(arrays(float, (2, 2), elements=finite), st.floats(-1, 1), st.floats(-1, 1))
def test_expm_group_law_property(A, s, t):
    np.testing.assert_allclose(mc.expm(A, s) @ mc.expm(A, t), mc.expm(A, s + t), atol=1e-9)
