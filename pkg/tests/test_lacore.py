import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings
from hypothesis import strategies as st

from psimcol import lacore


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 30), seed=st.integers(0, 2**31))
def test_solve_matches_numpy(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + n * np.eye(n)
    b = rng.standard_normal(n)
    assert np.allclose(lacore.solve_dense(A, b), np.linalg.solve(A, b), atol=1e-10)


def test_singular_matrix_raises():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(lacore.SingularMatrixError):
        lacore.lu(A)
    with pytest.raises(np.linalg.LinAlgError):
        lacore.solve_dense(np.zeros((3, 3)), np.ones(3))


def test_rejects_nonsquare_and_nonfinite():
    with pytest.raises(ValueError):
        lacore.lu(np.ones((2, 3)))
    with pytest.raises(ValueError):
        lacore.cond2(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_cond2_values():
    assert lacore.cond2(np.diag([1.0, 4.0])) == pytest.approx(4.0)
    assert lacore.cond2(np.diag([1.0, 0.0])) == float("inf")
    rng = np.random.default_rng(3)
    A = rng.standard_normal((12, 12))
    assert lacore.cond2(A) == pytest.approx(np.linalg.cond(A, 2), rel=1e-12)


def test_eig_real_sorted_and_vectors():
    rng = np.random.default_rng(5)
    Q = np.linalg.qr(rng.standard_normal((6, 6)))[0]
    A = Q @ np.diag([3.0, -1.0, 2.0, 0.5, 7.0, 1.5]) @ Q.T
    ev = lacore.eig_real(A)
    assert np.allclose(ev.values, [-1.0, 0.5, 1.5, 2.0, 3.0, 7.0])
    assert np.isrealobj(ev.vectors)
    assert np.allclose(A @ ev.vectors, ev.vectors * ev.values, atol=1e-12)


def test_eig_real_rejects_complex_spectrum():
    with pytest.raises(lacore.ComplexSpectrumError):
        lacore.eig_real(np.array([[0.0, -1.0], [1.0, 0.0]]))


def test_generalized_eig_matches_scipy():
    rng = np.random.default_rng(11)
    A = rng.standard_normal((8, 8))
    A = A @ A.T
    M = np.eye(8) + 0.1 * np.diag(rng.random(8))
    ev = lacore.generalized_eig(A, M)
    ref = np.sort(sla.eigh(A, M, eigvals_only=True))
    assert np.allclose(ev.values, ref, rtol=1e-10)
    assert np.allclose(A @ ev.vectors, M @ ev.vectors * ev.values, atol=1e-9)
