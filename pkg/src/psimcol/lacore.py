"""Dense linear algebra used by the solvers and the reports (LAPACK-backed)."""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla


class SingularMatrixError(np.linalg.LinAlgError):
    pass


class ComplexSpectrumError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class EigenPairs:
    values: np.ndarray
    vectors: np.ndarray
    max_imag: float


def _square(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def lu(A):
    """Pivoted LU factorization; raises on exact or working-precision singularity."""
    A = _square(A)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu_piv = sla.lu_factor(A, check_finite=False)
    piv = np.abs(np.diag(lu_piv[0]))
    scale = max(np.abs(A).max(), np.finfo(float).tiny)
    if piv.min() <= A.shape[0] * np.finfo(float).eps * scale:
        raise SingularMatrixError("matrix is singular to working precision")
    return lu_piv


def lu_solve(lu_piv, b):
    return sla.lu_solve(lu_piv, b, check_finite=False)


def solve_dense(A, b):
    return lu_solve(lu(A), np.asarray(b, dtype=float))


def cond2(A):
    """2-norm condition number ``sigma_max / sigma_min`` (``inf`` if singular)."""
    A = _square(A)
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def _realify(w, V, A):
    tol = 1e-8 * max(np.linalg.norm(A, 2), np.finfo(float).tiny)
    max_imag = float(np.abs(w.imag).max()) if w.size else 0.0
    if max_imag > tol:
        raise ComplexSpectrumError(f"spectrum is not real: max |Im lambda| = {max_imag:.3e}")
    order = np.argsort(w.real)
    vecs = V[:, order]
    if np.iscomplexobj(vecs):
        # eigenvectors of real eigenvalues of a real matrix can be rotated real
        phase = np.exp(-1j * np.angle(vecs[np.argmax(np.abs(vecs), axis=0), np.arange(vecs.shape[1])]))
        vecs = (vecs * phase).real
    return EigenPairs(w.real[order], vecs, max_imag)


def eig_real(A):
    """Eigenpairs of a matrix expected to have a real spectrum, ascending."""
    A = _square(A)
    w, V = sla.eig(A, check_finite=False)
    return _realify(w, V, A)


def generalized_eig(A, M):
    """Eigenpairs of ``A x = lambda M x`` via ``M^{-1} A``."""
    A = _square(A)
    M = _square(M)
    C = lu_solve(lu(M), A)
    return eig_real(C)
