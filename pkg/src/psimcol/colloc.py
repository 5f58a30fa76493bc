"""Collocation solvers: Birkhoff (BCOL), Lagrange (LCOL) and preconditioned
Lagrange (P-LCOL) schemes, plus the 2D Dirichlet solver."""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import birkhoff, lacore
from .diffmat import psdm
from .gridgen import lobatto_for, radau_for

SCHEMES = ("bcol", "lcol", "plcol")


class SchemeError(ValueError):
    pass


@dataclass
class SolveReport:
    scheme: str
    family: str
    bc: str
    N: int
    cond2: Optional[float]
    x: np.ndarray
    u: np.ndarray
    max_error: Optional[float] = None

    def to_dict(self):
        d = asdict(self)
        d.pop("x")
        d.pop("u")
        d["schema"] = 1
        return d


def _finish(problem, nodes, scheme, A, rhs, recover, compute_cond):
    c = lacore.cond2(A) if compute_cond else None
    sol = lacore.solve_dense(A, rhs)
    u = recover(sol)
    err = None
    if problem.exact is not None:
        err = float(np.max(np.abs(u - problem.exact(nodes.nodes))))
    bc = problem.bc.tag if problem.bc is not None else "none"
    return SolveReport(scheme, nodes.family, bc, nodes.N, c, nodes.nodes.copy(), u, err)


def bcol_system(problem, psim):
    """Coefficient matrix, right-hand side and recovery map under a Birkhoff basis.

    The unknowns are the highest derivative at the interior nodes.
    """
    x = psim.nodes.nodes
    rows = psim.interior_rows
    icols, bcols = psim.interior_cols, psim.boundary_cols
    xi = x[rows]
    p = problem.order
    if psim.order != p:
        raise SchemeError(f"basis of order {psim.order} cannot discretize an order-{p} problem")
    g = np.asarray(problem.bc_data, dtype=float)
    if g.size != bcols.size:
        raise SchemeError(f"{problem.id}: expected {bcols.size} boundary values, got {g.size}")
    A = problem.lead * np.eye(rows.size)
    rhs = np.asarray(problem.forcing(xi), dtype=float) + np.zeros(rows.size)
    rhs = rhs - problem.lead * (psim.derivative(p)[np.ix_(rows, bcols)] @ g)
    for m in range(p):
        cm = problem.coeff(m, xi)
        if not np.any(cm):
            continue
        Bm = psim.derivative(m)
        A += cm[:, None] * Bm[np.ix_(rows, icols)]
        rhs -= cm * (Bm[np.ix_(rows, bcols)] @ g)
    B = psim.B

    def recover(v):
        return B[:, icols] @ v + B[:, bcols] @ g

    return A, rhs, recover


def solve_bcol(problem, psim, compute_cond=True):
    A, rhs, recover = bcol_system(problem, psim)
    return _finish(problem, psim.nodes, "bcol", A, rhs, recover, compute_cond)


def _check_bvp2(problem):
    if problem.kind != "bvp2":
        raise SchemeError(f"{problem.id} is not a second-order boundary value problem")


def solve_bvp2_bcol(problem, nodes, psim=None, compute_cond=True):
    _check_bvp2(problem)
    if psim is None:
        psim = birkhoff.build_psim(nodes, problem.bc)
    elif psim.variant.kind != problem.bc.kind:
        raise SchemeError("PSIM variant does not match the problem's boundary conditions")
    return solve_bcol(problem, psim, compute_cond)


def _lcol_dirichlet(problem, nodes, D1, D2):
    """``(D2_in + Lr D_in + Ls) u = f - u_B`` and its pieces."""
    n = nodes.N
    idx = nodes.interior
    xi = nodes.nodes[idx]
    r = problem.coeff(1, xi)
    s = problem.coeff(0, xi)
    um, up = problem.bc_data
    A = D2[np.ix_(idx, idx)] + r[:, None] * D1[np.ix_(idx, idx)] + np.diag(s)
    uB = um * (D2[idx, 0] + r * D1[idx, 0]) + up * (D2[idx, n] + r * D1[idx, n])
    f = np.asarray(problem.forcing(xi), dtype=float) + np.zeros(idx.size)
    return A, f, uB, r, s


def _embed(nodes, interior_values, left, right):
    u = np.empty(nodes.N + 1)
    u[0], u[-1] = left, right
    u[1:-1] = interior_values
    return u


def solve_bvp2_lcol(problem, nodes, compute_cond=True):
    """Lagrange collocation; mixed conditions replace the boundary rows (tau)."""
    _check_bvp2(problem)
    D1 = psdm(nodes, 1).full
    D2 = D1 @ D1
    kind = problem.bc.kind
    if kind == "dirichlet":
        A, f, uB, _, _ = _lcol_dirichlet(problem, nodes, D1, D2)
        um, up = problem.bc_data
        return _finish(problem, nodes, "lcol", A, f - uB,
                       lambda v: _embed(nodes, v, um, up), compute_cond)
    if kind == "mixed":
        bc = problem.bc
        n = nodes.N
        x = nodes.nodes
        r = problem.coeff(1, x)
        s = problem.coeff(0, x)
        A = D2 + r[:, None] * D1 + np.diag(s)
        rhs = np.asarray(problem.forcing(x), dtype=float) + np.zeros(n + 1)
        A[0] = bc.b_minus * D1[0]
        A[0, 0] += bc.a_minus
        A[n] = bc.b_plus * D1[n]
        A[n, n] += bc.a_plus
        rhs[0], rhs[n] = problem.bc_data
        return _finish(problem, nodes, "lcol", A, rhs, lambda v: v, compute_cond)
    raise SchemeError(f"LCOL is implemented for Dirichlet and mixed conditions, not {kind}")


def solve_bvp2_plcol(problem, nodes, psim=None, compute_cond=True):
    """LCOL left-preconditioned by the interior PSIM ``B_in``."""
    _check_bvp2(problem)
    if problem.bc.kind != "dirichlet":
        raise SchemeError("P-LCOL is defined for Dirichlet conditions only")
    if psim is None:
        psim = birkhoff.psim_dirichlet(nodes)
    D1 = psdm(nodes, 1).full
    D2 = D1 @ D1
    _, f, uB, r, s = _lcol_dirichlet(problem, nodes, D1, D2)
    Bin = psim.B_in
    idx = nodes.interior
    A = np.eye(idx.size) + Bin @ (r[:, None] * D1[np.ix_(idx, idx)]) + Bin * s[None, :]
    um, up = problem.bc_data
    return _finish(problem, nodes, "plcol", A, Bin @ (f - uB),
                   lambda v: _embed(nodes, v, um, up), compute_cond)


def solve_ivp1(problem, nodes, scheme="bcol", psim=None, compute_cond=True):
    """First-order initial value problem on Gauss-Radau points."""
    if problem.kind != "ivp1":
        raise SchemeError(f"{problem.id} is not a first-order initial value problem")
    if not nodes.is_radau:
        raise SchemeError("first-order IVPs are collocated on LGR or CGR points")
    if scheme == "bcol":
        if psim is None:
            psim = birkhoff.psim_radau(nodes)
        return solve_bcol(problem, psim, compute_cond)
    if scheme != "lcol":
        raise SchemeError(f"unknown IVP scheme {scheme!r}")
    D = psdm(nodes, 1).full
    idx = nodes.interior
    xi = nodes.nodes[idx]
    gam = problem.coeff(0, xi)
    (um,) = problem.bc_data
    A = D[np.ix_(idx, idx)] + np.diag(gam)
    rhs = np.asarray(problem.forcing(xi), dtype=float) - um * D[idx, 0]

    def recover(v):
        return np.concatenate(([um], v))

    return _finish(problem, nodes, "lcol", A, rhs, recover, compute_cond)


def solve_odd_order(problem, nodes, order=None, psim=None, compute_cond=True):
    """Third- or fifth-order problem under the matching odd-order Birkhoff basis."""
    p = problem.order if order is None else order
    if problem.kind != f"odd{p}":
        raise SchemeError(f"{problem.id} is not an order-{p} problem")
    if psim is None:
        psim = birkhoff.psim_odd_order(nodes, p)
    elif psim.variant.kind != "odd" or psim.order != p:
        raise SchemeError("PSIM variant does not match the problem order")
    return solve_bcol(problem, psim, compute_cond)


def solve(problem, scheme, family, N, compute_cond=True):
    """Dispatch a registry problem to the right grid and scheme.

    ``family`` is ``legendre`` or ``chebyshev``; Lobatto or Radau points are
    chosen from the problem type.
    """
    if problem.kind == "ivp1":
        return solve_ivp1(problem, radau_for(family, N), scheme, compute_cond=compute_cond)
    nodes = lobatto_for(family, N)
    if problem.kind == "bvp2":
        if scheme == "bcol":
            return solve_bvp2_bcol(problem, nodes, compute_cond=compute_cond)
        if scheme == "lcol":
            return solve_bvp2_lcol(problem, nodes, compute_cond=compute_cond)
        if scheme == "plcol":
            return solve_bvp2_plcol(problem, nodes, compute_cond=compute_cond)
        raise SchemeError(f"unknown scheme {scheme!r}")
    if problem.kind in ("odd3", "odd5"):
        if scheme != "bcol":
            raise SchemeError("odd-order problems are solved with BCOL only")
        return solve_odd_order(problem, nodes, compute_cond=compute_cond)
    raise SchemeError(f"problem kind {problem.kind!r} has no 1D solver")


def condition_sweep(scheme, problem, Ns, family):
    """``[(N, cond2), ...]`` of the assembled system for each N."""
    return [(N, solve(problem, scheme, family, N).cond2) for N in Ns]


def loglog_slope(Ns, values):
    """Least-squares slope of ``log(values)`` against ``log(Ns)``."""
    return float(np.polyfit(np.log(np.asarray(Ns, float)), np.log(np.asarray(values, float)), 1)[0])


# -- two dimensions ----------------------------------------------------------


@dataclass
class Poisson2dResult:
    x: np.ndarray
    U: np.ndarray  # point values on the full tensor grid, U[i, j] = u(x_i, y_j)
    coeffs: np.ndarray  # Birkhoff expansion coefficients u_kl


def solve_poisson2d(gamma, f, nodes):
    """``Laplacian(u) - gamma u = f`` on the square with ``u = 0`` on the boundary.

    Uses partial diagonalization of the interior PSIM: one generalized
    eigenproblem ``B_in e = lambda (I - gamma B_in) e`` and one small linear
    solve per eigenvalue.
    """
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    if not nodes.is_lobatto:
        raise ValueError("the 2D solver runs on tensor Gauss-Lobatto points")
    psim = birkhoff.psim_dirichlet(nodes)
    B = psim.B_in
    n = B.shape[0]
    x = nodes.nodes
    xi = x[1:-1]
    F = np.asarray(f(xi[:, None], xi[None, :]), dtype=float) + np.zeros((n, n))
    M = np.eye(n) - gamma * B
    eig = lacore.generalized_eig(B, M)
    E, lam = eig.vectors, eig.values
    G = lacore.solve_dense(E, lacore.solve_dense(M, F))
    V = np.empty_like(G)
    eye = np.eye(n)
    for p in range(n):
        V[p] = lacore.solve_dense(B + lam[p] * eye, G[p])
    Uc = E @ V
    U = np.zeros((nodes.N + 1, nodes.N + 1))
    U[1:-1, 1:-1] = B @ Uc @ B.T
    return Poisson2dResult(x.copy(), U, Uc)


def poisson2d_forcing(problem, gamma):
    """Forcing for a 2D registry problem whose ``forcing`` is the Laplacian of ``exact``."""
    return lambda x, y: problem.forcing(x, y) - gamma * problem.exact(x, y)


def solve_poisson2d_dense(gamma, f, nodes):
    """Dense Kronecker solve of the same 2D system, for cross-checking small N."""
    B = birkhoff.psim_dirichlet(nodes).B_in
    n = B.shape[0]
    eye = np.eye(n)
    A = np.kron(eye, B) + np.kron(B, eye) - gamma * np.kron(B, B)
    xi = nodes.nodes[1:-1]
    F = np.asarray(f(xi[:, None], xi[None, :]), dtype=float) + np.zeros((n, n))
    Uc = lacore.solve_dense(A, F.ravel()).reshape(n, n)
    U = np.zeros((nodes.N + 1, nodes.N + 1))
    U[1:-1, 1:-1] = B @ Uc @ B.T
    return Poisson2dResult(nodes.nodes.copy(), U, Uc)
