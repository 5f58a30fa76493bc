"""Legendre and Chebyshev polynomials in coefficient space.

Everything here works on coefficient vectors ``c`` where ``c[k]`` multiplies
``P_k`` (Legendre) or ``T_k`` (Chebyshev). Integration is carried out with the
sparse three-term antiderivative relations, so integrating a degree-N
expansion costs O(N) and never forms a dense transform.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import legendre as npleg


class BasisFamily(Enum):
    LEGENDRE = "legendre"
    CHEBYSHEV = "chebyshev"


LEGENDRE = BasisFamily.LEGENDRE
CHEBYSHEV = BasisFamily.CHEBYSHEV


@dataclass(frozen=True)
class SpectralCoeffs:
    """A polynomial stored by its expansion coefficients in one family."""

    family: BasisFamily
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, ndmin=1)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        return eval_coeffs(self, x)


def as_family(family):
    if isinstance(family, BasisFamily):
        return family
    return BasisFamily(str(family).lower())


def eval_basis(family, k, x):
    """Evaluate ``P_k(x)`` or ``T_k(x)`` by forward three-term recurrence."""
    family = as_family(family)
    if k < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if k == 0:
        return p0
    p1 = x.copy()
    for n in range(1, k):
        if family is LEGENDRE:
            p0, p1 = p1, ((2 * n + 1) * x * p1 - n * p0) / (n + 1)
        else:
            p0, p1 = p1, 2.0 * x * p1 - p0
    return p1


def basis_matrix(family, n, x):
    """Return ``V`` with ``V[i, k] = phi_k(x_i)`` for ``k = 0..n``."""
    family = as_family(family)
    x = np.asarray(x, dtype=float).ravel()
    V = np.empty((x.size, n + 1))
    V[:, 0] = 1.0
    if n >= 1:
        V[:, 1] = x
    for k in range(1, n):
        if family is LEGENDRE:
            V[:, k + 1] = ((2 * k + 1) * x * V[:, k] - k * V[:, k - 1]) / (k + 1)
        else:
            V[:, k + 1] = 2.0 * x * V[:, k] - V[:, k - 1]
    return V


def basis_and_derivatives(family, k, x):
    """Return ``(phi_k, phi_k', phi_k'')`` at ``x``.

    Derivatives use ``phi_{n+1}' = phi_{n-1}' + a_n phi_n`` style recurrences,
    which stay finite at the endpoints.
    """
    family = as_family(family)
    x = np.asarray(x, dtype=float)
    one = np.ones_like(x)
    zero = np.zeros_like(x)
    if k == 0:
        return one, zero, zero
    # (value, first, second) for degrees n-1 and n
    a = (one, zero, zero)
    b = (x.copy(), one.copy(), zero.copy())
    for n in range(1, k):
        if family is LEGENDRE:
            v = ((2 * n + 1) * x * b[0] - n * a[0]) / (n + 1)
            d1 = a[1] + (2 * n + 1) * b[0]
            d2 = a[2] + (2 * n + 1) * b[1]
        else:
            v = 2.0 * x * b[0] - a[0]
            # T_{n+1}'/(n+1) - T_{n-1}'/(n-1) = 2 T_n
            if n == 1:
                d1 = 4.0 * x
                d2 = 4.0 * one
            else:
                d1 = (n + 1) * (2.0 * b[0] + a[1] / (n - 1))
                d2 = (n + 1) * (2.0 * b[1] + a[2] / (n - 1))
        a, b = b, (v, d1, d2)
    return b


def eval_basis_deriv_endpoint(family, k, sign):
    """Closed-form ``phi_k'(+-1)``."""
    family = as_family(family)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if k == 0:
        return 0.0
    s = float(sign) ** (k - 1)
    if family is LEGENDRE:
        return 0.5 * s * k * (k + 1)
    return s * k * k


def endpoint_values(family, n, sign):
    """``phi_k(+-1)`` for ``k = 0..n``."""
    k = np.arange(n + 1)
    return np.where(k % 2 == 0, 1.0, float(sign))


def eval_coeffs(c, x):
    """Evaluate an expansion by Clenshaw backward summation.

    ``c`` may be a :class:`SpectralCoeffs` or a ``(family, array)`` pair passed
    through :func:`clenshaw`.
    """
    return clenshaw(c.family, c.coeffs, x)


def clenshaw(family, coeffs, x):
    family = as_family(family)
    coeffs = np.asarray(coeffs, dtype=float)
    x = np.asarray(x, dtype=float)
    n = len(coeffs) - 1
    if n < 0:
        return np.zeros_like(x)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    if family is CHEBYSHEV:
        for k in range(n, 0, -1):
            b1, b2 = coeffs[k] + 2.0 * x * b1 - b2, b1
        return coeffs[0] + x * b1 - b2
    # P_{k+1} = alpha_k P_k + beta_k P_{k-1}, alpha_k = (2k+1)x/(k+1), beta_k = -k/(k+1)
    for k in range(n, 0, -1):
        alpha = (2 * k + 1) * x / (k + 1)
        beta = -(k + 1) / (k + 2)
        b1, b2 = coeffs[k] + alpha * b1 + beta * b2, b1
    return coeffs[0] + x * b1 - 0.5 * b2


def _from_monomial(family, mono):
    if family is LEGENDRE:
        return npleg.poly2leg(mono)
    return npcheb.poly2cheb(mono)


def _low_degree_table(family):
    """Antiderivatives of the first few basis polynomials, from their explicit
    monomial forms, converted back into the family's basis."""
    # monomial coefficients, lowest power first
    one_plus_x = [1.0, 1.0]
    sq_over_2 = [0.5, 1.0, 0.5]  # (1+x)^2/2
    p1_int2 = [-2.0 / 6, -3.0 / 6, 0.0, 1.0 / 6]  # (1+x)^2 (x-2)/6
    first = {0: one_plus_x}
    second = {0: sq_over_2, 1: p1_int2}
    if family is CHEBYSHEV:
        first[1] = [-0.5, 0.0, 0.5]  # (x^2-1)/2
        second[2] = [0.0, -2.0 / 6, -3.0 / 6, 0.0, 1.0 / 6]  # x(1+x)^2(x-2)/6
    conv = lambda d: {k: _from_monomial(family, np.array(v)) for k, v in d.items()}
    return conv(first), conv(second)


_LOW = {f: _low_degree_table(f) for f in BasisFamily}


def _integrate_once(family, c):
    """Coefficients of ``int_{-1}^x q``; ``c`` may be 2-D (one column per poly)."""
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    out = np.zeros((n + 1,) + c.shape[1:])
    low1 = _LOW[family][0]
    for k, v in low1.items():
        if k < n:
            out[: len(v)] += np.multiply.outer(v, c[k])
    if family is LEGENDRE:
        k = np.arange(1, n)
        if k.size:
            s = (c[1:].T / (2 * k + 1)).T
            out[2 : n + 1] += s
            out[0 : n - 1] -= s
        return out
    k = np.arange(2, n)
    if k.size:
        out[3 : n + 1] += (c[2:].T / (2 * (k + 1))).T
        out[1 : n - 1] -= (c[2:].T / (2 * (k - 1))).T
        sgn = np.where(k % 2 == 0, 1.0, -1.0)
        out[0] -= ((sgn / (k * k - 1.0)) * c[2:].T).T.sum(axis=0)
    return out


def _integrate_twice(family, c):
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    out = np.zeros((n + 2,) + c.shape[1:])
    low2 = _LOW[family][1]
    for k, v in low2.items():
        if k < n:
            out[: len(v)] += np.multiply.outer(v, c[k])
    if family is LEGENDRE:
        k = np.arange(2, n).astype(float)
        if k.size:
            ck = c[2:].T
            out[4 : n + 2] += (ck / ((2 * k + 1) * (2 * k + 3))).T
            out[2:n] -= (ck * 2.0 / ((2 * k - 1) * (2 * k + 3))).T
            out[0 : n - 2] += (ck / ((2 * k - 1) * (2 * k + 1))).T
        return out
    k = np.arange(3, n).astype(float)
    if k.size:
        ck = c[3:].T
        sgn = np.where(np.arange(3, n) % 2 == 0, 1.0, -1.0)
        out[5 : n + 2] += (ck / (4 * (k + 1) * (k + 2))).T
        out[3:n] -= (ck / (2 * (k * k - 1))).T
        out[1 : n - 2] += (ck / (4 * (k - 1) * (k - 2))).T
        lin = (sgn / (k * k - 1)) * ck
        out[0] -= lin.T.sum(axis=0)  # -(-1)^k (1 + x) / (k^2 - 1)
        out[1] -= lin.T.sum(axis=0)
        out[0] -= (3.0 * sgn / ((k * k - 1) * (k * k - 4)) * ck).T.sum(axis=0)
    return out


def antiderivative_array(family, c, m=1):
    """Array form of :func:`antiderivative`; accepts a 2-D stack of columns."""
    family = as_family(family)
    if m <= 0:
        raise ValueError("antiderivative order must be positive")
    c = np.asarray(c, dtype=float)
    while m >= 2:
        c = _integrate_twice(family, c)
        m -= 2
    if m == 1:
        c = _integrate_once(family, c)
    return c


def antiderivative(c, m=1):
    """``m``-fold antiderivative anchored at ``x = -1``.

    The result vanishes at -1 together with its first ``m - 1`` derivatives.
    """
    return SpectralCoeffs(c.family, antiderivative_array(c.family, c.coeffs, m))


def derivative_array(family, c):
    """Coefficient-space derivative (dense; used for checks, not solvers)."""
    family = as_family(family)
    c = np.asarray(c, dtype=float)
    if family is LEGENDRE:
        return npleg.legder(c)
    return npcheb.chebder(c)


def endpoint_value(c, sign):
    """Value of a coefficient stack at ``x = +-1`` (column-wise for 2-D)."""
    c = np.asarray(c, dtype=float)
    return endpoint_values(None, c.shape[0] - 1, sign) @ c


# -- interior Lagrange projections ------------------------------------------


def interior_lagrange_matrix(nodes, kmax=None):
    """Coefficients of all interior Lagrange polynomials ``L_j``.

    Column ``j - 1`` holds the expansion of ``L_j`` (the Lagrange polynomial on
    the interior nodes) in the family basis. The coefficients come from the
    quadrature rule of ``nodes`` with the endpoint values of ``L_j`` eliminated
    through the vanishing top modes, so no linear system is solved.

    Parameters
    ----------
    nodes : NodeSet
        A Lobatto (LGL/CGL) or Radau (LGR/CGR) node set.
    kmax : int, optional
        Highest coefficient index to compute. Defaults to the true degree of
        ``L_j`` (N-2 for Lobatto, N-1 for Radau); larger values are allowed up
        to N+1 (Lobatto) or N (Radau), where the extra modes vanish.
    """
    N = nodes.N
    fam = nodes.basis
    x = nodes.nodes
    w = nodes.weights
    lobatto = nodes.is_lobatto
    if lobatto:
        jj = np.arange(1, N)
        deg = N - 2
        top = N + 1
    else:
        jj = np.arange(1, N + 1)
        deg = N - 1
        top = N
    if kmax is None:
        kmax = deg
    if kmax > top:
        raise ValueError(f"kmax must be <= {top} for this node family")
    xj = x[jj]
    V = basis_matrix(fam, max(kmax, N), xj)  # rows j, cols k
    k = np.arange(kmax + 1)
    par = np.where((N + k) % 2 == 0, 1.0, -1.0)  # (-1)^(N+k)
    if lobatto:
        odd = 0.5 * (1.0 - par)
        even = 0.5 * (1.0 + par)
        raw = V[:, : kmax + 1] - np.outer(V[:, N - 1], odd) - np.outer(V[:, N], even)
        if fam is LEGENDRE:
            beta = raw * w[jj, None]
            coef = beta * ((2 * k + 1) / 2.0)
        else:
            ck = np.where(k == 0, 2.0, 1.0)
            coef = raw * (2.0 / (N * ck))
    else:
        raw = V[:, : kmax + 1] - np.outer(V[:, N], par)
        if fam is LEGENDRE:
            coef = raw * w[jj, None] * ((2 * k + 1) / 2.0)
        else:
            ck = np.where(k == 0, 2.0, 1.0)
            coef = raw * (4.0 / (ck * (2 * N + 1)))
    return coef.T.copy()


def project_interior_lagrange(nodes, j):
    """Expansion coefficients of the interior Lagrange polynomial ``L_j``."""
    N = nodes.N
    hi = N - 1 if nodes.is_lobatto else N
    if not 1 <= j <= hi:
        raise ValueError(f"j={j} is not an interior index (1..{hi})")
    return SpectralCoeffs(nodes.basis, interior_lagrange_matrix(nodes)[:, j - 1])
