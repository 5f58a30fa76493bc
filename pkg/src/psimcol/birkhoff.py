"""Birkhoff interpolation bases and pseudospectral integration matrices.

A Birkhoff basis interpolates the highest derivative of a problem at the
interior collocation points and the boundary data at the endpoints. Sampling
the basis at the nodes gives a PSIM ``B`` which is the exact inverse of the
boundary-modified differentiation matrix.

Each basis column is kept in coefficient space, one coefficient stack per
derivative level, built only from the sparse antiderivative relations in
:mod:`psimcol.orthopoly`. Columns are ordered as

* Dirichlet / mixed: ``B_0`` (left functional), interior ``B_1..B_{N-1}``,
  ``B_N`` (right functional);
* Radau: ``B_0 = 1``, interior ``B_1..B_N``;
* Neumann: ``B_0`` (``u'(-1)``), interior, ``B_N`` (``u'(1)``), ``B_{N+1}``
  (``u(-1)``);
* odd order 3: ``u(-1)``, interior, ``u(1)``, ``u'(1)``;
* odd order 5: ``u(-1)``, interior, ``u(1)``, ``u'(-1)``, ``u'(1)``,
  ``u''(1)``.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import legendre as npleg
from numpy.polynomial import polynomial as npoly

from . import orthopoly as op
from .diffmat import psdm


class PsimError(ValueError):
    pass


@dataclass(frozen=True)
class BcVariant:
    """Boundary-condition pattern of a Birkhoff basis.

    ``kind`` is one of ``dirichlet``, ``mixed``, ``neumann``, ``radau``,
    ``odd``. Mixed conditions read ``a_minus u(-1) + b_minus u'(-1)`` and
    ``a_plus u(1) + b_plus u'(1)``; ``order`` is the highest derivative order
    the basis interpolates.
    """

    kind: str
    a_minus: float = 1.0
    b_minus: float = 0.0
    a_plus: float = 1.0
    b_plus: float = 0.0
    order: int = 2

    def __post_init__(self):
        if self.kind not in ("dirichlet", "mixed", "neumann", "radau", "odd"):
            raise PsimError(f"unknown boundary variant {self.kind!r}")
        if self.kind == "mixed" and self.d == 0.0:
            raise PsimError(
                "mixed conditions with 2 a+ a- - a+ b- + a- b+ = 0 are not unisolvent "
                "(pure Neumann); use the anchored Neumann variant instead"
            )
        if self.kind == "odd" and self.order not in (3, 5):
            raise PsimError("odd-order bases exist for order 3 and 5 only")

    @property
    def d(self):
        return 2 * self.a_plus * self.a_minus - self.a_plus * self.b_minus + self.a_minus * self.b_plus

    @property
    def tag(self):
        if self.kind == "odd":
            return f"odd{self.order}"
        return self.kind


def dirichlet():
    return BcVariant("dirichlet")


def mixed(a_minus, b_minus, a_plus, b_plus):
    return BcVariant("mixed", a_minus, b_minus, a_plus, b_plus)


def neumann():
    return BcVariant("neumann")


def radau():
    return BcVariant("radau", order=1)


def odd_order(p):
    return BcVariant("odd", order=p)


@dataclass(frozen=True, eq=False)
class PsimMatrix:
    """Birkhoff basis on a node set, sampled at the nodes.

    ``coeffs[m]`` holds the expansion coefficients of the m-th derivative of
    every column, for ``m = 0..order``. ``B`` and ``B1`` are the samples of
    levels 0 and 1 at the nodes.
    """

    nodes: object
    variant: BcVariant
    coeffs: tuple
    interior_cols: np.ndarray
    boundary_cols: np.ndarray
    boundary_labels: tuple
    B: np.ndarray = field(repr=False)
    B1: np.ndarray = field(repr=False)

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def degree(self):
        return self.coeffs[0].shape[0] - 1

    @property
    def interior_rows(self):
        return self.nodes.interior

    @property
    def B_in(self):
        return self.block(self.B)

    @property
    def B1_in(self):
        return self.block(self.B1)

    def block(self, M):
        """Interior-row / interior-column block of a node-sampled matrix."""
        return M[np.ix_(self.interior_rows, self.interior_cols)]

    def evaluate(self, x, k=0):
        """Values of the k-th derivative of every column at points ``x``."""
        V = op.basis_matrix(self.nodes.basis, self.degree, np.atleast_1d(x))
        return V @ self.coeffs[k][: self.degree + 1]

    def derivative(self, k):
        """``B^(k)`` sampled at the nodes, from coefficient space."""
        if k == 0:
            return self.B
        if k == 1:
            return self.B1
        return self.evaluate(self.nodes.nodes, k)


def _family_from_monomial(family, mono):
    """Convert monomial coefficient columns (lowest power first) to ``family``."""
    mono = np.atleast_2d(np.asarray(mono, dtype=float))
    conv = npleg.poly2leg if family is op.LEGENDRE else npcheb.poly2cheb
    n = mono.shape[0]
    T = np.zeros((n, n))
    for m in range(n):
        e = np.zeros(n)
        e[m] = 1.0
        c = conv(e)
        T[: len(c), m] = c
    return T @ mono


def _pad(c, n):
    out = np.zeros((n,) + c.shape[1:])
    out[: c.shape[0]] = c
    return out


def _mono_derivative(mono, m):
    """Derivative of stacked monomial columns, same row count."""
    out = np.zeros_like(mono)
    for j in range(mono.shape[1]):
        d = npoly.polyder(mono[:, j], m) if m else mono[:, j]
        out[: len(d), j] = d
    return out


def _integration_levels(nodes, p):
    """``[L, d^-1 L, ..., d^-p L]`` for all interior Lagrange polynomials."""
    fam = nodes.basis
    levels = [op.interior_lagrange_matrix(nodes)]
    for _ in range(p):
        levels.append(op.antiderivative_array(fam, levels[-1], 1))
    return levels


def _functional_on_monomials(functional, p):
    """Row of ``functional(x^m)`` for m = 0..p-1.

    ``functional`` is a list of ``(side, order, weight)`` terms.
    """
    row = np.zeros(p)
    for m in range(p):
        e = np.zeros(p)
        e[m] = 1.0
        for side, order, weight in functional:
            d = npoly.polyder(e, order) if order else e
            row[m] += weight * npoly.polyval(float(side), d)
    return row


def _functional_on_levels(functional, levels, p):
    """``functional(d^-p L_j)`` for every interior j, via lower levels."""
    out = np.zeros(levels[0].shape[1])
    for side, order, weight in functional:
        out += weight * op.endpoint_value(levels[p - order], side)
    return out


def _build_generic(nodes, variant, p, functionals, labels):
    """Bases whose boundary corrections live in ``P_{p-1}``."""
    fam = nodes.basis
    levels = _integration_levels(nodes, p)
    n_int = levels[0].shape[1]
    F = np.array([_functional_on_monomials(f, p) for f in functionals])
    if abs(np.linalg.det(F)) < 1e-12 * max(1.0, np.abs(F).max()) ** p:
        raise PsimError("boundary functionals are not unisolvent on P_{p-1}")
    dual = np.linalg.solve(F, np.eye(p))  # column f: monomials of the dual poly
    G = np.array([_functional_on_levels(f, levels, p) for f in functionals])
    corr = -dual @ G  # monomial coefficients of the interior corrections

    ncols = n_int + p
    nrow = levels[p].shape[0]
    bcols = np.array([0] + list(range(n_int + 1, ncols)))
    icols = np.arange(1, n_int + 1)
    stacks = []
    for m in range(p + 1):
        C = np.zeros((nrow, ncols))
        C[:, icols] = _pad(levels[p - m], nrow) + _pad(
            _family_from_monomial(fam, _mono_derivative(corr, m)), nrow
        )
        C[:, bcols] = _pad(_family_from_monomial(fam, _mono_derivative(dual, m)), nrow)
        stacks.append(C)
    return stacks, icols, bcols, tuple(labels)


def _finish(nodes, variant, stacks, icols, bcols, labels):
    V = op.basis_matrix(nodes.basis, stacks[0].shape[0] - 1, nodes.nodes)
    B = V @ stacks[0]
    B1 = V @ stacks[1]
    for s in stacks:
        s.setflags(write=False)
    B.setflags(write=False)
    B1.setflags(write=False)
    return PsimMatrix(nodes, variant, tuple(stacks), icols, bcols, labels, B, B1)


def _require_lobatto(nodes, what):
    if not nodes.is_lobatto:
        raise PsimError(f"{what} needs an LGL or CGL node set, got {nodes.family}")
    if nodes.N < 2:
        raise PsimError(f"{what} needs N >= 2")


def psim_mixed(nodes, a_minus, b_minus, a_plus, b_plus, variant=None):
    """Second-order basis for ``a- u(-1) + b- u'(-1)``, ``a+ u(1) + b+ u'(1)``."""
    _require_lobatto(nodes, "psim_mixed")
    if variant is None:
        variant = mixed(a_minus, b_minus, a_plus, b_plus)
    functionals = [
        [(-1, 0, a_minus), (-1, 1, b_minus)],
        [(1, 0, a_plus), (1, 1, b_plus)],
    ]
    parts = _build_generic(nodes, variant, 2, functionals, ("left", "right"))
    return _finish(nodes, variant, *parts)


def psim_dirichlet(nodes):
    """Second-order PSIM for ``u(-1)``, ``u''(x_j)``, ``u(1)`` data."""
    _require_lobatto(nodes, "psim_dirichlet")
    return psim_mixed(nodes, 1.0, 0.0, 1.0, 0.0, variant=dirichlet())


def psim_neumann(nodes):
    """Basis for ``u(-1)``, ``u'(-1)``, ``u''(x_j)``, ``u'(1)`` (odd N only)."""
    _require_lobatto(nodes, "psim_neumann")
    N = nodes.N
    if N % 2 == 0:
        raise PsimError("the Neumann Birkhoff problem is unisolvent only for odd N")
    if N < 3:
        raise PsimError("psim_neumann needs N >= 3")
    fam = nodes.basis
    levels = _integration_levels(nodes, 2)
    n_int = N - 1
    nrow = N + 2

    # Q_N = phi_N' vanishes at the interior nodes; int_{-1}^{1} Q_N = 2 for odd N
    eN = np.zeros(N + 1)
    eN[N] = 1.0
    q1 = eN.copy()
    q1[0] -= (-1.0) ** N  # d^-1 Q_N = phi_N - phi_N(-1)
    q2 = op.antiderivative_array(fam, q1, 1)
    q0 = op.derivative_array(fam, eN)
    bn = [_pad(q2, nrow) / 2, _pad(q1, nrow) / 2, _pad(q0, nrow) / 2]

    lin = [np.zeros(nrow) for _ in range(3)]  # 1 + x and its derivatives
    lin[0][:2] = _family_from_monomial(fam, [[1.0], [1.0]])[:, 0]
    lin[1][0] = 1.0
    one = [np.zeros(nrow) for _ in range(3)]
    one[0][0] = 1.0

    total = op.endpoint_value(levels[1], 1)  # int_{-1}^{1} L_j
    icols = np.arange(1, n_int + 1)
    bcols = np.array([0, N, N + 1])
    stacks = []
    for m in range(3):
        C = np.zeros((nrow, N + 2))
        C[:, icols] = _pad(levels[2 - m], nrow) - np.outer(bn[m], total)
        C[:, 0] = lin[m] - bn[m]
        C[:, N] = bn[m]
        C[:, N + 1] = one[m]
        stacks.append(C)
    return _finish(nodes, neumann(), stacks, icols, bcols, ("dleft", "dright", "left"))


def psim_radau(nodes):
    """First-order PSIM on Gauss-Radau points: ``B_0 = 1``, ``B_j' = L_j``."""
    if not nodes.is_radau:
        raise PsimError(f"psim_radau needs an LGR or CGR node set, got {nodes.family}")
    functionals = [[(-1, 0, 1.0)]]
    parts = _build_generic(nodes, radau(), 1, functionals, ("left",))
    return _finish(nodes, radau(), *parts)


_ODD_FUNCTIONALS = {
    3: ([[(-1, 0, 1.0)], [(1, 0, 1.0)], [(1, 1, 1.0)]], ("u(-1)", "u(1)", "u'(1)")),
    5: (
        [[(-1, 0, 1.0)], [(1, 0, 1.0)], [(-1, 1, 1.0)], [(1, 1, 1.0)], [(1, 2, 1.0)]],
        ("u(-1)", "u(1)", "u'(-1)", "u'(1)", "u''(1)"),
    ),
}


def psim_odd_order(nodes, p):
    """Basis interpolating ``u^(p)`` at interior Lobatto points (p = 3 or 5)."""
    _require_lobatto(nodes, "psim_odd_order")
    if p not in _ODD_FUNCTIONALS:
        raise PsimError("odd-order bases exist for p = 3 and p = 5")
    if nodes.N < p:
        raise PsimError(f"psim_odd_order(p={p}) needs N >= {p}")
    functionals, labels = _ODD_FUNCTIONALS[p]
    variant = odd_order(p)
    parts = _build_generic(nodes, variant, p, functionals, labels)
    return _finish(nodes, variant, *parts)


def build_psim(nodes, variant):
    """Dispatch on a :class:`BcVariant`."""
    if variant.kind == "dirichlet":
        return psim_dirichlet(nodes)
    if variant.kind == "mixed":
        return psim_mixed(nodes, variant.a_minus, variant.b_minus, variant.a_plus, variant.b_plus)
    if variant.kind == "neumann":
        return psim_neumann(nodes)
    if variant.kind == "radau":
        return psim_radau(nodes)
    return psim_odd_order(nodes, variant.order)


def bk_matrices(psim, k, method="auto"):
    """``B^(k)`` at the nodes.

    ``method="auto"`` evaluates the stored coefficient stack when ``k`` does not
    exceed the basis order, and falls back to ``D^(k) B`` otherwise;
    ``method="psdm"`` always uses ``D^(k) B``, which is exact only when the
    basis lies in ``P_N`` (Dirichlet, mixed and Radau variants).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return psim.B
    if method == "auto" and k <= psim.order:
        return psim.derivative(k)
    if psim.degree > psim.nodes.N:
        raise PsimError("D^(k) B is not exact for bases of degree > N")
    return psdm(psim.nodes, k).full @ psim.B
