"""Gauss-Lobatto and Gauss-Radau nodes and weights (Legendre and Chebyshev).

Chebyshev weights follow the ``1/sqrt(1 - x^2)`` weighted convention, so they
sum to pi; Legendre weights sum to 2.
"""

from dataclasses import dataclass

import numpy as np

from .orthopoly import CHEBYSHEV, LEGENDRE, basis_and_derivatives, eval_basis

FAMILIES = ("lgl", "cgl", "lgr", "cgr")

_NEWTON_MAXIT = 100


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class NodeSet:
    family: str
    N: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        for name in ("nodes", "weights"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def basis(self):
        return LEGENDRE if self.family in ("lgl", "lgr") else CHEBYSHEV

    @property
    def is_lobatto(self):
        return self.family in ("lgl", "cgl")

    @property
    def is_radau(self):
        return not self.is_lobatto

    @property
    def interior(self):
        """Indices of the nodes that carry derivative data in a Birkhoff basis."""
        return np.arange(1, self.N) if self.is_lobatto else np.arange(1, self.N + 1)

    def __len__(self):
        return self.N + 1


def lgl(N):
    """Legendre-Gauss-Lobatto nodes: -1, +1 and the roots of ``P_N'``."""
    if N < 2:
        raise ValueError("LGL grids need N >= 2")
    # CGL interior points as the starting guess; symmetrized after convergence
    j = np.arange(1, N)
    x = np.sin(np.pi * (2 * j - N) / (2 * N))
    polish = 1
    for _ in range(_NEWTON_MAXIT):
        _, d1, d2 = basis_and_derivatives(LEGENDRE, N, x)
        dx = d1 / d2
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            if polish == 0:
                break
            polish -= 1
    else:
        raise ConvergenceError("LGL Newton iteration did not converge")
    _, resid, slope = basis_and_derivatives(LEGENDRE, N, x)
    # a root known to within rounding still leaves a residual of eps*|P_N''|
    bound = 1e-14 * N * N + 16 * np.finfo(float).eps * np.abs(slope)
    if np.any(np.abs(resid) > bound):
        raise ConvergenceError(f"LGL residual {np.max(np.abs(resid)):.3e} too large")
    x = 0.5 * (x - x[::-1])
    nodes = np.concatenate(([-1.0], x, [1.0]))
    pn = eval_basis(LEGENDRE, N, nodes)
    weights = 2.0 / (N * (N + 1)) / pn**2
    return NodeSet("lgl", N, nodes, weights)


def cgl(N):
    """Chebyshev-Gauss-Lobatto nodes ``-cos(j pi / N)``."""
    if N < 2:
        raise ValueError("CGL grids need N >= 2")
    j = np.arange(N + 1)
    # sine form is exactly antisymmetric under j -> N - j
    nodes = np.sin(np.pi * (2 * j - N) / (2 * N))
    nodes[0], nodes[-1] = -1.0, 1.0
    h = np.pi / N
    weights = np.full(N + 1, h)
    weights[[0, -1]] = h / 2
    return NodeSet("cgl", N, nodes, weights)


def lgr(N):
    """Legendre-Gauss-Radau nodes: the roots of ``P_N + P_{N+1}`` (incl. -1)."""
    if N < 1:
        raise ValueError("LGR grids need N >= 1")
    j = np.arange(1, N + 1)
    x = -np.cos(2 * np.pi * j / (2 * N + 1))
    polish = 1
    for _ in range(_NEWTON_MAXIT):
        a, da, _ = basis_and_derivatives(LEGENDRE, N, x)
        b, db, _ = basis_and_derivatives(LEGENDRE, N + 1, x)
        dx = (a + b) / (da + db)
        # keep iterates inside (-1, 1); halve steps that would leave it
        xn = x - dx
        bad = np.abs(xn) >= 1.0
        while np.any(bad):
            dx[bad] *= 0.5
            xn = x - dx
            bad = np.abs(xn) >= 1.0
        x = xn
        if np.max(np.abs(dx)) < 1e-15:
            if polish == 0:
                break
            polish -= 1
    else:
        raise ConvergenceError("LGR Newton iteration did not converge")
    if np.any(np.diff(x) <= 0) or x[0] <= -1.0:
        raise ConvergenceError("LGR roots are not distinct and ordered")
    nodes = np.concatenate(([-1.0], x))
    pn = eval_basis(LEGENDRE, N, nodes)
    weights = (1.0 - nodes) / ((N + 1) ** 2 * pn**2)
    return NodeSet("lgr", N, nodes, weights)


def cgr(N):
    """Chebyshev-Gauss-Radau nodes ``-cos(2 pi j / (2N + 1))``."""
    if N < 1:
        raise ValueError("CGR grids need N >= 1")
    h = 2 * np.pi / (2 * N + 1)
    nodes = -np.cos(h * np.arange(N + 1))
    nodes[0] = -1.0
    weights = np.full(N + 1, h)
    weights[0] = h / 2
    return NodeSet("cgr", N, nodes, weights)


_BUILDERS = {"lgl": lgl, "cgl": cgl, "lgr": lgr, "cgr": cgr}


def make_nodes(family, N):
    try:
        build = _BUILDERS[family.lower()]
    except KeyError:
        raise ValueError(f"unknown node family {family!r}; choose from {FAMILIES}") from None
    return build(N)


def lobatto_for(basis, N):
    """LGL or CGL grid for a basis name ('legendre'/'chebyshev' or 'lgl'/'cgl')."""
    b = str(getattr(basis, "value", basis)).lower()
    return lgl(N) if b in ("legendre", "lgl") else cgl(N)


def radau_for(basis, N):
    b = str(getattr(basis, "value", basis)).lower()
    return lgr(N) if b in ("legendre", "lgr") else cgr(N)
