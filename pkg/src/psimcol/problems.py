"""Registry of the benchmark problems.

One-dimensional problems are written as

    lead * u^(p)(x) + sum_m coeffs[m](x) * u^(m)(x) = f(x)

on [-1, 1], with ``coeffs`` keyed by derivative order ``m < p``. Boundary data
is a tuple aligned with the boundary columns of the matching Birkhoff basis
(see :mod:`psimcol.birkhoff` for the ordering).
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from . import birkhoff


class Smooth:
    """Sum of ``amp * sin(freq * x + phase)`` terms plus a polynomial.

    Enough to write every manufactured solution used here with exact
    derivatives of any order.
    """

    def __init__(self, trig=(), poly=(0.0,)):
        self.trig = tuple(trig)
        self.poly = np.polynomial.Polynomial(poly)

    def __call__(self, x, m=0):
        x = np.asarray(x, dtype=float)
        out = self.poly.deriv(m)(x) if m else self.poly(x)
        out = out + np.zeros_like(x)
        for amp, freq, phase in self.trig:
            out = out + amp * freq**m * np.sin(freq * x + phase + m * np.pi / 2)
        return out


def const(c):
    return lambda x: np.full(np.shape(x), float(c))


@dataclass(frozen=True)
class ProblemSpec:
    id: str
    kind: str  # bvp2 | ivp1 | odd3 | odd5 | poisson2d
    order: int
    coeffs: dict
    forcing: Callable
    bc: Optional[birkhoff.BcVariant]
    bc_data: tuple
    exact: Optional[Callable] = None
    lead: float = 1.0
    description: str = ""
    coeff_names: dict = field(default_factory=dict)

    def coeff(self, m, x):
        fn = self.coeffs.get(m)
        if fn is None:
            return np.zeros(np.shape(x))
        return np.broadcast_to(np.asarray(fn(x), dtype=float), np.shape(x)).copy()


def _bvp2(pid, r, s, u, bc, description, forcing=None, exact=None):
    if forcing is None:
        forcing = lambda x: u(x, 2) + r(x) * u(x, 1) + s(x) * u(x)
    if bc.kind == "dirichlet":
        data = (float(u(-1.0)), float(u(1.0)))
    else:
        data = (
            float(bc.a_minus * u(-1.0) + bc.b_minus * u(-1.0, 1)),
            float(bc.a_plus * u(1.0) + bc.b_plus * u(1.0, 1)),
        )
    return ProblemSpec(
        pid, "bvp2", 2, {1: r, 0: s}, forcing, bc, data,
        exact=exact or (lambda x: u(x)), description=description,
        coeff_names={1: "r", 0: "s"},
    )


def _gauss_exact(x, m=0):
    x = np.asarray(x, dtype=float)
    g = np.exp((x * x - 1) / 2)
    return [g, x * g, (1 + x * x) * g][m]


def _c3_forcing(x):
    x = np.asarray(x, dtype=float)
    # left branch on -1 < x < 0; x = 0 belongs to the right branch
    return np.where(x < 0, x * x / 2 + x - 1, x - 1)


def _c3_exact(x, m=0):
    x = np.asarray(x, dtype=float)
    left = np.cosh(x + 1) - x * x / 2 - x
    right = np.cosh(x + 1) - np.cosh(x) - x + 1
    return np.where(x < 0, left, right)


# mixed conditions u(-1) - u'(-1) = c-, u(1) + u'(1) = c+
ROBIN = birkhoff.mixed(1.0, -1.0, 1.0, 1.0)

_MIXED_U = Smooth(trig=[(1.0, 3.0, 0.5)], poly=[0.0, 0.0, 0.25])
_IVP_U = Smooth(trig=[(1.0, 3.0, 0.5)], poly=[0.2, 0.1])
_THIRD_U = Smooth(trig=[(1.0, 2.0, 0.3)], poly=[0.0, 0.0, 0.0, 1.0 / 6])
# sin^3(pi x) = (3 sin(pi x) - sin(3 pi x)) / 4
_FIFTH_U = Smooth(trig=[(0.75, np.pi, 0.0), (-0.25, 3 * np.pi, 0.0)])
_NEUMANN_U = Smooth(trig=[(1.0, 10.0, np.pi / 2)], poly=[-np.cos(10.0)])


def _ivp(pid, gamma, u, description):
    return ProblemSpec(
        pid, "ivp1", 1, {0: gamma}, lambda x: u(x, 1) + gamma(x) * u(x),
        birkhoff.radau(), (float(u(-1.0)),), exact=lambda x: u(x),
        description=description, coeff_names={0: "gamma"},
    )


def _third(pid, r, s, t, description):
    u = _THIRD_U
    f = lambda x: -u(x, 3) + r * u(x, 2) + s * u(x, 1) + t * u(x)
    return ProblemSpec(
        pid, "odd3", 3, {2: const(r), 1: const(s), 0: const(t)}, f,
        birkhoff.odd_order(3), (float(u(-1.0)), float(u(1.0)), float(u(1.0, 1))),
        exact=lambda x: u(x), lead=-1.0, description=description,
        coeff_names={2: "r", 1: "s", 0: "t"},
    )


class OscillatoryExact:
    """``20 exp(-x^4/4) int_{-1}^x exp(t^4/4) sin(500 t^2) dt`` by adaptive quadrature."""

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        order = np.argsort(x)
        xs = x[order]
        g = lambda t: np.exp(t**4 / 4) * np.sin(500 * t * t)
        acc = 0.0
        prev = -1.0
        vals = np.empty_like(xs)
        for i, b in enumerate(xs):
            if b > prev:
                part, _ = integrate.quad(g, prev, b, limit=400, epsabs=1e-14, epsrel=1e-12)
                acc += part
                prev = b
            vals[i] = acc
        out = np.empty_like(x)
        out[order] = 20 * np.exp(-xs**4 / 4) * vals
        return out


def _build():
    reg = {}

    def add(p):
        if p.id in reg:
            raise ValueError(f"duplicate problem id {p.id}")
        reg[p.id] = p

    add(_bvp2(
        "gauss-bvp", lambda x: -np.asarray(x, dtype=float), const(-1.0), _gauss_exact,
        birkhoff.dirichlet(), "u'' - x u' - u = 0, u(+-1) = 1, u = exp((x^2 - 1)/2)",
        forcing=lambda x: np.zeros(np.shape(x)),
    ))
    add(_bvp2(
        "c3-bvp", const(0.0), const(-1.0), _c3_exact, birkhoff.dirichlet(),
        "u'' - u = piecewise C^1 forcing, solution in C^3",
        forcing=_c3_forcing,
    ))
    add(_bvp2("mixed-s", const(0.0), const(-1.0), _MIXED_U, ROBIN,
              "u'' - u = f, u(+-1) +- u'(+-1) = c+-"))
    add(_bvp2("mixed-rs", const(-1.0), const(-1.0), _MIXED_U, ROBIN,
              "u'' - u' - u = f, u(+-1) +- u'(+-1) = c+-"))
    u = _NEUMANN_U
    add(ProblemSpec(
        "neumann-cos10", "bvp2", 2, {}, lambda x: u(x, 2), birkhoff.neumann(),
        (float(u(-1.0, 1)), float(u(1.0, 1)), float(u(-1.0))),
        exact=lambda x: u(x),
        description="u'' = f with Neumann data, anchored by u(-1); u = cos(10x) - cos(10)",
    ))
    add(_ivp("ivp-const", const(1.0), _IVP_U, "u' + u = f, u(-1) given"))
    add(_ivp("ivp-cubic", lambda x: np.asarray(x, dtype=float) ** 3, _IVP_U,
             "u' + x^3 u = f, u(-1) given"))
    add(ProblemSpec(
        "ivp-oscillatory", "ivp1", 1, {0: lambda x: np.asarray(x, dtype=float) ** 3},
        lambda x: 20 * np.sin(500 * np.asarray(x, dtype=float) ** 2),
        birkhoff.radau(), (0.0,), exact=OscillatoryExact(),
        description="u' + x^3 u = 20 sin(500 x^2), u(-1) = 0 (highly oscillatory)",
        coeff_names={0: "gamma"},
    ))
    add(_third("third-t", 0.0, 0.0, 1.0, "-u''' + u = f"))
    add(_third("third-st", 0.0, 1.0, 1.0, "-u''' + u' + u = f"))
    add(_third("third-rt", 1.0, 0.0, 1.0, "-u''' + u'' + u = f"))
    add(_third("third-rst", 1.0, 1.0, 1.0, "-u''' + u'' + u' + u = f"))
    u5 = _FIFTH_U
    a1 = lambda x: np.sin(10 * np.asarray(x, dtype=float))
    a0 = lambda x: np.asarray(x, dtype=float)
    add(ProblemSpec(
        "fifth-sin3", "odd5", 5, {1: a1, 0: a0},
        lambda x: u5(x, 5) + a1(x) * u5(x, 1) + a0(x) * u5(x),
        birkhoff.odd_order(5), (0.0, 0.0, 0.0, 0.0, 0.0), exact=lambda x: u5(x),
        description="u^(5) + sin(10x) u' + x u = f, u(+-1) = u'(+-1) = u''(1) = 0, u = sin^3(pi x)",
    ))
    s4 = lambda x, y: np.sin(4 * np.pi * x) * np.sin(4 * np.pi * y)
    add(ProblemSpec(
        "poisson2d-sin4pi", "poisson2d", 2, {}, lambda x, y: -32 * np.pi**2 * s4(x, y),
        None, (), exact=s4,
        description="Laplacian(u) - gamma u = f on the square, u = 0 on the boundary, "
                    "u = sin(4 pi x) sin(4 pi y); forcing given as Laplacian(u)",
    ))
    add(ProblemSpec(
        "poisson2d-zero", "poisson2d", 2, {}, lambda x, y: np.zeros(np.broadcast(x, y).shape),
        None, (), exact=lambda x, y: np.zeros(np.broadcast(x, y).shape),
        description="homogeneous 2D problem, solution identically zero",
    ))
    return reg


REGISTRY = _build()


def get_problem(pid):
    try:
        return REGISTRY[pid]
    except KeyError:
        raise KeyError(f"unknown problem {pid!r}; available: {', '.join(sorted(REGISTRY))}") from None
