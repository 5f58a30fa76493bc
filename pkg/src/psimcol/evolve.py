"""Crank-Nicolson leap-frog for third- and fifth-order KdV solitons.

Space is discretized with the odd-order Birkhoff basis on CGL points mapped to
``(-L, L)``; the unknowns are ``w = d^p u / dx^p`` at the interior nodes in the
reference variable ``x = xi / L``, and ``u = B w`` carries the boundary
conditions exactly.
"""

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import birkhoff, lacore
from .gridgen import lobatto_for


class BlowupError(RuntimeError):
    pass


@dataclass(frozen=True)
class KdvConfig:
    """Equation ``u_t + gamma u u_xi + nu u_xixixi - mu u_xi^(5) = 0`` on ``(-L, L)``.

    ``order=3`` is the classical KdV (``gamma = nu = 1``, ``mu = 0``) with the
    soliton ``12 kappa^2 sech^2(kappa (xi - 4 kappa^2 t - x0))``. ``order=5``
    uses the sech^4 soliton with parameters ``gamma, nu, mu, eta0``.
    """

    order: int = 3
    N: int = 160
    L: float = 50.0
    tau: float = 1e-3
    x0: float = -20.0
    kappa: float = 0.3
    gamma: float = 1.0
    nu: float = 1.0
    mu: float = 0.0
    eta0: float = 0.0
    family: str = "chebyshev"
    nonlinear: bool = True

    def __post_init__(self):
        if self.order not in (3, 5):
            raise ValueError("order must be 3 or 5")
        if self.order == 5 and (self.gamma == 0 or self.mu * self.nu <= 0):
            raise ValueError("the fifth-order soliton needs gamma != 0 and mu * nu > 0")
        if self.tau <= 0 or self.L <= 0:
            raise ValueError("tau and L must be positive")

    def with_(self, **kw):
        return replace(self, **kw)


def kdv3_config(**kw):
    return KdvConfig(**kw)


def kdv5_config(**kw):
    base = dict(order=5, N=256, x0=-10.0, gamma=1.0, nu=1.1, mu=1.0, eta0=0.0)
    base.update(kw)
    return KdvConfig(**base)


def _sech_power_derivs(power, m):
    """Polynomials ``q_k(T)`` with ``d^k/dz^k sech^power(z) = q_k(tanh z)``, ``k <= m``."""
    # sech^2 = 1 - T^2 and dT/dz = 1 - T^2
    q = np.polynomial.Polynomial([1.0, 0.0, -1.0]) ** (power // 2)
    dT = np.polynomial.Polynomial([1.0, 0.0, -1.0])
    out = [q]
    for _ in range(m):
        q = q.deriv() * dT
        out.append(q)
    return out


@lru_cache(maxsize=None)
def _soliton_polys(power, m):
    return _sech_power_derivs(power, m)


def _soliton_params(cfg):
    if cfg.order == 3:
        k = cfg.kappa
        return 2, 12 * k * k, k, 4 * k * k, 0.0
    amp = 105 * cfg.nu**2 / (169 * cfg.mu * cfg.gamma)
    k = np.sqrt(cfg.nu / (52 * cfg.mu))
    c = cfg.gamma * cfg.eta0 + 36 * cfg.nu**2 / (169 * cfg.mu)
    return 4, amp, k, c, cfg.eta0


def exact_soliton(cfg, xi, t, m=0):
    """``m``-th ``xi``-derivative of the exact soliton at physical points ``xi``."""
    power, amp, k, c, shift = _soliton_params(cfg)
    T = np.tanh(k * (np.asarray(xi, dtype=float) - c * t - cfg.x0))
    val = amp * k**m * _soliton_polys(power, m)[m](T)
    return val + shift if m == 0 else val


@dataclass
class KdvOperators:
    cfg: KdvConfig
    xi: np.ndarray  # physical nodes, full grid
    rows: np.ndarray
    Bi: np.ndarray  # u at interior nodes from w
    B1i: np.ndarray  # d/dxi u at interior nodes from w
    ub: np.ndarray  # boundary-data contribution to u (interior nodes)
    ub1: np.ndarray
    lhs_lu: tuple
    rhs_op: np.ndarray  # applied to w^{k-1}
    rhs_const: np.ndarray
    nonlin: float  # coefficient of u u_xi
    Bfull: np.ndarray
    ubfull: np.ndarray


def build_operators(cfg, tau=None):
    """Prebuilt matrices for one run; ``tau`` overrides ``cfg.tau`` (negative runs backward)."""
    nodes = lobatto_for(cfg.family, cfg.N)
    psim = birkhoff.psim_odd_order(nodes, cfg.order)
    L, p = cfg.L, cfg.order
    tau = cfg.tau if tau is None else tau
    rows, ic, bc = psim.interior_rows, psim.interior_cols, psim.boundary_cols
    # boundary columns start with u(-1), u(1); all derivative data vanish
    g = np.zeros(bc.size)
    g[:2] = _soliton_params(cfg)[4]
    B = psim.B
    B1 = psim.derivative(1) / L
    Bi, B1i = B[np.ix_(rows, ic)], B1[np.ix_(rows, ic)]
    ub, ub1 = B[np.ix_(rows, bc)] @ g, B1[np.ix_(rows, bc)] @ g
    n = rows.size
    eye = np.eye(n)
    if p == 3:
        lin = eye / L**3  # u_xixixi = w / L^3
        lin_b = np.zeros(n)
    else:
        B3 = psim.derivative(3)
        lin = cfg.nu * B3[np.ix_(rows, ic)] / L**3 - cfg.mu * eye / L**5
        lin_b = cfg.nu * (B3[np.ix_(rows, bc)] @ g) / L**3
    lhs = Bi / (2 * tau) + lin / 2
    rhs_op = Bi / (2 * tau) - lin / 2
    # (ub^{k+1} - ub^{k-1}) / (2 tau) cancels; the averaged linear term keeps lin_b
    rhs_const = -lin_b
    nonlin = (1.0 if p == 3 else cfg.gamma) if cfg.nonlinear else 0.0
    return KdvOperators(cfg, L * nodes.nodes, rows, Bi, B1i, ub, ub1, lacore.lu(lhs),
                        rhs_op, rhs_const, nonlin, B[:, ic], B[:, bc] @ g)


@dataclass
class KdvState:
    step: int
    w_prev: np.ndarray
    w: np.ndarray

    def t(self, tau):
        return self.step * tau


def initial_state(ops):
    """``w^0``, ``w^1`` from the exact soliton at ``t = 0`` and ``t = tau``."""
    cfg = ops.cfg
    xi = ops.xi[ops.rows]
    scale = cfg.L**cfg.order
    w0 = scale * exact_soliton(cfg, xi, 0.0, cfg.order)
    w1 = scale * exact_soliton(cfg, xi, cfg.tau, cfg.order)
    return KdvState(1, w0, w1)


def interior_u(ops, w):
    return ops.Bi @ w + ops.ub


def full_u(ops, w):
    return ops.Bfull @ w + ops.ubfull


def kdv_step(ops, state):
    u = ops.Bi @ state.w + ops.ub
    ux = ops.B1i @ state.w + ops.ub1
    rhs = ops.rhs_op @ state.w_prev + ops.rhs_const - ops.nonlin * u * ux
    w_next = lacore.lu_solve(ops.lhs_lu, rhs)
    if not np.all(np.isfinite(w_next)):
        raise BlowupError(f"non-finite solution at step {state.step + 1}")
    return KdvState(state.step + 1, state.w, w_next)


def max_error(ops, state):
    """Max error against the exact soliton at the interior collocation points."""
    xi = ops.xi[ops.rows]
    t = state.step * ops.cfg.tau
    return float(np.max(np.abs(interior_u(ops, state.w) - exact_soliton(ops.cfg, xi, t))))


@dataclass
class KdvRun:
    cfg: KdvConfig
    times: np.ndarray
    errors: np.ndarray
    xi: np.ndarray
    snapshots: np.ndarray  # one row of full-grid values per recorded time

    @property
    def final_error(self):
        return float(self.errors[-1])

    @property
    def u(self):
        return self.snapshots[-1]


def kdv_run(cfg, t_end, record_at=()):
    """Integrate to ``t_end``, recording error and snapshot at ``record_at`` and at the end."""
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    n_steps = int(round(t_end / cfg.tau))
    if abs(n_steps * cfg.tau - t_end) > 1e-9 * max(1.0, t_end):
        raise ValueError("t_end must be a multiple of tau")
    ops = build_operators(cfg)
    marks = {int(round(t / cfg.tau)) for t in record_at if 0 <= t <= t_end}
    marks.add(n_steps)
    times, errs, snaps = [], [], []

    def record(st, w):
        times.append(st.step * cfg.tau)
        errs.append(max_error(ops, st))
        snaps.append(full_u(ops, w))

    state = initial_state(ops)
    if 0 in marks:
        record(KdvState(0, state.w_prev, state.w_prev), state.w_prev)
    if n_steps >= 1 and 1 in marks:
        record(state, state.w)
    while state.step < n_steps:
        state = kdv_step(ops, state)
        if state.step in marks:
            record(state, state.w)
    return KdvRun(cfg, np.array(times), np.array(errs), ops.xi, np.array(snaps))
