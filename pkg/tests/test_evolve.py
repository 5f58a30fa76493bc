import numpy as np
import numpy.polynomial.chebyshev as C
import pytest

from psimcol import birkhoff as bk
from psimcol import evolve as E
from psimcol.gridgen import cgl


def test_soliton_peaks():
    c3 = E.kdv3_config()
    assert E.exact_soliton(c3, c3.x0 + 4 * 0.09 * 2.0, 2.0) == pytest.approx(1.08)
    c5 = E.kdv5_config()
    assert E.exact_soliton(c5, c5.x0, 0.0) == pytest.approx(105 * 1.1**2 / 169)


@pytest.mark.parametrize("cfg", [E.kdv3_config(), E.kdv5_config()])
def test_soliton_derivatives_against_mpmath(cfg):
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    power, amp, k, c, _ = E._soliton_params(cfg)
    f = lambda x: amp * mp.sech(k * (x - c * 0.7 - cfg.x0)) ** power
    for xi in (-21.3, -19.0, -8.5):
        for m in range(6):
            ref = float(mp.diff(f, mp.mpf(xi), m))
            assert E.exact_soliton(cfg, xi, 0.7, m) == pytest.approx(ref, rel=1e-10, abs=1e-14)


def test_config_validation():
    with pytest.raises(ValueError):
        E.kdv3_config(tau=0.0)
    with pytest.raises(ValueError):
        E.kdv5_config(mu=-1.0)
    with pytest.raises(ValueError):
        E.KdvConfig(order=4)


def test_zero_state_stays_zero():
    ops = E.build_operators(E.kdv3_config(N=32))
    n = ops.rows.size
    st = E.KdvState(1, np.zeros(n), np.zeros(n))
    for _ in range(3):
        st = E.kdv_step(ops, st)
    assert np.all(st.w == 0.0)


@pytest.mark.parametrize("order", [3, 5])
def test_boundary_conditions_hold(order):
    cfg = E.kdv3_config(N=48) if order == 3 else E.kdv5_config(N=48)
    ops = E.build_operators(cfg)
    st = E.initial_state(ops)
    for _ in range(5):
        st = E.kdv_step(ops, st)
    psim = bk.psim_odd_order(cgl(cfg.N), order)
    w = st.w
    vals = [psim.evaluate(np.array([s]), m)[:, psim.interior_cols] @ w
            for s, m in ((-1, 0), (1, 0), (1, 1))]
    if order == 5:
        vals += [psim.evaluate(np.array([s]), m)[:, psim.interior_cols] @ w for s, m in ((-1, 1), (1, 2))]
    assert np.abs(np.concatenate(vals)).max() < 1e-10


def test_linear_step_matches_dense_recursion():
    # oracle: the same CN leap-frog written for Chebyshev coefficients of P_{N+1}
    cfg = E.kdv3_config(N=16, nonlinear=False, tau=0.01, L=5.0)
    ops = E.build_operators(cfg)
    n = ops.rows.size
    rng = np.random.default_rng(1)
    st = E.KdvState(1, rng.standard_normal(n), rng.standard_normal(n))

    N, L, tau = cfg.N, cfg.L, cfg.tau
    psim = bk.psim_odd_order(cgl(N), 3)
    sample = np.linspace(-1, 1, N + 2)

    def coeffs(w):
        vals = psim.evaluate(sample)[:, psim.interior_cols] @ w
        return C.chebfit(sample, vals, N + 1)

    x = cgl(N).nodes[1:-1]
    V = C.chebvander(x, N + 1)
    V3 = np.column_stack([C.chebval(x, C.chebder(np.eye(N + 2)[k], 3)) for k in range(N + 2)])
    bc = np.array([C.chebvander(np.array([-1.0]), N + 1)[0], C.chebvander(np.array([1.0]), N + 1)[0],
                   [C.chebval(1.0, C.chebder(np.eye(N + 2)[k])) for k in range(N + 2)]])
    A = np.vstack([V / (2 * tau) + V3 / (2 * L**3), bc])
    a_prev, a = coeffs(st.w_prev), coeffs(st.w)
    for _ in range(2):
        rhs = np.concatenate([V @ a_prev / (2 * tau) - V3 @ a_prev / (2 * L**3), np.zeros(3)])
        a_prev, a = a, np.linalg.solve(A, rhs)
        st = E.kdv_step(ops, st)
    assert np.allclose(E.interior_u(ops, st.w), V @ a, atol=1e-9 * np.abs(V @ a).max())


@pytest.mark.parametrize("order", [3, 5])
def test_time_reversal_without_nonlinearity(order):
    base = E.kdv3_config(N=40) if order == 3 else E.kdv5_config(N=40)
    cfg = base.with_(nonlinear=False)
    fwd, bwd = E.build_operators(cfg), E.build_operators(cfg, tau=-cfg.tau)
    st0 = E.initial_state(fwd)
    st = st0
    for _ in range(20):
        st = E.kdv_step(fwd, st)
    back = E.KdvState(0, st.w, st.w_prev)
    for _ in range(20):
        back = E.kdv_step(bwd, back)
    u0 = E.interior_u(fwd, st0.w_prev)
    assert np.abs(E.interior_u(fwd, back.w) - u0).max() < 1e-8 * max(1.0, np.abs(u0).max())


def test_blowup_reports_step():
    ops = E.build_operators(E.kdv3_config(N=16))
    n = ops.rows.size
    st = E.KdvState(7, np.full(n, np.nan), np.zeros(n))
    with pytest.raises(E.BlowupError, match="step 8"):
        E.kdv_step(ops, st)


def test_run_t_end_zero_returns_initial_snapshot():
    run = E.kdv_run(E.kdv3_config(N=64), 0.0)
    assert run.times.tolist() == [0.0]
    assert run.snapshots.shape == (1, 65)


def test_run_rejects_misaligned_end_time():
    with pytest.raises(ValueError):
        E.kdv_run(E.kdv3_config(N=32), 0.0015)


def test_kdv5_error_decreases_with_n():
    c = E.kdv5_config()
    e64 = E.kdv_run(c.with_(N=64), 1.0).final_error
    e128 = E.kdv_run(c.with_(N=128), 1.0).final_error
    assert e128 < e64 / 100


def test_kdv5_second_order_in_time():
    # successive differences cancel the tau-independent spatial/truncation error
    c = E.kdv5_config()
    us = [E.kdv_run(c.with_(tau=t), 1.0).u for t in (2e-3, 1e-3, 5e-4)]
    ratio = np.abs(us[0] - us[1]).max() / np.abs(us[1] - us[2]).max()
    assert 3.0 <= ratio <= 5.0
