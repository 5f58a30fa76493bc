import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psimcol import birkhoff as bk
from psimcol import lacore
from psimcol.diffmat import dtilde_first, dtilde_second, psdm
from psimcol.gridgen import cgl, cgr, lgl, lgr

from monomial_oracle import VARIANTS, oracle

EPS = np.finfo(float).eps


CASES = [
    ("dirichlet", lgl, 2), ("dirichlet", cgl, 2), ("dirichlet", lgl, 7),
    ("mixed", lgl, 2), ("mixed", cgl, 2), ("mixed", cgl, 6),
    ("neumann", lgl, 3), ("neumann", cgl, 3), ("neumann", cgl, 7),
    ("radau", lgr, 1), ("radau", cgr, 1), ("radau", lgr, 6),
    ("odd3", lgl, 3), ("odd3", cgl, 3), ("odd3", cgl, 8),
    ("odd5", lgl, 5), ("odd5", cgl, 5), ("odd5", cgl, 9),
]

@pytest.mark.parametrize("name,make,N", CASES)
def test_matches_monomial_oracle(name, make, N):
    psim = bk.build_psim(make(N), VARIANTS[name])
    B, B1 = oracle(psim)
    assert np.allclose(psim.B, B, atol=1e-10)
    assert np.allclose(psim.B1, B1, atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(am=st.floats(0.2, 3), bm=st.floats(-3, 3), ap=st.floats(0.2, 3), bp=st.floats(-3, 3),
       N=st.integers(2, 8), fam=st.sampled_from([lgl, cgl]))
def test_mixed_matches_oracle_for_random_coefficients(am, bm, ap, bp, N, fam):
    d = 2 * ap * am - ap * bm + am * bp
    if abs(d) < 0.1:
        return
    psim = bk.psim_mixed(fam(N), am, bm, ap, bp)
    B, B1 = oracle(psim)
    scale = 1 + abs(bm) + abs(bp)
    assert np.allclose(psim.B, B, atol=1e-10 * scale**2)


def test_dirichlet_first_column_is_linear():
    ns = lgl(4)
    B = bk.psim_dirichlet(ns).B
    assert np.allclose(B[:, 0], (1 - ns.nodes) / 2, atol=1e-15)
    assert np.allclose(B[:, -1], (1 + ns.nodes) / 2, atol=1e-15)


def test_dirichlet_is_mixed_special_case_bitwise():
    ns = cgl(12)
    assert np.array_equal(bk.psim_dirichlet(ns).B, bk.psim_mixed(ns, 1, 0, 1, 0).B)


@pytest.mark.parametrize("make,N", [(lgl, 8), (cgl, 32), (lgl, 128), (cgl, 128)])
def test_dtilde2_times_b_is_identity(make, N):
    ns = make(N)
    P = dtilde_second(psdm(ns, 2)) @ bk.psim_dirichlet(ns).B
    # the boundary rows of D^(2) carry eps * N^4 rounding
    assert np.abs(P - np.eye(N + 1)).max() <= EPS * N**4 + 1e-13


@pytest.mark.parametrize("make,N", [(lgr, 8), (cgr, 32), (lgr, 128)])
def test_dtilde1_times_b_is_identity(make, N):
    ns = make(N)
    P = dtilde_first(psdm(ns, 1)) @ bk.psim_radau(ns).B
    assert np.abs(P - np.eye(N + 1)).max() < 1e-9


@pytest.mark.parametrize("name,make,N", [c for c in CASES if c[2] > 5] + [("odd5", cgl, 64)])
def test_highest_derivative_is_cardinal(name, make, N):
    psim = bk.build_psim(make(N), VARIANTS[name])
    Bp = psim.derivative(psim.order)
    n = psim.interior_rows.size
    assert np.allclose(psim.block(Bp), np.eye(n), atol=1e-9)
    assert np.allclose(Bp[np.ix_(psim.interior_rows, psim.boundary_cols)], 0.0, atol=1e-9)


def test_b1_matches_psdm_route():
    ns = lgl(48)
    psim = bk.psim_dirichlet(ns)
    assert np.allclose(bk.bk_matrices(psim, 1), bk.bk_matrices(psim, 1, method="psdm"), atol=1e-10)


def test_bk_matrices_psdm_route_rejects_high_degree():
    psim = bk.psim_odd_order(cgl(8), 3)
    with pytest.raises(bk.PsimError):
        bk.bk_matrices(psim, 4)


def test_evaluate_matches_node_samples():
    psim = bk.psim_neumann(cgl(9))
    assert np.allclose(psim.evaluate(psim.nodes.nodes), psim.B, atol=1e-14)


def test_neumann_basis_constant_column():
    psim = bk.psim_neumann(lgl(7))
    assert np.allclose(psim.B[:, -1], 1.0)


@pytest.mark.parametrize("N", [2, 4, 10])
def test_neumann_rejects_even_n(N):
    with pytest.raises(bk.PsimError, match="odd N"):
        bk.psim_neumann(lgl(N))


def test_pure_neumann_mixed_rejected():
    with pytest.raises(bk.PsimError, match="not unisolvent"):
        bk.mixed(0.0, 1.0, 0.0, 1.0)


def test_odd_order_validation():
    with pytest.raises(bk.PsimError):
        bk.odd_order(7)
    with pytest.raises(bk.PsimError):
        bk.psim_odd_order(cgl(4), 5)


def test_radau_needs_radau_nodes():
    with pytest.raises(bk.PsimError):
        bk.psim_radau(lgl(6))


@settings(max_examples=10, deadline=None)
@given(k=st.floats(0.1, 20), N=st.sampled_from([16, 32, 64]))
def test_shifted_eigenvalues_real_and_bounded(k, N):
    B = bk.psim_dirichlet(lgl(N)).B_in
    ev = lacore.eig_real(np.eye(N - 1) - k * B)
    v = ev.values
    top = 1 + 4 * k / np.pi**2
    assert np.all(np.diff(v) > 0)
    assert v.min() > 1 + 4 * k * np.pi**2 / (2 * N**4) / 2
    # the true margin below the upper bound is ~1e-15 here; allow a few ulps
    assert v.max() < top * (1 + 64 * EPS)


def test_fundamental_eigenvalue_below_quarter_pi_squared_at_small_n():
    # the lower bound -lambda_1 > pi^2/4 only sets in around N = 10 on LGL;
    # at N = 4 a 40-digit computation gives pi^2/4 - 1.80224e-3
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    s = mp.sqrt(mp.mpf(3) / 7)
    x = [-1, -s, 0, s, 1]
    V = mp.matrix([[xi**j for j in range(5)] for xi in x])
    V2 = mp.matrix([[j * (j - 1) * xi ** (j - 2) if j >= 2 else 0 for j in range(5)] for xi in x])
    D2 = V2 * mp.inverse(V)
    Din = mp.matrix([[D2[i, j] for j in range(1, 4)] for i in range(1, 4)])
    lam1 = -max(mp.re(e) for e in mp.eig(Din)[0])
    assert float(lam1 - mp.pi**2 / 4) == pytest.approx(-1.8022424390715e-3, rel=1e-9)
    B = bk.psim_dirichlet(lgl(4)).B_in
    assert -1 / lacore.eig_real(B).values.min() == pytest.approx(float(lam1), rel=1e-13)
