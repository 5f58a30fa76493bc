import numpy as np
import numpy.polynomial.chebyshev as C
import numpy.polynomial.legendre as L
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from psimcol import orthopoly as op
from psimcol.gridgen import cgl, cgr, lgl, lgr

NP = {op.LEGENDRE: L, op.CHEBYSHEV: C}
FAMS = [op.LEGENDRE, op.CHEBYSHEV]
coeff_arrays = arrays(np.float64, st.integers(1, 30), elements=st.floats(-10, 10))


@pytest.mark.parametrize("fam", FAMS)
def test_basis_matrix_matches_numpy(fam):
    x = np.linspace(-1, 1, 41)
    V = op.basis_matrix(fam, 20, x)
    ref = (L.legvander if fam is op.LEGENDRE else C.chebvander)(x, 20)
    assert np.allclose(V, ref, atol=1e-13)


@pytest.mark.parametrize("fam", FAMS)
def test_derivatives_match_numpy(fam):
    x = np.linspace(-1, 1, 17)
    val = NP[fam].legval if fam is op.LEGENDRE else NP[fam].chebval
    der = NP[fam].legder if fam is op.LEGENDRE else NP[fam].chebder
    for k in (0, 1, 2, 7, 16):
        e = np.zeros(k + 1)
        e[-1] = 1.0
        v, d1, d2 = op.basis_and_derivatives(fam, k, x)
        assert np.allclose(v, val(x, e), atol=1e-12)
        assert np.allclose(d1, val(x, der(e)), rtol=1e-12, atol=1e-10)
        assert np.allclose(d2, val(x, der(e, 2)), rtol=1e-12, atol=1e-8)


@pytest.mark.parametrize("fam", FAMS)
def test_endpoint_values(fam):
    k = np.arange(12)
    assert np.array_equal(op.endpoint_values(fam, 11, 1), np.ones(12))
    assert np.array_equal(op.endpoint_values(fam, 11, -1), (-1.0) ** k)


def test_endpoint_derivative_closed_forms():
    assert op.eval_basis_deriv_endpoint(op.LEGENDRE, 5, 1) == pytest.approx(15.0)
    assert op.eval_basis_deriv_endpoint(op.CHEBYSHEV, 5, -1) == pytest.approx(25.0)
    assert op.eval_basis_deriv_endpoint(op.CHEBYSHEV, 4, -1) == pytest.approx(-16.0)


@settings(max_examples=50, deadline=None)
@given(c=coeff_arrays, fam=st.sampled_from(FAMS))
def test_clenshaw_matches_numpy(c, fam):
    x = np.linspace(-1, 1, 23)
    ref = (L.legval if fam is op.LEGENDRE else C.chebval)(x, c)
    scale = 1 + np.abs(c).sum()
    assert np.allclose(op.clenshaw(fam, c, x), ref, atol=1e-13 * scale)


@settings(max_examples=50, deadline=None)
@given(c=coeff_arrays, fam=st.sampled_from(FAMS), m=st.integers(1, 3))
def test_antiderivative_matches_numpy(c, fam, m):
    # numpy's legint/chebint with lbnd=-1 anchors every level at -1, as we do
    integ = L.legint if fam is op.LEGENDRE else C.chebint
    ref = integ(c, m, lbnd=-1)
    got = op.antiderivative_array(fam, c, m)
    n = max(ref.size, got.size)
    assert np.allclose(np.pad(got, (0, n - got.size)), np.pad(ref, (0, n - ref.size)),
                       atol=1e-12 * (1 + np.abs(c).sum()))


@settings(max_examples=30, deadline=None)
@given(c=coeff_arrays, fam=st.sampled_from(FAMS))
def test_derivative_undoes_antiderivative(c, fam):
    back = op.derivative_array(fam, op.antiderivative_array(fam, c, 1))
    assert np.allclose(back[: c.size], c, atol=1e-11 * (1 + np.abs(c).sum()))


def test_antiderivative_rejects_nonpositive_order():
    with pytest.raises(ValueError):
        op.antiderivative(op.SpectralCoeffs(op.LEGENDRE, np.ones(3)), 0)


def test_spectral_coeffs_call_and_endpoint():
    c = op.SpectralCoeffs(op.CHEBYSHEV, np.array([1.0, 2.0, 3.0]))
    assert c.degree == 2
    assert c(0.5) == pytest.approx(C.chebval(0.5, c.coeffs))
    assert op.endpoint_value(c.coeffs, -1) == pytest.approx(2.0)


@pytest.mark.parametrize("make,N", [(lgl, 12), (cgl, 12), (lgr, 11), (cgr, 11), (lgl, 2), (lgr, 1)])
def test_interior_lagrange_is_cardinal(make, N):
    ns = make(N)
    A = op.interior_lagrange_matrix(ns)
    V = op.basis_matrix(ns.basis, A.shape[0] - 1, ns.nodes)
    # cardinal on the interior nodes; the boundary values are unconstrained
    vals = (V @ A)[ns.interior]
    assert np.allclose(vals, np.eye(ns.interior.size), atol=1e-12)


@pytest.mark.parametrize("make", [lgr, cgr])
def test_radau_interior_lagrange_has_no_top_mode(make):
    ns = make(9)
    A = op.interior_lagrange_matrix(ns, kmax=9)
    assert np.allclose(A[9], 0.0, atol=1e-13)


def test_project_interior_lagrange_rejects_boundary():
    ns = lgl(6)
    with pytest.raises(ValueError):
        op.project_interior_lagrange(ns, 0)
    c = op.project_interior_lagrange(ns, 3)
    assert c(ns.nodes[3]) == pytest.approx(1.0)
