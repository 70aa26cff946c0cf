from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holonomy_lab import lie_algebra as la


def test_gell_mann_trace_orthonormality():
    g = la.gell_mann().generators
    gram = np.einsum("iab,jba->ij", g, g)
    assert np.max(np.abs(gram - 2 * np.eye(8))) < 1e-12


def test_gell_mann_hermitian_traceless():
    gs = la.gell_mann()
    assert gs.hermiticity_residual() < 1e-15
    assert np.max(np.abs(np.trace(gs.generators, axis1=1, axis2=2))) < 1e-15


def test_structure_constants_match_trace_formula():
    f = la.structure_constants().f
    assert np.max(np.abs(f - la.structure_constants_from_trace())) < 1e-12


def test_structure_constants_known_values():
    f = la.structure_constants()
    assert f(1, 2, 3) == pytest.approx(1.0)
    assert f(4, 5, 8) == pytest.approx(np.sqrt(3) / 2)
    assert f(6, 7, 8) == pytest.approx(np.sqrt(3) / 2)
    assert f(1, 4, 7) == pytest.approx(0.5)
    assert f(1, 5, 6) == pytest.approx(-0.5)


def test_structure_constants_totally_antisymmetric():
    f = la.structure_constants().f
    for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0)):
        assert np.max(np.abs(f + f.transpose(perm))) < 1e-15


def test_jacobi_identity():
    assert la.jacobi_residual(la.structure_constants().f) < 1e-12


def test_commutators_defining_rep():
    f = la.structure_constants().f
    assert la.commutation_residual(la.gell_mann(), f, 2j) < 1e-10


def test_adjoint_generators_close_with_opposite_sign():
    f = la.structure_constants().f
    adj = la.adjoint_generators()
    assert adj.hermiticity_residual() < 1e-15
    assert la.commutation_residual(adj, f, -1j) < 1e-10


@pytest.mark.parametrize("j", ["1/2", "1", "3/2", "2", "5/2"])
def test_spin_operators_algebra_and_casimir(j):
    s = la.spin_operators(j)
    jx, jy, jz = s.generators
    jf = float(Fraction(j))
    assert s.dim == int(2 * jf) + 1
    assert np.max(np.abs(jx @ jy - jy @ jx - 1j * jz)) < 1e-12
    cas = jx @ jx + jy @ jy + jz @ jz
    assert np.max(np.abs(cas - jf * (jf + 1) * np.eye(s.dim))) < 1e-12
    assert np.allclose(np.diag(jz).real, [jf - k for k in range(s.dim)])


@pytest.mark.parametrize("bad", ["1/3", "-1", "abc", 0.3])
def test_spin_operators_reject_invalid(bad):
    with pytest.raises(ValueError):
        la.spin_operators(bad)


def test_cartan_transform_reproduces_tabulated_matrices():
    assert la.tabulated_discrepancies(tol=1e-12) == []


def test_cartan_transform_diagonalizes_cartan_pair():
    primed = la.adjoint_cartan_basis().generators
    for k in (2, 7):
        d = primed[k]
        assert np.max(np.abs(d - np.diag(np.diag(d)))) < 1e-12


def test_cartan_transform_methods_agree_on_weights():
    a = la.cartan_transform(method="tabulated")
    b = la.cartan_transform(method="numeric")
    assert np.max(np.abs(a.V.conj().T @ a.V - np.eye(8))) < 1e-12
    assert np.max(np.abs(b.V.conj().T @ b.V - np.eye(8))) < 1e-12
    assert np.allclose(a.lambda3_diag, b.lambda3_diag, atol=1e-10)
    assert np.allclose(a.lambda8_diag, b.lambda8_diag, atol=1e-10)


def test_cartan_transform_rejects_unknown_method():
    with pytest.raises(ValueError):
        la.cartan_transform(method="guess")


def test_simultaneous_diagonalize_rejects_noncommuting():
    g = la.gell_mann().generators
    with pytest.raises(ValueError):
        la.simultaneous_diagonalize(g[0], g[1])


def test_verify_algebra_all_pass():
    rows = la.verify_algebra()
    assert rows and all(r["pass"] for r in rows)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=8, max_size=8))
def test_generator_expansion_roundtrip(coeffs):
    g = la.gell_mann().generators
    h = np.einsum("i,iab->ab", coeffs, g)
    back = np.real(np.einsum("iab,ba->i", g, h)) / 2
    assert np.allclose(back, coeffs, atol=1e-12)
