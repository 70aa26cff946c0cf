from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holonomy_lab import parametrization as pz
from holonomy_lab.lie_algebra import gell_mann, spin_operators

SYSTEMS = [pz.su2_linear("1/2"), pz.su2_linear("5/2"), pz.su2_quadratic("3/2"), pz.su3_degenerate(),
           pz.su3_nondegenerate(), pz.su3_adjoint()]


@pytest.mark.parametrize("system", SYSTEMS, ids=lambda s: f"{s.kind}-{s.j}")
def test_frames_are_unitary(system, rng):
    x = pz.random_points(system.manifold, 50, rng)
    u = system.frame_builder()(x)
    eye = np.eye(system.dim)
    assert np.max(np.abs(u @ np.conj(np.swapaxes(u, -1, -2)) - eye)) < 1e-12


@pytest.mark.parametrize("system", SYSTEMS, ids=lambda s: f"{s.kind}-{s.j}")
def test_hamiltonian_isospectral(system, rng):
    x = pz.random_points(system.manifold, 20, rng)
    h = pz.hamiltonian_at(system, x, radius=1.7)
    ev = np.linalg.eigvalsh(h)
    ref = np.sort(np.real(np.diag(system.h0(1.7))))
    assert np.max(np.abs(ev - ref)) < 1e-12


def test_embedding_closed_matches_trace(rng):
    x = pz.random_points("CP2", 200, rng)
    assert np.max(np.abs(pz.embedding_closed(x, 2.0) - pz.embedding_trace(x, 2.0))) < 1e-12


def test_embedding_lies_on_sphere_of_radius(rng):
    x = pz.random_points("CP2", 200, rng)
    for r in (0.5, 1.0, 3.0):
        xi = pz.embedding_closed(x, r)
        assert np.max(np.abs(np.linalg.norm(xi, axis=-1) - r)) < 1e-12


def test_embedding_south_pole_fixed():
    xi = pz.embedding_closed(np.array([0.4, 1.2, 2.0, np.pi]))
    assert xi[7] == pytest.approx(-0.5)


def test_su2_hamiltonian_points_along_unit_vector(rng):
    s = pz.su2_linear("1/2")
    x = pz.random_points("S2", 10, rng)
    h = pz.hamiltonian_at(s, x)
    th, ph = x[:, 0], x[:, 1]
    n = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], -1)
    sig = 2 * np.array([spin_operators("1/2")[k] for k in range(3)])
    assert np.max(np.abs(h - 0.5 * np.einsum("ni,iab->nab", n, sig))) < 1e-12


def test_full_element_stabilizes_h0(rng):
    lam8 = gell_mann()[7]
    angles = rng.uniform(0, 2, size=8)
    g = pz.su3_full_element(*angles)
    g_red = pz.su3_frame_builder()(np.array([angles[1], angles[0], angles[2], angles[3]]))
    h_full = g @ lam8 @ g.conj().T
    h_red = pz.hamiltonian_at(pz.su3_degenerate(), np.array([angles[1], angles[0], angles[2], angles[3]]))
    assert np.max(np.abs(h_full - h_red)) < 1e-12
    assert np.max(np.abs(g_red @ g_red.conj().T - np.eye(3))) < 1e-12


def test_levels_and_degeneracies():
    deg = pz.su3_degenerate()
    assert deg.level("E1").degeneracy == 2 and deg.level("E3").degeneracy == 1
    adj = pz.su3_adjoint()
    assert sorted(lv.degeneracy for lv in adj.levels) == [2, 2, 4]
    assert adj.level("zero").degeneracy == 4
    assert [lv.label for lv in pz.su2_linear("3/2").levels] == ["3/2", "1/2", "-1/2", "-3/2"]


def test_quadratic_levels_pair_up():
    q = pz.su2_quadratic("5/2")
    assert sorted(lv.degeneracy for lv in q.levels) == [2, 2, 2]


def test_min_gap_and_radius_scaling():
    assert pz.su2_linear("1").min_gap(2.0) == pytest.approx(2.0)
    q = pz.su2_quadratic("3/2")
    assert q.min_gap(2.0) == pytest.approx(4 * q.min_gap(1.0))


def test_unknown_level_and_system():
    with pytest.raises(KeyError):
        pz.su3_degenerate().level("E2")
    with pytest.raises(ValueError):
        pz.make_system("su4")


def test_make_system_aliases():
    assert pz.make_system("su3-deg") == pz.su3_degenerate()
    assert pz.make_system("su2", j="3/2").j == Fraction(3, 2)
    assert pz.make_system("flag").kind == "su3-nondegenerate"


@pytest.mark.parametrize("manifold,angles", [("S2", (4.0, 0.0)), ("S2", (0.1, 2 * np.pi)),
                                              ("CP2", (0.1, 0.1, 0.1)), ("CP2", (0.1, 0.1, 13.0, 0.1)),
                                              ("TORUS", (0.0,))])
def test_param_point_rejects_out_of_range(manifold, angles):
    with pytest.raises(ValueError):
        pz.ParamPoint(manifold, angles)


def test_param_point_rejects_bad_radius():
    with pytest.raises(ValueError):
        pz.ParamPoint("S2", (0.1, 0.2), radius=0.0)


def test_hamiltonian_rejects_wrong_manifold():
    with pytest.raises(ValueError):
        pz.hamiltonian(pz.su3_degenerate(), pz.ParamPoint("S2", (0.1, 0.2)))


def test_frame_builder_rejects_wrong_arity():
    with pytest.raises(ValueError):
        pz.su3_degenerate().frame_builder()(np.zeros(3))


@settings(max_examples=50, deadline=None)
@given(beta=st.floats(0, np.pi), alpha=st.floats(0, 2 * np.pi, exclude_max=True),
       gamma=st.floats(0, 4 * np.pi, exclude_max=True), theta=st.floats(0, np.pi),
       radius=st.floats(0.1, 10))
def test_param_point_json_roundtrip(beta, alpha, gamma, theta, radius):
    p = pz.ParamPoint("CP2", (beta, alpha, gamma, theta), radius)
    q = pz.ParamPoint.from_json(p.to_json())
    assert q == p
    assert np.linalg.norm(pz.embedding_coordinates(p)) == pytest.approx(radius, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4))
def test_frame_derivative_matches_finite_difference(xs):
    fb = pz.su3_degenerate().frame_builder()
    x = np.array(xs)
    h = 1e-6
    for m in range(4):
        e = np.zeros(4)
        e[m] = h
        fd = (fb(x + e) - fb(x - e)) / (2 * h)
        assert np.max(np.abs(fb.derivative(x, m) - fd)) < 1e-7
