import numpy as np
import pytest

from holonomy_lab import dynamics as dy
from holonomy_lab.holonomy import constant_loop, ellipse, latitude, wrap_phase
from holonomy_lab.parametrization import make_system

E1_LOOP = ellipse("CP2", [1.0, 0.5, 1.0, 1.5], ("beta", "theta"), (0.4, 0.6))


def test_triple_jump_weights():
    g1, g0, _ = dy.TRIPLE_JUMP
    assert sum(dy.TRIPLE_JUMP) == pytest.approx(1.0, abs=1e-15)
    assert 2 * g1 ** 3 + g0 ** 3 == pytest.approx(0.0, abs=1e-14)


def test_constant_hamiltonian_returns_identity():
    run = dy.evolve("su3-degenerate", "E1", constant_loop("CP2", [1.0, 0.5, 1.0, 1.5]), 3.0)
    o = dy.extract_holonomy(run, segments=64)
    assert np.max(np.abs(o.raw_overlap - np.eye(2))) < 1e-10
    assert o.leakage < 1e-12 and o.distance_to_wilson < 1e-10
    assert run.dynamical_phase == pytest.approx(run.system.level("E1").eigenvalue * 3.0)


def test_default_step_count_meets_minimum():
    s = make_system("su2-linear", j="1/2")
    assert dy.minimum_steps(s, 10.0) == 50_000
    run = dy.evolve(s, "1/2", latitude(1.0), 10.0)
    assert run.steps == 50_000 and run.norm_drift < dy.NORM_TOL


@pytest.mark.parametrize("T", [50.0, 100.0, 200.0])
def test_spin_half_equator_phase_error_scales_as_inverse_time(T):
    o = dy.extract_holonomy(dy.evolve("su2-linear", "1/2", latitude(np.pi / 2), T))
    err = abs(wrap_phase(np.angle(o.W[0, 0]) + np.pi))
    # second-order adiabatic shift of the level energy: pi^2 / T
    assert err * T == pytest.approx(np.pi ** 2, rel=0.02)
    assert o.leakage <= (2 * np.pi / T) ** 2


@pytest.mark.slow
def test_spin_half_equator_long_time_reaches_minus_pi():
    o = dy.extract_holonomy(dy.evolve("su2-linear", "1/2", latitude(np.pi / 2), 2.5e3))
    assert abs(wrap_phase(np.angle(o.W[0, 0]) + np.pi)) < 5e-3


def test_non_abelian_oracle_approaches_wilson_loop():
    gap = make_system("su3-degenerate").min_gap()
    dists = []
    for t in (30, 60, 100):
        o = dy.extract_holonomy(dy.evolve("su3-degenerate", "E1", E1_LOOP, t / gap), check_leakage=False)
        assert np.max(np.abs(o.W @ o.W.conj().T - np.eye(2))) < 1e-12
        dists.append(o.distance_to_wilson * t)
    # distance ~ C / T
    assert max(dists) / min(dists) < 1.3


def test_radius_scales_time():
    loop = latitude(1.0)
    a = dy.extract_holonomy(dy.evolve("su2-linear", "1/2", loop, 40.0, radius=2.0), check_leakage=False)
    b = dy.extract_holonomy(dy.evolve("su2-linear", "1/2", loop, 80.0, radius=1.0), check_leakage=False)
    assert np.max(np.abs(a.W - b.W)) < 1e-8


def test_to_dict_fields():
    o = dy.extract_holonomy(dy.evolve("su2-linear", "1/2", latitude(1.0), 20.0), check_leakage=False)
    d = o.to_dict()
    for key in ("T", "steps", "dynamical_phase", "norm_drift", "W_real", "W_imag", "leakage", "distance_to_wilson"):
        assert key in d


def test_error_cases():
    with pytest.raises(ValueError, match="minimum"):
        dy.evolve("su2-linear", "1/2", latitude(1.0), 10.0, steps=100)
    with pytest.raises(ValueError):
        dy.evolve("su2-linear", "1/2", E1_LOOP, 10.0)
    with pytest.raises(ValueError, match="leakage"):
        dy.extract_holonomy(dy.evolve("su3-degenerate", "E1", E1_LOOP, 5.0))
    with pytest.raises(KeyError):
        dy.evolve("su3-degenerate", "E2", E1_LOOP, 1.0)
