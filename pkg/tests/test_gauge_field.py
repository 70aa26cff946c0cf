import numpy as np
import pytest

from holonomy_lab import errata
from holonomy_lab import gauge_field as gf
from holonomy_lab.geometry import hodge_star, kahler_form, metric_at
from holonomy_lab.parametrization import make_system, random_points, su2_linear, su3_adjoint, su3_degenerate
from holonomy_lab.verification import field_pairs

PAIRS = field_pairs()
PAIR_IDS = [f"{s.kind}-{s.j}-{lab}" if s.j is not None else f"{s.kind}-{lab}" for s, lab in PAIRS]


@pytest.mark.parametrize("system,label", PAIRS, ids=PAIR_IDS)
def test_closed_connection_matches_numeric(system, label, rng):
    block = gf.level_block(system, label)
    x = random_points(system.manifold, 50, rng)
    an = gf.connection_numeric(block, x)
    assert an.hermitian_residual < gf.MAX_HERMITIAN_RESIDUAL
    assert np.max(np.abs(an.A - gf.connection_closed(block, x).A)) < 1e-6


@pytest.mark.parametrize("system,label", PAIRS, ids=PAIR_IDS)
def test_closed_curvature_matches_numeric(system, label, rng):
    block = gf.level_block(system, label)
    x = random_points(system.manifold, 50, rng)
    fn = gf.curvature_numeric(block, x).F
    fc = gf.curvature_closed(block, x).F
    assert np.max(np.abs(fn - fc)) < 1e-5
    assert np.max(np.abs(fc + np.swapaxes(fc, -3, -4))) < 1e-14


@pytest.mark.parametrize("system,label", PAIRS, ids=PAIR_IDS)
def test_closed_forms_anti_hermitian(system, label, rng):
    block = gf.level_block(system, label)
    x = random_points(system.manifold, 20, rng)
    assert gf.connection_closed(block, x).anti_hermiticity() < 1e-12
    f = gf.curvature_closed(block, x).F
    assert np.max(np.abs(f + np.conj(np.swapaxes(f, -1, -2)))) < 1e-12


@pytest.mark.parametrize("system,label", [(su3_degenerate(), "E1"), (su3_degenerate(), "E3"),
                                          (su3_adjoint(), "-"), (su3_adjoint(), "0"),
                                          (make_system("su2-quad", j="3/2"), "1/2")],
                         ids=["E1", "E3", "adj-", "adj0", "quad-1/2"])
def test_trace_curvature_matches_eigensolver_projector(system, label, rng):
    block = gf.level_block(system, label)
    x = random_points(system.manifold, 20, rng)
    tr = gf.curvature_closed(block, x).trace()
    assert np.max(np.abs(gf.trace_curvature_projector(block, x) - tr)) < 1e-7


def test_eigensolver_vectors_match_frame_columns(rng):
    block = gf.level_block(su3_adjoint(), "+")
    x = random_points("CP2", 20, rng)
    frame = su3_adjoint().frame_builder()(x)[..., :, list(block.indices)]
    assert np.max(np.abs(gf.aligned_eigenvectors(block, x) - frame)) < 1e-10


def test_u1_and_e3_proportional_to_kahler_form(rng):
    x = random_points("CP2", 200, rng)
    eta = kahler_form(x)
    u1, su2 = gf.decompose_degenerate(gf.curvature_closed(gf.level_block(su3_degenerate(), "E1"), x))
    f3 = gf.curvature_closed(gf.level_block(su3_degenerate(), "E3"), x).F[..., 0, 0]
    assert np.max(np.abs(u1 - 1j / 3 * eta)) < 1e-8
    assert np.max(np.abs(f3 + 2j / 3 * eta)) < 1e-8
    ratios = gf.ratio_to_form(u1, eta)
    assert np.allclose(ratios, 1j / 3)


def test_su2_part_anti_self_dual(rng):
    x = random_points("CP2", 200, rng)
    _, su2 = gf.decompose_degenerate(gf.curvature_closed(gf.level_block(su3_degenerate(), "E1"), x))
    assert np.max(np.abs(hodge_star(su2, metric_at(x)) + su2)) < 1e-8
    assert np.max(np.abs(np.trace(su2, axis1=-2, axis2=-1))) < 1e-12


def test_adjoint_minus_trace_is_minus_two_i_eta(rng):
    x = random_points("CP2", 100, rng)
    tr = gf.curvature_closed(gf.level_block(su3_adjoint(), "-"), x).trace()
    assert np.max(np.abs(tr + 2j * kahler_form(x))) < 1e-12


def test_adjoint_zero_block_structure(rng):
    x = random_points("CP2", 100, rng)
    f = gf.curvature_closed(gf.level_block(su3_adjoint(), "0"), x).F
    assert np.max(np.abs(f[..., 3, :])) == 0 and np.max(np.abs(f[..., :, 3])) == 0
    b = f[..., :3, :3]
    assert np.max(np.abs(hodge_star(b, metric_at(x)) + b)) < 1e-8


def test_decomposition_rejects_non_doublet(rng):
    x = random_points("CP2", 3, rng)
    with pytest.raises(ValueError):
        gf.decompose_degenerate(gf.curvature_closed(gf.level_block(su3_degenerate(), "E3"), x))


def test_errata_printed_forms_disagree_and_corrections_agree():
    rows = errata.check(n=50, seed=1)
    assert {r["name"] for r in rows} == {e.name for e in errata.registry()}
    for r in rows:
        assert r["printed_deviation"] > 1e-2, r["name"]
        assert r["corrected_deviation"] < 1e-6, r["name"]


@pytest.mark.parametrize("h", [1e-8, 1e-2, 0.0])
def test_step_out_of_range(h):
    block = gf.level_block(su3_degenerate(), "E1")
    with pytest.raises(ValueError):
        gf.connection_numeric(block, np.array([1.0, 1.0, 1.0, 1.0]), h)


def test_hermitian_residual_guard(monkeypatch):
    block = gf.level_block(su3_adjoint(), "0")
    x = np.array([0.3, 1.0, 2.0, 0.5])
    field = gf.connection_numeric(block, x, 1e-3, check=False)
    assert 0 < field.hermitian_residual < gf.MAX_HERMITIAN_RESIDUAL
    monkeypatch.setattr(gf, "MAX_HERMITIAN_RESIDUAL", field.hermitian_residual / 2)
    with pytest.raises(gf.FiniteDifferenceError):
        gf.connection_numeric(block, x, 1e-3)


def test_no_closed_form_for_flag_levels_one_and_two():
    flag = make_system("su3-flag")
    assert gf.has_closed_form(gf.level_block(flag, "3"))
    others = [lv.label for lv in flag.levels if lv.label != "3"]
    for lab in others:
        block = gf.level_block(flag, lab)
        assert not gf.has_closed_form(block)
        with pytest.raises(NotImplementedError):
            gf.curvature_closed(block, np.zeros(6))


def test_builders_reject_unknown_source():
    block = gf.level_block(su2_linear("1/2"), "1/2")
    with pytest.raises(ValueError):
        gf.curvature_builder(block, "guess")
    with pytest.raises(ValueError):
        gf.connection_builder(block, "guess")


def test_numeric_builder_matches_closed_builder(rng):
    block = gf.level_block(su3_degenerate(), "E1")
    x = random_points("CP2", 10, rng)
    assert np.max(np.abs(gf.curvature_builder(block, "numeric")(x) - gf.curvature_builder(block)(x))) < 1e-5
    assert np.max(np.abs(gf.connection_builder(block, "numeric")(x) - gf.connection_builder(block)(x))) < 1e-6
