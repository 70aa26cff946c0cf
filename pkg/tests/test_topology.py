from fractions import Fraction

import numpy as np
import pytest

from holonomy_lab import topology as tp
from holonomy_lab.gauge_field import curvature_builder, level_block
from holonomy_lab.parametrization import make_system, su3_adjoint, su3_degenerate


@pytest.mark.parametrize("j", ["1/2", "1", "3/2", "2", "5/2"])
def test_monopole_charge_is_minus_two_m(j):
    jf = Fraction(j)
    for k in range(int(2 * jf) + 1):
        m = jf - k
        rep = tp.su2_monopole_charge(j, m)
        assert abs(rep.c1.value + 2 * float(m)) < 1e-6
        assert rep.accepted


@pytest.mark.parametrize("j", ["1/2", "3/2", "5/2"])
def test_degenerate_pair_flux(j):
    rep = tp.su2_degenerate_flux(j)
    assert abs(rep.c1.value) < 1e-6
    comps = [c["value"] for c in rep.extras["components"]]
    k = (float(Fraction(j)) + 0.5) ** 2 - 1
    assert comps == pytest.approx([k, -k], abs=1e-6)


def test_monopole_rejects_invalid_level():
    with pytest.raises(ValueError):
        tp.su2_monopole_charge("1", "1/2")
    with pytest.raises(ValueError):
        tp.su2_monopole_charge("1/2", "3/2")
    with pytest.raises(ValueError):
        tp.su2_degenerate_flux("1")


@pytest.mark.parametrize("system,level,e1,e2", tp.CHERN_TABLE)
def test_chern_numbers_small_grids(system, level, e1, e2):
    rep = tp.level_report(system, level, grid_2d=64, grid_4d=16, with_c2=e2 is not None)
    assert abs(rep.c1.value - e1) < 1e-6
    if e2 is not None and rep.c2 is not None:
        assert abs(rep.c2.value - e2) < 1e-6
    assert rep.accepted


def test_first_chern_numbers_sum_to_zero():
    adj = sum(tp.chern1("su3-adjoint", lab, 64).c1.value for lab in ("-", "0", "+"))
    deg = sum(tp.chern1("su3-degenerate", lab, 64).c1.value for lab in ("E1", "E3"))
    assert abs(adj) < 1e-8 and abs(deg) < 1e-8


def test_numeric_curvature_gives_same_first_chern_number():
    rep = tp.chern1("su3-degenerate", "E1", 64, source="numeric")
    assert abs(rep.c1.value - tp.chern1("su3-degenerate", "E1", 64).c1.value) < 1e-4


def test_abelian_field_has_zero_second_chern_density(rng):
    from holonomy_lab.parametrization import random_points
    x = random_points("CP2", 30, rng)
    f3 = curvature_builder(level_block(su3_degenerate(), "E3"))(x)
    assert np.max(np.abs(tp.second_chern_density(f3))) < 1e-14


def test_second_chern_density_has_no_u1_su2_cross_terms(rng):
    from holonomy_lab.parametrization import random_points
    fb = curvature_builder(level_block(su3_degenerate(), "E1"))
    f = fb(random_points("CP2", 30, rng))
    u1 = np.trace(f, axis1=-2, axis2=-1)[..., None, None] / 2 * np.eye(2)
    dens = tp.second_chern_density
    assert np.max(np.abs(dens(f) - dens(f - u1) - dens(u1))) < 1e-13


def test_zero_field_gives_zero():
    zero = lambda x: np.zeros(x.shape[:-1] + (4, 4, 2, 2), dtype=complex)
    assert tp.chern1_value(zero, 4, 16).value == 0
    assert tp.chern2_value(zero, 8).value == 0
    assert tp.instanton_action(zero, 8) == 0


@pytest.mark.parametrize("system,level,c2", [("su3-degenerate", "E1", 1), ("su3-adjoint", "-", 3),
                                             ("su3-adjoint", "0", 3)])
def test_instanton_action_equals_second_chern_number(system, level, c2):
    fb = curvature_builder(level_block(make_system(system), level))
    assert tp.instanton_action(fb, 16) == pytest.approx(c2, abs=1e-8)


def test_level_report_action_ratio():
    rep = tp.level_report("su3-degenerate", "E1", 64, 16, with_action=True)
    assert rep.extras["action_over_c2"] == pytest.approx(1.0, abs=1e-8)


def test_chern2_rejects_flag_manifold():
    with pytest.raises(ValueError):
        tp.chern2("su3-flag", "3", 8)


def test_chern_value_rounding():
    from holonomy_lab.quadrature import QuadratureResult
    res = QuadratureResult(value=-2.9996, error=1e-5, n=8, coarse=-2.9)
    c = tp.ChernValue.from_result(res)
    assert c.nearest == -3 and c.is_integer
    assert not tp.ChernValue.from_result(QuadratureResult(value=0.5, error=0.0, n=8)).is_integer


def test_report_to_dict_roundtrip():
    d = tp.su2_monopole_charge("1", "1").to_dict()
    assert d["accepted"] and d["c1"]["nearest"] == -2 and d["c2"] is None
