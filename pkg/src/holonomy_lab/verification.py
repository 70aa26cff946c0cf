"""Verification suites: every check pairs a computed value with an expected one and its provenance.

Provenance tags: PAPER (a value printed in the source derivation), DERIVED (an
independent computation inside this package), TRIVIAL (holds by construction).
"""
from __future__ import annotations

import platform
import time
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Callable

import numpy as np

from . import __version__
from .gauge_field import (connection_closed, connection_numeric, curvature_closed, curvature_numeric,
                          decompose_degenerate, level_block)
from .geometry import (CP2_VOLUME, ETA_NORM_SQUARED, form_inner_product, hodge_star, kahler_form, metric_at,
                       normalized_generator, south_sphere_integral, volume_cp2, wedge_4form, integrate_cp2)
from .holonomy import berry_phase_su2, ellipse, coordinate_circle, latitude, solid_angle, wilson_loop, wrap_phase
from .lie_algebra import verify_algebra
from .parametrization import make_system, random_points, su2_linear, su2_quadratic, su3_adjoint, su3_degenerate
from .topology import CHERN_TABLE, chern1_value, chern2_value, su2_degenerate_flux, su2_monopole_charge
from .gauge_field import curvature_builder

SPIN_VALUES = ("1/2", "1", "3/2", "2", "5/2")
LATITUDES = (0.3, 1.0, np.pi / 2, 2.0, 2.8)


@dataclass
class Check:
    name: str
    computed: float
    expected: float
    provenance: str
    tolerance: float
    relative: bool = False
    detail: dict = field(default_factory=dict)

    @property
    def error(self) -> float:
        err = abs(self.computed - self.expected)
        return err / abs(self.expected) if self.relative and self.expected else err

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["error"] = self.error
        d["pass"] = self.passed
        return d


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check]
    wall_time: float
    suite_times: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "pass": self.passed, "failures": self.failures(),
                "checks": [c.to_dict() for c in self.checks], "suite_times": self.suite_times,
                "environment": self.environment, "wall_time": self.wall_time}


@dataclass
class SuiteOptions:
    seed: int = 0
    points: int = 200
    grid_2d: int = 256
    grid_4d: int = 32
    step: float = 1e-5
    threads: int | None = None
    oracle: bool = True


def environment() -> dict:
    return {"package_version": __version__, "python": platform.python_version(), "numpy": np.__version__,
            "platform": platform.platform()}


def _residual_check(name, residual, tol, provenance="PAPER", **detail) -> Check:
    return Check(name, float(residual), 0.0, provenance, tol, detail=detail)


# ------------------------------------------------------------------ algebra

def suite_algebra(opts: SuiteOptions) -> list[Check]:
    return [_residual_check(r["name"], r["residual"], r["tolerance"]) for r in verify_algebra()]


# ----------------------------------------------------------------- monopole

def _spin_levels(j: str) -> list[Fraction]:
    jf = Fraction(j)
    return [jf - k for k in range(int(2 * jf) + 1)]


def suite_monopole(opts: SuiteOptions) -> list[Check]:
    checks = []
    for j in SPIN_VALUES:
        for m in _spin_levels(j):
            rep = su2_monopole_charge(j, m)
            checks.append(Check(f"monopole_j{j}_m{m}", rep.c1.value, float(-2 * m), "PAPER", 1e-6))
    for j in ("1/2", "3/2", "5/2"):
        rep = su2_degenerate_flux(j)
        checks.append(Check(f"degenerate_pair_total_j{j}", rep.c1.value, 0.0, "PAPER", 1e-6))
        for k, (comp, exp) in enumerate(zip(rep.extras["components"], rep.extras["expected_components"])):
            checks.append(Check(f"degenerate_pair_component{k}_j{j}", comp["value"], exp, "PAPER", 1e-6))
    return checks


# ----------------------------------------------------------------- geometry

def suite_geometry(opts: SuiteOptions) -> list[Check]:
    rng = np.random.default_rng(opts.seed)
    vol = volume_cp2(opts.grid_4d, opts.threads)
    inner = form_inner_product(kahler_form, kahler_form, opts.grid_4d, opts.threads)
    x = random_points("CP2", 100, rng)
    eta = kahler_form(x)
    sd = float(np.max(np.abs(hodge_star(eta, metric_at(x)) - eta)))
    w1 = south_sphere_integral(normalized_generator, opts.grid_2d)
    w2 = integrate_cp2(lambda y: wedge_4form(normalized_generator(y), normalized_generator(y)),
                       opts.grid_4d, opts.threads)
    return [
        Check("cp2_volume", float(vol.value), CP2_VOLUME, "PAPER", 1e-6, relative=True),
        Check("eta_inner_product", float(inner.value), ETA_NORM_SQUARED, "PAPER", 1e-5, relative=True),
        _residual_check("eta_self_dual", sd, 1e-8),
        Check("omega_south_sphere", float(w1.value), 1.0, "PAPER", 1e-4),
        Check("omega_wedge_omega", float(w2.value), 1.0, "PAPER", 1e-4),
    ]


# ------------------------------------------------------------------- fields

def field_pairs() -> list[tuple]:
    """Every (system, level) with a closed form."""
    pairs = []
    for j in SPIN_VALUES:
        pairs += [(su2_linear(j), lv.label) for lv in su2_linear(j).levels]
        pairs += [(su2_quadratic(j), lv.label) for lv in su2_quadratic(j).levels]
    pairs += [(su3_degenerate(), "E1"), (su3_degenerate(), "E3"), (make_system("su3-flag"), "3")]
    pairs += [(su3_adjoint(), lab) for lab in ("-", "0", "+")]
    return pairs


def _pair_name(system, label) -> str:
    j = f"_j{system.j}" if system.j is not None else ""
    return f"{system.kind}{j}_{label}"


def suite_fields(opts: SuiteOptions) -> list[Check]:
    rng = np.random.default_rng(opts.seed)
    checks = []
    for system, label in field_pairs():
        block = level_block(system, label)
        x = random_points(system.manifold, opts.points, rng)
        an = connection_numeric(block, x, opts.step)
        ac = connection_closed(block, x)
        fn = curvature_numeric(block, x)
        fc = curvature_closed(block, x)
        name = _pair_name(system, label)
        checks.append(_residual_check(f"A_{name}", np.max(np.abs(an.A - ac.A)), 1e-6,
                                      hermitian_residual=an.hermitian_residual))
        checks.append(_residual_check(f"F_{name}", np.max(np.abs(fn.F - fc.F)), 1e-5))
        checks.append(_residual_check(f"A_anti_hermitian_{name}", ac.anti_hermiticity(), 1e-10, "TRIVIAL"))
    return checks


# ------------------------------------------------------------ decomposition

def suite_decomposition(opts: SuiteOptions) -> list[Check]:
    rng = np.random.default_rng(opts.seed)
    x = random_points("CP2", opts.points, rng)
    eta = kahler_form(x)
    g = metric_at(x)
    u1, su2 = decompose_degenerate(curvature_closed(level_block(su3_degenerate(), "E1"), x))
    f3 = curvature_closed(level_block(su3_degenerate(), "E3"), x).F[..., 0, 0]
    f0 = curvature_closed(level_block(su3_adjoint(), "0"), x).F
    block3 = f0[..., :3, :3]
    return [
        _residual_check("u1_part_equals_i_third_eta", np.max(np.abs(u1 - 1j / 3 * eta)), 1e-8),
        _residual_check("E3_equals_minus_two_i_third_eta", np.max(np.abs(f3 + 2j / 3 * eta)), 1e-8),
        _residual_check("su2_part_traceless", np.max(np.abs(np.trace(su2, axis1=-2, axis2=-1))), 1e-12, "TRIVIAL"),
        _residual_check("u1_part_self_dual", np.max(np.abs(hodge_star(u1, g) - u1)), 1e-8),
        _residual_check("su2_part_anti_self_dual", np.max(np.abs(hodge_star(su2, g) + su2)), 1e-8),
        _residual_check("adjoint_zero_fourth_row_column",
                        max(np.max(np.abs(f0[..., 3, :])), np.max(np.abs(f0[..., :, 3]))), 1e-12),
        _residual_check("adjoint_zero_traceless", np.max(np.abs(np.trace(f0, axis1=-2, axis2=-1))), 1e-12),
        _residual_check("adjoint_zero_anti_self_dual", np.max(np.abs(hodge_star(block3, g) + block3)), 1e-8),
    ]


# -------------------------------------------------------------------- chern

def suite_chern(opts: SuiteOptions) -> list[Check]:
    """Default grids within 1e-3 of the integer; doubled grids within 1e-6."""
    checks = []
    for system_name, label, e1, e2 in CHERN_TABLE:
        system = make_system(system_name)
        block = level_block(system, label)
        fb = curvature_builder(block)
        fine = chern1_value(fb, block.ncoords, 2 * opts.grid_2d)
        coarse = chern1_value(fb, block.ncoords, opts.grid_2d)
        name = f"{system_name}_{label}"
        checks.append(Check(f"c1_{name}", coarse.value, e1, "PAPER", 1e-3, detail={"grid": opts.grid_2d}))
        checks.append(Check(f"c1_{name}_doubled", fine.value, e1, "PAPER", 1e-6, detail={"grid": 2 * opts.grid_2d}))
        if e2 is None or label == "E3":
            continue
        res = _chern2_both(fb, opts)
        checks.append(Check(f"c2_{name}", res[0], e2, "PAPER", 1e-3, detail={"grid": opts.grid_4d}))
        checks.append(Check(f"c2_{name}_doubled", res[1], e2, "PAPER", 1e-6, detail={"grid": 2 * opts.grid_4d}))
    # E3 is Abelian: the integrand vanishes identically
    e3 = curvature_builder(level_block(su3_degenerate(), "E3"))
    checks.append(Check("c2_su3-degenerate_E3", chern2_value(e3, 8).value, 0.0, "TRIVIAL", 1e-12))
    return checks


def _chern2_both(fb, opts: SuiteOptions) -> tuple[float, float]:
    """c2 at grid and 2 * grid from one doubled-grid quadrature (which also evaluates grid)."""
    from .quadrature import CP2_BOX, integrate_with_error
    from .topology import second_chern_density

    res = integrate_with_error(lambda x: second_chern_density(fb(x)), CP2_BOX, 2 * opts.grid_4d,
                               threads=opts.threads, real=False)
    scale = 1 / (8 * np.pi ** 2)
    return float(np.real(res.coarse) * scale), float(np.real(res.value) * scale)


# ----------------------------------------------------------------- holonomy

def _circular(a: float, b: float) -> float:
    return abs(wrap_phase(a - b))


def suite_holonomy(opts: SuiteOptions) -> list[Check]:
    checks = []
    for theta0 in LATITUDES:
        loop = latitude(theta0)
        omega = solid_angle(loop)
        for j, m in (("3/2", "3/2"), ("3/2", "1/2"), ("3/2", "-1/2"), ("3/2", "-3/2"), ("1", "1")):
            phase = berry_phase_su2(j, m, loop, 512)
            target = wrap_phase(-float(Fraction(m)) * omega)
            checks.append(Check(f"berry_phase_theta{theta0:.4f}_j{j}_m{m}", _circular(phase, target), 0.0, "PAPER",
                                1e-5, detail={"phase": phase, "minus_m_omega": target}))
    e1_loop = ellipse("CP2", [1.0, 0.5, 1.0, 1.5], ("beta", "theta"), (0.4, 0.6))
    gamma_loop = coordinate_circle("CP2", [1.0, 0.5, 0.0, 1.5], "gamma")
    for name, system, label, loop in (("E1_ellipse", "su3-degenerate", "E1", e1_loop),
                                      ("adjoint0_gamma_circle", "su3-adjoint", "0", gamma_loop),
                                      ("su2_latitude", "su2-linear", "1/2", latitude(1.0))):
        w = wilson_loop(system, label, loop, 512).W
        wr = wilson_loop(system, label, loop.reversed(), 512).W
        checks.append(_residual_check(f"reversal_{name}", np.max(np.abs(wr - w.conj().T)), 1e-7, "TRIVIAL"))
    h = wilson_loop("su3-degenerate", "E1", e1_loop, 1024)
    checks.append(_residual_check("wilson_doubling_E1_ellipse", h.convergence, 1e-6, "DERIVED"))
    if opts.oracle:
        checks += oracle_checks(e1_loop)
    return checks


def oracle_checks(loop) -> list[Check]:
    from .dynamics import T_SWEEP, sweep

    runs = sweep("su3-degenerate", "E1", loop, T_SWEEP)
    dists = [r.distance_to_wilson for r in runs]
    monotone = all(b < a for a, b in zip(dists, dists[1:]))
    out = [Check("oracle_vs_wilson_E1_T1e3", dists[-1], 0.0, "DERIVED", 1e-2,
                 detail={"T_units": list(T_SWEEP), "distances": dists, "leakage": [r.leakage for r in runs]}),
           Check("oracle_monotone_over_T_sweep", 0.0 if monotone else 1.0, 0.0, "DERIVED", 0.0,
                 detail={"distances": dists})]
    return out


SUITES: dict[str, Callable[[SuiteOptions], list[Check]]] = {
    "algebra": suite_algebra,
    "monopole": suite_monopole,
    "geometry": suite_geometry,
    "fields": suite_fields,
    "decomposition": suite_decomposition,
    "chern": suite_chern,
    "holonomy": suite_holonomy,
}


def run_suites(names: list[str] | None = None, opts: SuiteOptions | None = None) -> VerificationReport:
    names = list(SUITES) if not names or names == ["all"] else names
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
    opts = opts or SuiteOptions()
    t0 = time.perf_counter()
    checks, times = [], {}
    for n in names:
        t = time.perf_counter()
        checks += SUITES[n](opts)
        times[n] = time.perf_counter() - t
    return VerificationReport("+".join(names) if len(names) < len(SUITES) else "all", checks,
                              time.perf_counter() - t0, times, environment())
