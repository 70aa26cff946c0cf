"""Chern numbers by quadrature, plus the SU(2) monopole charges."""
from __future__ import annotations

import time
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Callable

import numpy as np

from . import closed_forms as cf
from .gauge_field import curvature_builder, level_block
from .geometry import hodge_star, metric_at, wedge_4form
from .parametrization import make_system, su2_quadratic
from .quadrature import CP2_BOX, S2_BOX, SOUTH_SPHERE_BOX, QuadratureResult, integrate_with_error, tensor_integrate

DEFAULT_GRID_2D = 256
DEFAULT_GRID_4D = 32
INTEGER_GATE = 1e-3
FLAG_FIBER = (0.3, 0.7)  # (a, b) held fixed on the south-sphere cycle of the flag manifold

FBuilder = Callable[[np.ndarray], np.ndarray]


@dataclass
class ChernValue:
    value: float
    nearest: int
    deviation: float
    quadrature_error: float

    @classmethod
    def from_result(cls, res: QuadratureResult, scale: complex = 1.0) -> "ChernValue":
        v = complex(res.value) * scale
        value = float(np.real(v))
        nearest = int(round(value))
        return cls(value, nearest, abs(value - nearest), float(abs(scale) * res.error))

    @property
    def is_integer(self) -> bool:
        return self.deviation < INTEGER_GATE


@dataclass
class TopologyReport:
    system: str
    level: str
    grid: int
    c1: ChernValue | None = None
    c2: ChernValue | None = None
    extras: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def accepted(self) -> bool:
        return all(c is None or c.is_integer for c in (self.c1, self.c2))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["accepted"] = self.accepted
        return d


def _timed(fn):
    def wrap(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.wall_time = time.perf_counter() - t0
        return rep
    wrap.__name__ = fn.__name__
    wrap.__doc__ = fn.__doc__
    return wrap


def _sphere_flux(f_theta_phi: Callable[[np.ndarray], np.ndarray], grid: int) -> QuadratureResult:
    """integral of f(theta, phi) dtheta dphi on S^2, Gauss in theta, trapezoid in phi."""
    return integrate_with_error(f_theta_phi, S2_BOX, grid, kinds=("gauss", "trapezoid"), real=False)


@_timed
def su2_monopole_charge(j, m, grid: int = 64) -> TopologyReport:
    """(i / 2 pi) integral of F_theta_phi over S^2 for the spin-j level m; equals -2m."""
    jf, mf = Fraction(j), Fraction(m)
    if abs(mf) > jf or (jf - mf).denominator != 1:
        raise ValueError(f"m={m} is not a level of spin {j}")
    res = _sphere_flux(lambda x: cf.su2_linear_F(x, float(mf))[..., 0, 1, 0, 0], grid)
    return TopologyReport("su2-linear", str(mf), grid, c1=ChernValue.from_result(res, 1j / (2 * np.pi)),
                          extras={"j": str(jf), "expected": float(-2 * mf)})


@_timed
def su2_degenerate_flux(j, grid: int = 64) -> TopologyReport:
    """Total flux of the {+1/2, -1/2} pair and the flux of each diagonal component."""
    jf = Fraction(j)
    if jf.denominator != 2:
        raise ValueError("the +-1/2 pair exists only for half-integral j")
    spec = su2_quadratic(jf)
    jv = float(jf)

    def comp(k):
        return lambda x: cf.su2_quadratic_F(x, jv, 0.5)[..., 0, 1, k, k]

    total = _sphere_flux(lambda x: np.trace(cf.su2_quadratic_F(x, jv, 0.5)[..., 0, 1, :, :], axis1=-2, axis2=-1),
                         grid)
    scale = 1j / (2 * np.pi)
    parts = [ChernValue.from_result(_sphere_flux(comp(k), grid), scale) for k in range(2)]
    return TopologyReport(spec.kind, "1/2", grid, c1=ChernValue.from_result(total, scale),
                          extras={"j": str(jf), "components": [asdict(p) for p in parts],
                                  "expected_components": [float((jf + Fraction(1, 2)) ** 2 - 1),
                                                          float(-((jf + Fraction(1, 2)) ** 2 - 1))]})


def south_sphere_flux(f_builder: FBuilder, ncoords: int = 4, grid: int = DEFAULT_GRID_2D,
                      fiber: tuple[float, float] = FLAG_FIBER, gamma: float = 0.0) -> QuadratureResult:
    """integral of Tr F_12 d beta d alpha at theta = pi (gamma, and a, b on FLAG, held fixed)."""
    tail = [gamma, np.pi] + list(fiber[: ncoords - 4])

    def density(y):
        x = np.empty(y.shape[:-1] + (ncoords,))
        x[..., :2] = y
        for k, v in enumerate(tail, start=2):
            x[..., k] = v
        f = f_builder(x)[..., 0, 1, :, :]
        return np.trace(f, axis1=-2, axis2=-1)

    value = tensor_integrate(density, SOUTH_SPHERE_BOX, grid, ("gauss", "trapezoid"))
    coarse = tensor_integrate(density, SOUTH_SPHERE_BOX, max(2, grid // 2), ("gauss", "trapezoid"))
    return QuadratureResult(value, float(abs(value - coarse)), grid, coarse)


def chern1_value(f_builder: FBuilder, ncoords: int = 4, grid: int = DEFAULT_GRID_2D) -> ChernValue:
    return ChernValue.from_result(south_sphere_flux(f_builder, ncoords, grid), 1j / (2 * np.pi))


# (m, n, p, q, sign) terms of the dx^1 ^ dx^2 ^ dx^3 ^ dx^4 coefficient of w1 ^ w2, as in wedge_4form
_WEDGE_TERMS = ((0, 1, 2, 3, 1), (2, 3, 0, 1, 1), (0, 2, 1, 3, -1), (1, 3, 0, 2, -1), (0, 3, 1, 2, 1), (1, 2, 0, 3, 1))


def second_chern_density(f: np.ndarray) -> np.ndarray:
    """Tr(F ^ F) - TrF ^ TrF as the dbeta dalpha dgamma dtheta coefficient."""
    g = np.moveaxis(f, (-4, -3, -2, -1), (0, 1, 2, 3))  # component-major view
    tr = np.einsum("mnii...->mn...", g)
    out = np.zeros(f.shape[:-4], dtype=complex)
    for m, n, p, q, sign in _WEDGE_TERMS:
        out += sign * (np.einsum("ij...,ji...->...", g[m, n], g[p, q]) - tr[m, n] * tr[p, q])
    return out


def chern2_value(f_builder: FBuilder, grid: int = DEFAULT_GRID_4D, threads: int | None = None) -> ChernValue:
    res = integrate_with_error(lambda x: second_chern_density(f_builder(x)), CP2_BOX, grid,
                               threads=threads, real=False)
    return ChernValue.from_result(res, 1 / (8 * np.pi ** 2))


def action_density(f: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.trace(wedge_4form(f, hodge_star(f, metric_at(x)), matrix=True), axis1=-2, axis2=-1)


def instanton_action(f_builder: FBuilder, grid: int = DEFAULT_GRID_4D, threads: int | None = None) -> float:
    """-(1 / 8 pi^2) integral of Tr[F ^ *F] over CP2."""
    res = integrate_with_error(lambda x: action_density(f_builder(x), x), CP2_BOX, grid,
                               threads=threads, real=False)
    return float(np.real(-res.value / (8 * np.pi ** 2)))


def _block_builder(system_name: str, level: str, source: str):
    system = make_system(system_name)
    block = level_block(system, level)
    return system, block, curvature_builder(block, source)


@_timed
def chern1(system_name: str, level: str, grid: int = DEFAULT_GRID_2D, source: str = "closed-form") -> TopologyReport:
    system, block, fb = _block_builder(system_name, level, source)
    return TopologyReport(system.kind, block.level.label, grid,
                          c1=chern1_value(fb, block.ncoords, grid), extras={"source": source})


@_timed
def chern2(system_name: str, level: str, grid: int = DEFAULT_GRID_4D, source: str = "closed-form",
           threads: int | None = None) -> TopologyReport:
    system, block, fb = _block_builder(system_name, level, source)
    if system.manifold != "CP2":
        raise ValueError("second Chern numbers are integrated over CP2")
    return TopologyReport(system.kind, block.level.label, grid,
                          c2=chern2_value(fb, grid, threads), extras={"source": source})


@_timed
def level_report(system_name: str, level: str, grid_2d: int = DEFAULT_GRID_2D, grid_4d: int = DEFAULT_GRID_4D,
                 with_c2: bool = True, with_action: bool = False, threads: int | None = None) -> TopologyReport:
    """c1 and, on CP2, c2 (and optionally the instanton action with its ratio to c2)."""
    system, block, fb = _block_builder(system_name, level, "closed-form")
    rep = TopologyReport(system.kind, block.level.label, grid_4d, c1=chern1_value(fb, block.ncoords, grid_2d))
    rep.extras["grid_2d"] = grid_2d
    if with_c2 and system.manifold == "CP2":
        rep.c2 = chern2_value(fb, grid_4d, threads)
    if with_action and system.manifold == "CP2":
        action = instanton_action(fb, grid_4d, threads)
        rep.extras["action"] = action
        rep.extras["action_over_c2"] = action / rep.c2.value if rep.c2 and abs(rep.c2.value) > 1e-12 else None
    return rep


# (system, level, expected c1, expected c2 or None)
CHERN_TABLE = (
    ("su3-degenerate", "E3", 1, 0),
    ("su3-degenerate", "E1", -1, 1),
    ("su3-nondegenerate", "3", 1, None),
    ("su3-adjoint", "-", 3, 3),
    ("su3-adjoint", "0", 0, 3),
    ("su3-adjoint", "+", -3, 3),
)

MONOPOLE_SAMPLES = (("1/2", "1/2"), ("3/2", "-3/2"), ("2", "0"))


def chern_table(grid_2d: int = DEFAULT_GRID_2D, grid_4d: int = DEFAULT_GRID_4D,
                threads: int | None = None) -> list[dict]:
    """The full table of integers: monopole samples, CP2 and flag levels, adjoint levels."""
    rows = []
    for j, m in MONOPOLE_SAMPLES:
        rep = su2_monopole_charge(j, m)
        rows.append({"quantity": "c1", "system": "su2-linear", "level": m, "j": j,
                     "expected": -2 * Fraction(m), **_row(rep.c1)})
    for system, level, e1, e2 in CHERN_TABLE:
        rep = level_report(system, level, grid_2d, grid_4d, with_c2=e2 is not None, threads=threads)
        rows.append({"quantity": "c1", "system": system, "level": level, "expected": e1, **_row(rep.c1)})
        if e2 is not None and (system, level) != ("su3-degenerate", "E3"):
            rows.append({"quantity": "c2", "system": system, "level": level, "expected": e2, **_row(rep.c2)})
    for r in rows:
        r["expected"] = int(r["expected"])
        r["pass"] = abs(r["value"] - r["expected"]) < INTEGER_GATE
    return rows


def _row(c: ChernValue) -> dict:
    return {"value": c.value, "deviation": c.deviation, "quadrature_error": c.quadrature_error}
