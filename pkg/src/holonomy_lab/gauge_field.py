"""Adiabatic connections and curvatures on the level blocks of each system.

Two independent routes are provided: closed-form tables (closed_forms.py) and
a numeric construction from explicit frames, A_m = <i| U^dag d_m U |j> with
central differences, F = dA + A ^ A.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import closed_forms as cf
from ._linalg import dagger
from .parametrization import ParamPoint, SystemSpec, Level

DEFAULT_STEP = 1e-5
DEFAULT_CURVATURE_STEP = 1e-4
MAX_HERMITIAN_RESIDUAL = 1e-6


@dataclass(frozen=True)
class LevelBlock:
    system: SystemSpec
    level: Level

    @property
    def indices(self) -> tuple[int, ...]:
        return self.level.indices

    @property
    def dim(self) -> int:
        return self.level.degeneracy

    @property
    def ncoords(self) -> int:
        return {"S2": 2, "CP2": 4, "FLAG": 6}[self.system.manifold]


def level_block(system: SystemSpec, label: str) -> LevelBlock:
    return LevelBlock(system, system.level(label))


@dataclass
class ConnectionField:
    block: LevelBlock
    A: np.ndarray  # (..., ncoords, d, d)
    source: str
    hermitian_residual: float = 0.0

    def anti_hermiticity(self) -> float:
        return float(np.max(np.abs(self.A + dagger(self.A))))


@dataclass
class CurvatureField:
    block: LevelBlock
    F: np.ndarray  # (..., ncoords, ncoords, d, d)
    source: str
    hermitian_residual: float = 0.0

    def trace(self) -> np.ndarray:
        return np.trace(self.F, axis1=-2, axis2=-1)


class FiniteDifferenceError(ValueError):
    pass


def _coords(point) -> np.ndarray:
    return point.coords if isinstance(point, ParamPoint) else np.asarray(point, dtype=float)


def _check_step(h: float):
    if not 1e-7 <= h <= 1e-3:
        raise ValueError(f"finite-difference step {h} outside [1e-7, 1e-3]")


def _raw_connection(block: LevelBlock, x: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Un-symmetrized <i|U^dag dU|j> on the block and U itself."""
    builder = block.system.frame_builder()
    u = builder(x)
    idx = list(block.indices)
    ud = dagger(u[..., :, idx])
    comps = []
    for m in range(builder.ncoords):
        e = np.zeros(builder.ncoords)
        e[m] = h
        du = (builder(x + e)[..., :, idx] - builder(x - e)[..., :, idx]) / (2 * h)
        comps.append(ud @ du)
    return np.stack(comps, axis=-3), u


def connection_numeric(block: LevelBlock, point, h: float = DEFAULT_STEP,
                       check: bool = True) -> ConnectionField:
    """A_m(i, j) = <i|U^dag d_m U|j> by central differences of the frame.

    The anti-Hermitian part is kept; the discarded Hermitian part is reported
    and must stay below 1e-6.
    """
    _check_step(h)
    raw, _ = _raw_connection(block, _coords(point), h)
    anti = (raw - dagger(raw)) / 2
    resid = float(np.max(np.abs(raw + dagger(raw)) / 2)) if raw.size else 0.0
    if check and resid > MAX_HERMITIAN_RESIDUAL:
        raise FiniteDifferenceError(f"Hermitian residual {resid:.3g} > {MAX_HERMITIAN_RESIDUAL}; adjust h")
    return ConnectionField(block, anti, "numeric", resid)


def curvature_numeric(block: LevelBlock, point, h: float = DEFAULT_CURVATURE_STEP,
                      h_connection: float = DEFAULT_STEP, check: bool = True) -> CurvatureField:
    """F_mn = d_m A_n - d_n A_m + [A_m, A_n], derivatives of the numeric A by central differences."""
    _check_step(h)
    x = _coords(point)
    a0 = connection_numeric(block, x, h_connection, check)
    n = block.ncoords
    da = []
    resid = a0.hermitian_residual
    for m in range(n):
        e = np.zeros(n)
        e[m] = h
        ap = connection_numeric(block, x + e, h_connection, check)
        am = connection_numeric(block, x - e, h_connection, check)
        resid = max(resid, ap.hermitian_residual, am.hermitian_residual)
        da.append((ap.A - am.A) / (2 * h))
    da = np.stack(da, axis=-4)  # (..., m, n, d, d) = d_m A_n
    a = a0.A
    comm = a[..., :, None, :, :] @ a[..., None, :, :, :] - a[..., None, :, :, :] @ a[..., :, None, :, :]
    f = da - np.swapaxes(da, -3, -4) + comm
    return CurvatureField(block, f, "numeric", resid)


def _m_value(label: str) -> float:
    return float(Fraction(label))


def _closed_tables(block: LevelBlock) -> tuple[Callable, Callable]:
    kind = block.system.kind
    label = block.level.label
    if kind == "su2-linear":
        m = _m_value(label)
        return (lambda x: cf.su2_linear_A(x, m)), (lambda x: cf.su2_linear_F(x, m))
    if kind == "su2-quadratic":
        m = _m_value(label)
        j = block.system.j
        return (lambda x: cf.su2_quadratic_A(x, j, m)), (lambda x: cf.su2_quadratic_F(x, j, m))
    if kind == "su3-degenerate":
        return {"E1": (cf.su3_E1_A, cf.su3_E1_F), "E3": (cf.su3_E3_A, cf.su3_E3_F)}[label]
    if kind == "su3-adjoint":
        return {"-": (cf.adjoint_minus_A, cf.adjoint_minus_F),
                "0": (cf.adjoint_zero_A, cf.adjoint_zero_F),
                "+": (cf.adjoint_plus_A, cf.adjoint_plus_F)}[label]
    if kind == "su3-nondegenerate" and label == "3":
        return cf.flag_level3_A, cf.flag_level3_F
    raise NotImplementedError(f"no closed form for {kind} level {label}")


def has_closed_form(block: LevelBlock) -> bool:
    try:
        _closed_tables(block)
    except NotImplementedError:
        return False
    return True


def connection_closed(block: LevelBlock, point) -> ConnectionField:
    a_fn, _ = _closed_tables(block)
    return ConnectionField(block, a_fn(_coords(point)), "closed-form")


def curvature_closed(block: LevelBlock, point) -> CurvatureField:
    _, f_fn = _closed_tables(block)
    return CurvatureField(block, f_fn(_coords(point)), "closed-form")


def curvature_builder(block: LevelBlock, source: str = "closed-form") -> Callable[[np.ndarray], np.ndarray]:
    """x -> F components, from the closed form or the numeric construction."""
    if source == "closed-form":
        return _closed_tables(block)[1]
    if source == "numeric":
        return lambda x: curvature_numeric(block, x, check=False).F
    raise ValueError(f"unknown source {source!r}")


def connection_builder(block: LevelBlock, source: str = "closed-form") -> Callable[[np.ndarray], np.ndarray]:
    if source == "closed-form":
        return _closed_tables(block)[0]
    if source == "numeric":
        return lambda x: connection_numeric(block, x, check=False).A
    raise ValueError(f"unknown source {source!r}")


def decompose_degenerate(field: CurvatureField) -> tuple[np.ndarray, np.ndarray]:
    """Split a two-dimensional block's F into its U(1) trace part and traceless SU(2) part.

    Returns (u1, su2): u1 = Tr F / 2 as scalar components (..., 4, 4), and
    su2 = F - u1 * I as (..., 4, 4, 2, 2).
    """
    if field.F.shape[-1] != 2:
        raise ValueError("decomposition needs a doubly degenerate block")
    u1 = np.trace(field.F, axis1=-2, axis2=-1) / 2
    su2 = field.F - u1[..., None, None] * np.eye(2)
    return u1, su2


def ratio_to_form(values: np.ndarray, form: np.ndarray, floor: float = 1e-9) -> np.ndarray:
    """Entrywise values / form over components where |form| exceeds floor."""
    mask = np.abs(form) > floor
    return values[mask] / form[mask]


def eigen_projector(block: LevelBlock, point, radius: float = 1.0) -> np.ndarray:
    """Level projector from a numerical eigensolver of H(p), independent of the frame's gauge."""
    from .parametrization import hamiltonian_at

    x = _coords(point)
    h = hamiltonian_at(block.system, x, radius)
    _, vecs = np.linalg.eigh(h)
    levels = np.sort(np.real(np.diag(block.system.h0(radius))))
    target = np.real(block.system.h0(radius)[block.indices[0], block.indices[0]])
    cols = np.flatnonzero(np.abs(levels - target) < 1e-9)
    q = vecs[..., :, cols]
    return q @ dagger(q)


def trace_curvature_projector(block: LevelBlock, point, h: float = DEFAULT_STEP) -> np.ndarray:
    """Tr F_mn = Tr(P [d_m P, d_n P]) with P from the eigensolver; shape (..., n, n)."""
    _check_step(h)
    x = _coords(point)
    n = block.ncoords
    dp = []
    for m in range(n):
        e = np.zeros(n)
        e[m] = h
        dp.append((eigen_projector(block, x + e) - eigen_projector(block, x - e)) / (2 * h))
    p = eigen_projector(block, x)
    out = np.zeros(x.shape[:-1] + (n, n), dtype=complex)
    for a in range(n):
        for b in range(a + 1, n):
            t = np.trace(p @ (dp[a] @ dp[b] - dp[b] @ dp[a]), axis1=-2, axis2=-1)
            out[..., a, b] = t
            out[..., b, a] = -t
    return out


def aligned_eigenvectors(block: LevelBlock, point) -> np.ndarray:
    """Eigensolver basis of the level rotated onto the frame's columns (per-point phase or U(d) alignment)."""
    from .parametrization import hamiltonian_at

    x = _coords(point)
    _, vecs = np.linalg.eigh(hamiltonian_at(block.system, x))
    levels = np.sort(np.real(np.diag(block.system.h0(1.0))))
    target = np.real(block.system.h0(1.0)[block.indices[0], block.indices[0]])
    q = vecs[..., :, np.flatnonzero(np.abs(levels - target) < 1e-9)]
    frame = block.system.frame_builder()(x)[..., :, list(block.indices)]
    overlap = dagger(q) @ frame
    u, _, vh = np.linalg.svd(overlap)
    return q @ (u @ vh)
