"""Brute-force Schrodinger evolution around a loop, as an independent holonomy oracle.

H(t) = U(p(t/T)) H0 U(p(t/T))^dag, so the exponential of H at a single time is
exact and unitary: exp(-i tau H) = U exp(-i tau H0) U^dag. Exponential midpoint
steps (second order, symmetric) are composed with Suzuki's triple jump to give
a fourth-order unitary scheme.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ._linalg import dagger, polar_unitary
from .gauge_field import level_block
from .holonomy import LoopPath, _ordered_product, wilson_loop
from .parametrization import SystemSpec, make_system

STEPS_PER_UNIT = 10 ** 4  # minimum steps per unit of max|H| * T
CHUNK_STEPS = 1 << 14
MAX_LEAKAGE = 1e-3
NORM_TOL = 1e-8
GAP_FLOOR = 1e-9
T_SWEEP = (1e2, 3e2, 1e3)  # in units of 1 / gap

_CBRT2 = 2 ** (1 / 3)
_G1 = 1 / (2 - _CBRT2)
_G0 = -_CBRT2 / (2 - _CBRT2)
TRIPLE_JUMP = (_G1, _G0, _G1)


@dataclass
class EvolutionRun:
    system: SystemSpec
    level: str
    loop: LoopPath
    T: float
    steps: int
    radius: float
    psi0: np.ndarray  # (dim, d) initial block basis
    psiT: np.ndarray  # (dim, d) evolved states
    dynamical_phase: float  # integral of E dt on the level
    norm_drift: float
    wall_time: float

    def summary(self) -> dict:
        return {"system": self.system.kind, "level": self.level, "loop": self.loop.to_dict(), "T": self.T,
                "steps": self.steps, "radius": self.radius, "dynamical_phase": self.dynamical_phase,
                "norm_drift": self.norm_drift, "wall_time": self.wall_time}


@dataclass
class OracleHolonomy:
    W: np.ndarray
    raw_overlap: np.ndarray
    leakage: float
    distance_to_wilson: float | None
    run: EvolutionRun

    def to_dict(self) -> dict:
        return {**self.run.summary(), "W_real": self.W.real.tolist(), "W_imag": self.W.imag.tolist(),
                "leakage": self.leakage, "distance_to_wilson": self.distance_to_wilson}


def h_norm(system: SystemSpec, radius: float = 1.0) -> float:
    """max |H| along any loop: H is a conjugate of H0."""
    return float(np.max(np.abs(np.linalg.eigvalsh(system.h0(radius)))))


def minimum_steps(system: SystemSpec, T: float, radius: float = 1.0) -> int:
    return int(np.ceil(STEPS_PER_UNIT * h_norm(system, radius) * T))


def _chunk_propagator(system: SystemSpec, loop: LoopPath, h0_eig: np.ndarray, t0: np.ndarray, dt: float,
                      T: float) -> np.ndarray:
    """Ordered product of the triple-jump substeps for the steps starting at times t0."""
    offsets, taus = [], []
    acc = 0.0
    for g in TRIPLE_JUMP:
        offsets.append((acc + g / 2) * dt)
        taus.append(g * dt)
        acc += g
    mids = (t0[:, None] + np.array(offsets)[None, :]).reshape(-1)
    taus = np.tile(np.array(taus), len(t0))
    u = system.frame_builder()(loop.position(mids / T))
    phases = np.exp(-1j * taus[:, None] * h0_eig[None, :])
    props = (u * phases[:, None, :]) @ dagger(u)
    return _ordered_product(props)


def evolve(system: SystemSpec | str, level: str, loop: LoopPath, T: float, steps: int | None = None,
           radius: float = 1.0) -> EvolutionRun:
    """Integrate i dpsi/dt = H(p(t/T)) psi from the level basis at the base point."""
    if isinstance(system, str):
        system = make_system(system)
    if loop.manifold != system.manifold:
        raise ValueError(f"{loop.manifold} loop on a {system.manifold} system")
    gap = system.min_gap(radius)
    if gap < GAP_FLOOR:
        raise ValueError("level gap closes; the adiabatic limit does not exist")
    need = minimum_steps(system, T, radius)
    steps = need if steps is None else int(steps)
    if steps < need:
        raise ValueError(f"{steps} steps is below the minimum {need} for T={T}")
    t_start = time.perf_counter()
    block = level_block(system, level)
    h0 = system.h0(radius)
    if np.max(np.abs(h0 - np.diag(np.diag(h0)))) > 0:
        raise ValueError("rest-frame Hamiltonian must be diagonal")
    h0_eig = np.real(np.diag(h0))
    dt = T / steps
    total = np.eye(len(h0), dtype=complex)
    for start in range(0, steps, CHUNK_STEPS):
        t0 = dt * np.arange(start, min(start + CHUNK_STEPS, steps))
        # project out accumulated roundoff; each substep is unitary only to ~1e-15
        total = polar_unitary(_chunk_propagator(system, loop, h0_eig, t0, dt, T) @ total)
    u0 = system.frame_builder()(loop.position(np.array(0.0)))
    psi0 = u0[:, list(block.indices)]
    psi_t = total @ psi0
    drift = float(np.max(np.abs(np.linalg.norm(psi_t, axis=0) - 1)))
    if drift > NORM_TOL:
        raise ValueError(f"norm drift {drift:.3g} exceeds {NORM_TOL}")
    energy = float(h0_eig[block.indices[0]])
    return EvolutionRun(system, block.level.label, loop, float(T), steps, radius, psi0, psi_t,
                        energy * T, drift, time.perf_counter() - t_start)


def extract_holonomy(run: EvolutionRun, segments: int | None = 1024, check_leakage: bool = True) -> OracleHolonomy:
    """W_est(i, j) = e^{i int E dt} <i(p0)|psi_j(T)>, made unitary by polar decomposition."""
    overlap = np.exp(1j * run.dynamical_phase) * (dagger(run.psi0) @ run.psiT)
    leakage = float(np.max(1 - np.sum(np.abs(overlap) ** 2, axis=0)))
    if check_leakage and leakage > MAX_LEAKAGE:
        raise ValueError(f"leakage {leakage:.3g} exceeds {MAX_LEAKAGE}; increase T")
    w = polar_unitary(overlap)
    dist = None
    if segments:
        ref = wilson_loop(run.system, run.level, run.loop, segments, check_convergence=False).W
        dist = float(np.linalg.norm(w - ref, ord=2))
    return OracleHolonomy(w, overlap, leakage, dist, run)


def sweep(system: SystemSpec | str, level: str, loop: LoopPath, t_units=T_SWEEP, radius: float = 1.0,
          segments: int = 1024) -> list[OracleHolonomy]:
    """Oracle holonomies for T = t / gap over t_units."""
    if isinstance(system, str):
        system = make_system(system)
    gap = system.min_gap(radius)
    return [extract_holonomy(evolve(system, level, loop, t / gap, radius=radius), segments) for t in t_units]


__all__ = ["EvolutionRun", "OracleHolonomy", "evolve", "extract_holonomy", "sweep", "minimum_steps"]
