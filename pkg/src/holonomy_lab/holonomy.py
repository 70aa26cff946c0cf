"""Path-ordered Wilson loops of the adiabatic connections and the SU(2) solid-angle law.

Transport convention: a state psi = sum_j U|j> c_j stays parallel when
dc = -A c, so the coefficient holonomy is W = P exp(-oint A) with later
segments on the left. The physical holonomy in the basis at the base point is
B @ W, where B = <i|U(p_0)^dag U(p_end)|j> absorbs any frame mismatch between
the two ends of a loop that closes only up to a periodic identification.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._linalg import dagger
from .gauge_field import LevelBlock, connection_builder, level_block
from .parametrization import COORD_NAMES, SystemSpec, make_system

MIN_SEGMENTS = 64
MAX_SEGMENT_STEP = 0.1
CONVERGENCE_TOL = 1e-6
UNITARITY_TOL = 1e-8
CLOSURE_TOL = 1e-8
ANTIPODAL_TOL = 1e-6

NCOORDS = {"S2": 2, "CP2": 4, "FLAG": 6}


@dataclass
class LoopPath:
    """A closed loop given by a position map t in [0, 1] -> unwrapped chart coordinates.

    Unwrapped means angles may run past their chart range (phi 0 -> 2 pi,
    gamma 0 -> 4 pi); closure holds after the periodic identification of the
    frame and is checked on the level projector.
    """
    manifold: str
    position: Callable[[np.ndarray], np.ndarray]
    spec: dict = field(default_factory=dict)

    def samples(self, n: int) -> np.ndarray:
        return self.position(np.linspace(0.0, 1.0, n + 1))

    def reversed(self) -> "LoopPath":
        spec = dict(self.spec)
        spec["reversed"] = not spec.get("reversed", False)
        return LoopPath(self.manifold, lambda t: self.position(1.0 - np.asarray(t)), spec)

    def to_dict(self) -> dict:
        return {"manifold": self.manifold, **self.spec}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _stack(*cols) -> np.ndarray:
    return np.stack(np.broadcast_arrays(*cols), axis=-1).astype(float)


def latitude(theta0: float, turns: int = 1) -> LoopPath:
    """theta = theta0, phi from 0 to 2 pi turns."""
    def pos(t):
        t = np.asarray(t, dtype=float)
        return _stack(np.full_like(t, theta0), 2 * np.pi * turns * t)
    return LoopPath("S2", pos, {"kind": "latitude", "theta0": float(theta0), "turns": turns})


def great_circle(tilt: float) -> LoopPath:
    """Great circle through the equator's node at phi = 0, tilted by `tilt` (< pi/2) about the x axis."""
    if not 0 <= tilt < np.pi / 2:
        raise ValueError("tilt must lie in [0, pi/2) so the circle avoids the poles")

    def pos_continuous(t):
        # phi runs monotonically from 0 to 2 pi since |tilt| < pi/2
        s = 2 * np.pi * np.asarray(t, dtype=float)
        phi = np.arctan2(np.sin(s) * np.cos(tilt), np.cos(s))
        phi = np.where(phi < 0, phi + 2 * np.pi, phi)
        phi = np.where(s >= 2 * np.pi - 1e-15, 2 * np.pi, phi)
        z = np.sin(s) * np.sin(tilt)
        return _stack(np.arccos(np.clip(z, -1, 1)), phi)

    return LoopPath("S2", pos_continuous, {"kind": "great-circle", "tilt": float(tilt)})


def coordinate_circle(manifold: str, base, coord: int | str, span: float | None = None) -> LoopPath:
    """Run one coordinate from its base value through span (default one frame period)."""
    base = np.asarray(base, dtype=float)
    names = COORD_NAMES[manifold]
    k = names.index(coord) if isinstance(coord, str) else int(coord)
    if span is None:
        span = {"gamma": 4 * np.pi}.get(names[k], 2 * np.pi)

    def pos(t):
        t = np.asarray(t, dtype=float)
        x = np.broadcast_to(base, t.shape + base.shape).copy()
        x[..., k] = base[k] + span * t
        return x
    return LoopPath(manifold, pos, {"kind": "coordinate-circle", "base": base.tolist(), "coord": names[k],
                                    "span": float(span)})


def ellipse(manifold: str, base, axes: tuple[int | str, int | str], radii: tuple[float, float]) -> LoopPath:
    """Coordinate ellipse in the plane of two chart coordinates, starting and ending at base."""
    base = np.asarray(base, dtype=float)
    names = COORD_NAMES[manifold]
    i, j = (names.index(a) if isinstance(a, str) else int(a) for a in axes)

    def pos(t):
        s = 2 * np.pi * np.asarray(t, dtype=float)
        x = np.broadcast_to(base, s.shape + base.shape).copy()
        x[..., i] = base[i] + radii[0] * (np.cos(s) - 1)
        x[..., j] = base[j] + radii[1] * np.sin(s)
        return x
    return LoopPath(manifold, pos, {"kind": "ellipse", "base": base.tolist(), "axes": [names[i], names[j]],
                                    "radii": [float(r) for r in radii]})


def constant_loop(manifold: str, point) -> LoopPath:
    point = np.asarray(point, dtype=float)

    def pos(t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(point, t.shape + point.shape).copy()
    return LoopPath(manifold, pos, {"kind": "point", "point": point.tolist()})


def polyline(manifold: str, samples) -> LoopPath:
    """Piecewise-linear loop through explicit unwrapped samples."""
    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != NCOORDS[manifold] or len(pts) < 2:
        raise ValueError("samples must be a list of at least two coordinate tuples")
    knots = np.linspace(0.0, 1.0, len(pts))

    def pos(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.interp(t, knots, pts[:, k]) for k in range(pts.shape[1])], axis=-1)
    return LoopPath(manifold, pos, {"kind": "samples", "samples": pts.tolist()})


def loop_from_dict(d: dict) -> LoopPath:
    manifold = d.get("manifold", "S2")
    kind = d.get("kind", "samples" if "samples" in d else None)
    if kind == "latitude":
        loop = latitude(d["theta0"], d.get("turns", 1))
    elif kind == "great-circle":
        loop = great_circle(d["tilt"])
    elif kind == "coordinate-circle":
        loop = coordinate_circle(manifold, d["base"], d["coord"], d.get("span"))
    elif kind == "ellipse":
        loop = ellipse(manifold, d["base"], tuple(d["axes"]), tuple(d["radii"]))
    elif kind == "point":
        loop = constant_loop(manifold, d["point"])
    elif kind == "samples":
        loop = polyline(manifold, d["samples"])
    else:
        raise ValueError(f"unknown loop kind {kind!r}")
    return loop.reversed() if d.get("reversed") else loop


def load_loop(path) -> LoopPath:
    with open(path, encoding="utf-8") as fh:
        return loop_from_dict(json.load(fh))


@dataclass
class Holonomy:
    W: np.ndarray
    transport: np.ndarray
    closure: np.ndarray
    level: str
    loop: dict
    segments: int
    convergence: float
    abelian_phase: float | None = None
    order: int = 2

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.W))

    def unitarity_residual(self) -> float:
        return float(np.max(np.abs(self.W @ dagger(self.W) - np.eye(len(self.W)))))

    @property
    def phase(self) -> float | None:
        """arg W in (-pi, pi] for a one-dimensional level."""
        if self.W.shape != (1, 1):
            return None
        return float(np.angle(self.W[0, 0]))

    def to_dict(self) -> dict:
        return {
            "level": self.level, "loop": self.loop, "segments": self.segments, "order": self.order,
            "W_real": self.W.real.tolist(), "W_imag": self.W.imag.tolist(),
            "trace_real": self.trace.real, "trace_imag": self.trace.imag,
            "phase": self.phase, "abelian_phase": self.abelian_phase,
            "convergence": self.convergence, "unitarity_residual": self.unitarity_residual(),
        }


def _expm_antihermitian(a: np.ndarray) -> np.ndarray:
    """exp(a) for anti-Hermitian a, batched, via the Hermitian matrix i a."""
    w, v = np.linalg.eigh(1j * a)
    return (v * np.exp(-1j * w)[..., None, :]) @ dagger(v)


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """mats[N-1] @ ... @ mats[0] by pairwise reduction."""
    while len(mats) > 1:
        if len(mats) % 2:
            mats = np.concatenate([mats, np.eye(mats.shape[-1])[None]], axis=0)
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


def transport(a_builder, loop: LoopPath, segments: int) -> tuple[np.ndarray, complex]:
    """P exp(-oint A) with midpoint exponentials, and -oint A for the trace part."""
    t = np.linspace(0.0, 1.0, segments + 1)
    x = loop.position(t)
    dx = np.diff(x, axis=0)
    a = a_builder(loop.position((t[:-1] + t[1:]) / 2))
    gen = -np.einsum("nm,nmij->nij", dx, a)
    step = float(np.max(np.linalg.norm(gen, ord=2, axis=(-2, -1)))) if len(gen) else 0.0
    if step > MAX_SEGMENT_STEP:
        raise ValueError(f"mesh too coarse: per-segment |A dx| = {step:.3g} > {MAX_SEGMENT_STEP}")
    line = complex(np.sum(np.trace(gen, axis1=-2, axis2=-1)))
    return _ordered_product(_expm_antihermitian(gen)), line


def closure_matrix(system: SystemSpec, block: LevelBlock, loop: LoopPath) -> np.ndarray:
    """<i|U(p_0)^dag U(p_end)|j>; unitary exactly when the loop closes on the level."""
    ends = loop.position(np.array([0.0, 1.0]))
    u = system.frame_builder()(ends)
    idx = list(block.indices)
    b = dagger(u[0][:, idx]) @ u[1][:, idx]
    resid = float(np.max(np.abs(b @ dagger(b) - np.eye(len(idx)))))
    if resid > CLOSURE_TOL:
        raise ValueError(f"loop does not close on the level subspace (residual {resid:.3g})")
    return b


def wilson_loop(system: SystemSpec | str, level: str, loop: LoopPath, segments: int = 256,
                source: str = "closed-form", check_convergence: bool = True) -> Holonomy:
    if isinstance(system, str):
        system = make_system(system)
    if segments < MIN_SEGMENTS:
        raise ValueError(f"need at least {MIN_SEGMENTS} segments")
    if loop.manifold != system.manifold:
        raise ValueError(f"{loop.manifold} loop on a {system.manifold} system")
    block = level_block(system, level)
    a_builder = connection_builder(block, source)
    w, line = transport(a_builder, loop, segments)
    delta = 0.0
    if check_convergence:
        w2, _ = transport(a_builder, loop, 2 * segments)
        delta = float(np.linalg.norm(w2 - w, ord=2))
    b = closure_matrix(system, block, loop)
    phys = b @ w
    abelian = None
    if block.dim == 1:
        abelian = float(np.imag(line) + np.angle(b[0, 0]))
    return Holonomy(phys, w, b, block.level.label, loop.to_dict(), segments, delta, abelian)


def converged(h: Holonomy) -> bool:
    return h.convergence < CONVERGENCE_TOL


def _unit_vectors(angles: np.ndarray) -> np.ndarray:
    theta, phi = angles[..., 0], angles[..., 1]
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


def solid_angle(loop: LoopPath, samples: int = 16384) -> float:
    """Oriented area enclosed by an S2 loop: signed triangles fanned from the north pole."""
    if loop.manifold != "S2":
        raise ValueError("solid angle needs a loop on S2")
    v = _unit_vectors(loop.samples(samples))
    pole = np.array([0.0, 0.0, 1.0])
    if np.any(1 + v @ pole < ANTIPODAL_TOL):
        raise ValueError("loop passes through the south pole; the fan from the north pole is ill-conditioned")
    b, c = v[:-1], v[1:]
    num = np.einsum("i,ni->n", pole, np.cross(b, c))
    den = 1 + b @ pole + c @ pole + np.einsum("ni,ni->n", b, c)
    return float(np.sum(2 * np.arctan2(num, den)))


def wrap_phase(x: float) -> float:
    """Map to (-pi, pi]."""
    y = np.angle(np.exp(1j * x))
    return float(np.pi if np.isclose(y, -np.pi) else y)


def berry_phase_su2(j, m, loop: LoopPath, segments: int = 256) -> float:
    """arg of the U(1) holonomy of spin-j level m, in (-pi, pi]."""
    h = wilson_loop(make_system("su2-linear", j=str(j)), str(m), loop, segments)
    return wrap_phase(np.angle(h.W[0, 0]))
