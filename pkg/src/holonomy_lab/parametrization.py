"""Parameter manifolds (S^2, CP^2, flag F_2), group-element frames and Hamiltonians.

Coordinate orders:
    S2   (theta, phi)
    CP2  (beta, alpha, gamma, theta)
    FLAG (beta, alpha, gamma, theta, a, b)
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._linalg import HermitianExp, dagger
from .lie_algebra import GeneratorSet, SQRT3, adjoint_cartan_basis, gell_mann, spin_operators

PI = np.pi
TWO_PI = 2 * np.pi

# (name, lower, upper, upper_inclusive)
ANGLE_RANGES = {
    "S2": [("theta", 0.0, PI, True), ("phi", 0.0, TWO_PI, False)],
    "CP2": [("beta", 0.0, PI, True), ("alpha", 0.0, TWO_PI, False),
            ("gamma", 0.0, 2 * TWO_PI, False), ("theta", 0.0, PI, True)],
}
ANGLE_RANGES["FLAG"] = ANGLE_RANGES["CP2"] + [("a", 0.0, TWO_PI, False), ("b", 0.0, PI, True)]

COORD_NAMES = {k: [r[0] for r in v] for k, v in ANGLE_RANGES.items()}


@dataclass(frozen=True)
class ParamPoint:
    manifold: str
    angles: tuple[float, ...]
    radius: float = 1.0

    def __post_init__(self):
        if self.manifold not in ANGLE_RANGES:
            raise ValueError(f"unknown manifold {self.manifold!r}")
        ranges = ANGLE_RANGES[self.manifold]
        angles = tuple(float(a) for a in self.angles)
        if len(angles) != len(ranges):
            raise ValueError(f"{self.manifold} needs {len(ranges)} angles, got {len(angles)}")
        for value, (name, lo, hi, closed) in zip(angles, ranges):
            if value < lo or value > hi or (value == hi and not closed):
                bracket = "]" if closed else ")"
                raise ValueError(f"{name}={value} outside [{lo}, {hi}{bracket}")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def coords(self) -> np.ndarray:
        return np.array(self.angles)

    def to_dict(self) -> dict:
        return {"manifold": self.manifold, "angles": list(self.angles), "radius": self.radius}

    @classmethod
    def from_dict(cls, d: dict) -> "ParamPoint":
        return cls(d["manifold"], tuple(d["angles"]), d.get("radius", 1.0))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "ParamPoint":
        return cls.from_dict(json.loads(s))


def random_points(manifold: str, n: int, rng: np.random.Generator, margin: float = 0.05) -> np.ndarray:
    """Uniform random coordinates inside the open chart, kept `margin` away from its edges."""
    ranges = ANGLE_RANGES[manifold]
    lo = np.array([r[1] for r in ranges]) + margin
    hi = np.array([r[2] for r in ranges]) - margin
    return rng.uniform(lo, hi, size=(n, len(ranges)))


class FrameBuilder:
    """Product of one-parameter exponentials exp(i * scale * x_m * G), in list order.

    Works on coordinate arrays of shape (..., ncoords) and does no range checking,
    so finite-difference stencils may step just outside a chart.
    """

    def __init__(self, factors: list[tuple[np.ndarray, int, float]], ncoords: int, rep: GeneratorSet):
        self.exps = [(HermitianExp(g, s), m) for g, m, s in factors]
        self.ncoords = ncoords
        self.rep = rep
        self.dim = rep.dim

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.ncoords:
            raise ValueError(f"expected {self.ncoords} coordinates, got {x.shape[-1]}")
        u = None
        for e, m in self.exps:
            col = x[..., m]
            # a coordinate held fixed across the batch needs a single exponential
            f = e(col.flat[0]) if col.size > 1 and np.all(col == col.flat[0]) else e(col)
            u = f if u is None else u @ f
        return np.broadcast_to(u, x.shape[:-1] + u.shape[-2:]) if u.ndim == 2 else u

    def derivative(self, x, m: int) -> np.ndarray:
        """Exact partial derivative of the frame along coordinate m."""
        x = np.asarray(x, dtype=float)
        u = None
        for e, k in self.exps:
            f = e.derivative(x[..., k]) if k == m else e(x[..., k])
            u = f if u is None else u @ f
        return u


@lru_cache(maxsize=None)
def su2_frame_builder(j) -> FrameBuilder:
    """U(theta, phi) = exp(-i Jz phi) exp(-i Jy theta)."""
    rep = spin_operators(j)
    jx, jy, jz = rep.generators
    return FrameBuilder([(jz, 1, -1.0), (jy, 0, -1.0)], 2, rep)


@lru_cache(maxsize=None)
def su3_frame_builder(rep_label: str = "su3-defining") -> FrameBuilder:
    """exp(i alpha T3) exp(i beta T2) exp(i gamma T3) exp(i theta T5).

    T = lambda/2 in the defining rep. In the adjoint rep T = Lambda', which is
    the adjoint image of the same group element since Lambda spans lambda/2.
    """
    if rep_label == "su3-defining":
        rep, scale = gell_mann(), 0.5
    elif rep_label == "su3-adjoint":
        rep, scale = adjoint_cartan_basis(), 1.0
    else:
        raise ValueError(f"unsupported representation {rep_label!r}")
    g = rep.generators
    return FrameBuilder([(g[2], 1, scale), (g[1], 0, scale), (g[2], 2, scale), (g[4], 3, scale)], 4, rep)


@lru_cache(maxsize=None)
def flag_frame_builder() -> FrameBuilder:
    """U_bar(beta, alpha, gamma, theta) exp(i a lambda3/2) exp(i b lambda2/2)."""
    rep = gell_mann()
    g = rep.generators
    return FrameBuilder([(g[2], 1, 0.5), (g[1], 0, 0.5), (g[2], 2, 0.5), (g[4], 3, 0.5),
                         (g[2], 4, 0.5), (g[1], 5, 0.5)], 6, rep)


@dataclass(frozen=True)
class Frame:
    U: np.ndarray
    rep: GeneratorSet

    def unitarity_residual(self) -> float:
        return float(np.max(np.abs(dagger(self.U) @ self.U - np.eye(self.U.shape[-1]))))


def su2_frame(point: ParamPoint, rep: GeneratorSet) -> Frame:
    if point.manifold != "S2":
        raise ValueError("su2_frame needs an S2 point")
    if not rep.label.startswith("su2-spin-"):
        raise ValueError(f"expected an su2 spin representation, got {rep.label}")
    b = su2_frame_builder(Fraction(rep.label.removeprefix("su2-spin-")))
    if b.dim != rep.dim:
        raise ValueError("representation dimension mismatch")
    return Frame(b(point.coords), rep)


def su3_frame(point: ParamPoint, rep: GeneratorSet) -> Frame:
    if point.manifold != "CP2":
        raise ValueError("su3_frame needs a CP2 point")
    if rep.label not in ("su3-defining", "su3-adjoint"):
        raise ValueError(f"unsupported representation {rep.label}")
    return Frame(su3_frame_builder(rep.label)(point.coords), rep)


def flag_frame(point: ParamPoint) -> Frame:
    if point.manifold != "FLAG":
        raise ValueError("flag_frame needs a FLAG point")
    return Frame(flag_frame_builder()(point.coords), gell_mann())


@dataclass(frozen=True)
class Level:
    label: str
    eigenvalue: float  # at unit radius
    indices: tuple[int, ...]

    @property
    def degeneracy(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class SystemSpec:
    """A rest-frame Hamiltonian H0 on one parameter manifold, with its levels.

    `h0_unit` is H0 at unit radius; H0 scales linearly with radius except for
    su2-quadratic where it scales with radius**2.
    """
    kind: str
    manifold: str
    h0_unit: np.ndarray
    levels: tuple[Level, ...]
    j: Fraction | None = None
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.h0_unit.shape[0]

    def level(self, label: str) -> Level:
        label = LEVEL_ALIASES.get(label, label)
        for lv in self.levels:
            if lv.label == label:
                return lv
        raise KeyError(f"{self.kind} has no level {label!r}; choose from {[lv.label for lv in self.levels]}")

    def h0(self, radius: float = 1.0) -> np.ndarray:
        power = 2 if self.kind == "su2-quadratic" else 1
        return self.h0_unit * radius ** power

    def frame_builder(self) -> FrameBuilder:
        if self.manifold == "S2":
            return su2_frame_builder(self.j)
        if self.manifold == "FLAG":
            return flag_frame_builder()
        return su3_frame_builder("su3-adjoint" if self.kind == "su3-adjoint" else "su3-defining")

    def min_gap(self, radius: float = 1.0) -> float:
        e = sorted({round(lv.eigenvalue, 12) for lv in self.levels})
        scale = radius ** 2 if self.kind == "su2-quadratic" else radius
        return float(np.min(np.diff(e))) * scale if len(e) > 1 else np.inf

    def __hash__(self):
        return hash((self.kind, self.j, tuple(sorted(self.params.items()))))

    def __eq__(self, other):
        return isinstance(other, SystemSpec) and hash(self) == hash(other)


LEVEL_ALIASES = {"minus": "-", "zero": "0", "plus": "+", "E_1": "E1", "E_3": "E3"}


def _levels_from_diag(diag: np.ndarray, labels_for) -> tuple[Level, ...]:
    groups: dict[float, list[int]] = {}
    for i, e in enumerate(diag):
        groups.setdefault(round(float(e), 12), []).append(i)
    return tuple(Level(labels_for(e, idx), e, tuple(idx)) for e, idx in groups.items())


def su2_linear(j) -> SystemSpec:
    """H0 = mu B Jz (mu = 1); one level per m."""
    s = spin_operators(j)
    jf = Fraction(s.label.removeprefix("su2-spin-"))
    m = np.real(np.diag(s[2]))
    levels = tuple(Level(str(Fraction(mi).limit_denominator(2)), float(mi), (i,)) for i, mi in enumerate(m))
    return SystemSpec("su2-linear", "S2", s[2].copy(), levels, j=jf)


def su2_quadratic(j) -> SystemSpec:
    """H0 = (mu B Jz)^2; levels are the pairs {|m>, |-m>} labelled by |m|, |m> first."""
    s = spin_operators(j)
    jf = Fraction(s.label.removeprefix("su2-spin-"))
    dim = s.dim
    m = np.real(np.diag(s[2]))
    levels = []
    for i in range(dim):
        if m[i] < 0:
            continue
        partner = dim - 1 - i
        idx = (i,) if partner == i else (i, partner)
        levels.append(Level(str(Fraction(m[i]).limit_denominator(2)), float(m[i] ** 2), idx))
    return SystemSpec("su2-quadratic", "S2", s[2] @ s[2], tuple(levels), j=jf)


def su3_degenerate() -> SystemSpec:
    """H0 = R lambda_8 = diag(E1, E1, E3) up to a multiple of the identity."""
    lam8 = gell_mann()[7]
    levels = (Level("E1", 1 / SQRT3, (0, 1)), Level("E3", -2 / SQRT3, (2,)))
    return SystemSpec("su3-degenerate", "CP2", lam8.copy(), levels)


def su3_nondegenerate(r3: float = 0.3, r8: float = 1.0) -> SystemSpec:
    """H0 = R3 lambda_3 + R8 lambda_8 on the flag manifold; levels "1", "2", "3"."""
    lam = gell_mann()
    h0 = r3 * lam[2] + r8 * lam[7]
    diag = np.real(np.diag(h0))
    if len({round(d, 12) for d in diag}) != 3:
        raise ValueError("R3, R8 must give three distinct eigenvalues")
    levels = tuple(Level(str(i + 1), float(diag[i]), (i,)) for i in range(3))
    return SystemSpec("su3-nondegenerate", "FLAG", h0, levels, params={"r3": r3, "r8": r8})


def su3_adjoint() -> SystemSpec:
    """Eight-level system H0 = R Lambda'_8 with levels "-", "0", "+"."""
    lam8p = adjoint_cartan_basis()[7]
    diag = np.real(np.diag(lam8p))
    names = {round(-SQRT3 / 2, 12): "-", 0.0: "0", round(SQRT3 / 2, 12): "+"}
    levels = _levels_from_diag(diag, lambda e, idx: names[round(e, 12)])
    return SystemSpec("su3-adjoint", "CP2", np.diag(diag).astype(complex), levels)


SYSTEM_ALIASES = {
    "su2-linear": "su2-linear", "su2": "su2-linear",
    "su2-quadratic": "su2-quadratic", "su2-quad": "su2-quadratic",
    "su3-degenerate": "su3-degenerate", "su3-deg": "su3-degenerate",
    "su3-nondegenerate": "su3-nondegenerate", "su3-flag": "su3-nondegenerate", "flag": "su3-nondegenerate",
    "su3-adjoint": "su3-adjoint", "su3-adj": "su3-adjoint",
}


def make_system(name: str, j=None, **params) -> SystemSpec:
    kind = SYSTEM_ALIASES.get(name)
    if kind is None:
        raise ValueError(f"unknown system {name!r}")
    if kind == "su2-linear":
        return su2_linear(j if j is not None else Fraction(1, 2))
    if kind == "su2-quadratic":
        return su2_quadratic(j if j is not None else Fraction(3, 2))
    if kind == "su3-degenerate":
        return su3_degenerate()
    if kind == "su3-nondegenerate":
        return su3_nondegenerate(**params)
    return su3_adjoint()


def hamiltonian_at(spec: SystemSpec, x, radius: float = 1.0) -> np.ndarray:
    """U H0 U^dag on raw coordinate arrays (..., ncoords)."""
    u = spec.frame_builder()(x)
    return u @ spec.h0(radius) @ dagger(u)


def hamiltonian(spec: SystemSpec, point: ParamPoint) -> np.ndarray:
    if point.manifold != spec.manifold:
        raise ValueError(f"{spec.kind} lives on {spec.manifold}, got a {point.manifold} point")
    return hamiltonian_at(spec, point.coords, point.radius)


def embedding_closed(x, radius: float = 1.0) -> np.ndarray:
    """xi^1..xi^8 of a CP2 point (closed forms), shape (..., 8).

    xi^4 carries the sign that agrees with (1/2) Tr[H lambda_4]; see errata.
    """
    x = np.asarray(x, dtype=float)
    beta, alpha, gamma, theta = (x[..., k] for k in range(4))
    c = SQRT3 / 2 * radius
    s2 = np.sin(theta / 2) ** 2
    st = np.sin(theta)
    return np.stack([
        c * np.sin(beta) * np.cos(alpha) * s2,
        -c * np.sin(beta) * np.sin(alpha) * s2,
        -c * np.cos(beta) * s2,
        -c * st * np.cos(beta / 2) * np.cos((alpha + gamma) / 2),
        c * st * np.cos(beta / 2) * np.sin((alpha + gamma) / 2),
        c * st * np.sin(beta / 2) * np.cos((alpha - gamma) / 2),
        c * st * np.sin(beta / 2) * np.sin((alpha - gamma) / 2),
        radius * (3 * np.cos(theta) + 1) / 4,
    ], axis=-1)


def embedding_trace(x, radius: float = 1.0) -> np.ndarray:
    """xi^i = (1/2) Tr[H lambda_i] with H = U (R lambda_8) U^dag."""
    h = hamiltonian_at(su3_degenerate(), x, radius)
    return 0.5 * np.real(np.einsum("...ab,iba->...i", h, gell_mann().generators))


def embedding_coordinates(point: ParamPoint) -> np.ndarray:
    if point.manifold != "CP2":
        raise ValueError("embedding coordinates are defined on CP2")
    return embedding_closed(point.coords, point.radius)


def su3_full_element(alpha, beta, gamma, theta, a, b, c, phi) -> np.ndarray:
    """The eight-angle SU(3) element including the factors that stabilize H0."""
    lam = gell_mann().generators
    out = np.eye(3, dtype=complex)
    for g, t in ((2, alpha), (1, beta), (2, gamma), (4, theta), (2, a), (1, b), (2, c), (7, phi)):
        out = out @ HermitianExp(lam[g], 0.5)(t)
    return out
