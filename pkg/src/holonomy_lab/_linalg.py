"""Small dense linear-algebra helpers shared by the frame builders and integrators."""
from __future__ import annotations

import numpy as np


class HermitianExp:
    """exp(i * t * scale * G) for a fixed Hermitian G, batched over t.

    G is decomposed once; each call only exponentiates eigenvalues.
    """

    def __init__(self, generator: np.ndarray, scale: float = 1.0):
        w, q = np.linalg.eigh(generator)
        self.w = w * scale
        self.q = q
        self.qh = q.conj().T

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        phases = np.exp(1j * t[..., None] * self.w)
        return (self.q * phases[..., None, :]) @ self.qh

    def derivative(self, t) -> np.ndarray:
        """d/dt of exp(i t scale G)."""
        t = np.asarray(t, dtype=float)
        phases = 1j * self.w * np.exp(1j * t[..., None] * self.w)
        return (self.q * phases[..., None, :]) @ self.qh


def expm_hermitian(h: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i h dt) for a stack of Hermitian matrices via eigh."""
    w, q = np.linalg.eigh(h)
    return (q * np.exp(-1j * dt * w)[..., None, :]) @ dagger(q)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(a, -1, -2).conj()


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def polar_unitary(a: np.ndarray) -> np.ndarray:
    """Closest unitary to a (unitary factor of the polar decomposition)."""
    u, _, vh = np.linalg.svd(a)
    return u @ vh
