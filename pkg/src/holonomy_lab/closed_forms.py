"""Closed-form adiabatic connections and curvatures, one table per system.

A has shape (..., ncoords, d, d); F has shape (..., ncoords, ncoords, d, d)
and is stored fully antisymmetric. Coordinates follow parametrization.py.
Where a printed component disagrees with the frame-derived value, the table
holds the corrected expression and errata.py keeps the printed one.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

SQ2 = np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _m(c, mat):
    """Broadcast a scalar coefficient array against a constant matrix."""
    return np.asarray(c)[..., None, None] * mat


def _antisymmetrize(upper: dict[tuple[int, int], np.ndarray], shape, n: int, d: int) -> np.ndarray:
    # built component-major so each assignment is a contiguous block, returned as a view
    f = np.zeros((n, n, d, d) + shape, dtype=complex)
    for (a, b), v in upper.items():
        v = np.moveaxis(np.broadcast_to(v, shape + (d, d)), (-2, -1), (0, 1))
        f[a, b] = v
        f[b, a] = -v
    return np.moveaxis(f, (0, 1, 2, 3), (-4, -3, -2, -1))


def _split(x, n):
    x = np.asarray(x, dtype=float)
    return tuple(x[..., k] for k in range(n))


def _entries(shape, d, entries: dict[tuple[int, int], np.ndarray]) -> np.ndarray:
    out = np.zeros((d, d) + shape, dtype=complex)
    for (r, c), v in entries.items():
        out[r, c] = v
    return np.moveaxis(out, (0, 1), (-2, -1))


# --------------------------------------------------------------------- SU(2)

def su2_linear_A(x, m: float) -> np.ndarray:
    theta, phi = _split(x, 2)
    a = np.zeros(theta.shape + (2, 1, 1), dtype=complex)
    a[..., 1, 0, 0] = -1j * m * np.cos(theta)
    return a


def su2_linear_F(x, m: float) -> np.ndarray:
    theta, phi = _split(x, 2)
    return _antisymmetrize({(0, 1): (1j * m * np.sin(theta))[..., None, None]}, theta.shape, 2, 1)


def su2_quadratic_A(x, j: Fraction, m: float) -> np.ndarray:
    """Pair {|m>, |-m>}; non-Abelian for m = 1/2, diagonal otherwise."""
    theta, phi = _split(x, 2)
    if m == 0:
        return np.zeros(theta.shape + (2, 1, 1), dtype=complex)
    a = np.zeros(theta.shape + (2, 2, 2), dtype=complex)
    if m == 0.5:
        k = float(j) + 0.5
        a[..., 0, :, :] = -0.5j * k * SY
        a[..., 1, :, :] = 0.5j * (_m(-np.cos(theta), SZ) + _m(k * np.sin(theta), SX))
    else:
        a[..., 1, :, :] = _m(-1j * m * np.cos(theta), SZ)
    return a


def su2_quadratic_F(x, j: Fraction, m: float) -> np.ndarray:
    theta, phi = _split(x, 2)
    if m == 0:
        return np.zeros(theta.shape + (2, 2, 1, 1), dtype=complex)
    if m == 0.5:
        k = float(j) + 0.5
        f01 = _m(-0.5j * (k ** 2 - 1) * np.sin(theta), SZ)
    else:
        f01 = _m(1j * m * np.sin(theta), SZ)
    return _antisymmetrize({(0, 1): f01}, theta.shape, 2, 2)


# ------------------------------------------------------- SU(3), degenerate

def su3_E1_A(x) -> np.ndarray:
    beta, alpha, gamma, theta = _split(x, 4)
    h = theta / 2
    a = np.zeros(beta.shape + (4, 2, 2), dtype=complex)
    # sigma_y coefficient: the two cosines add (errata: printed with a minus)
    a[..., 0, :, :] = (_m(0.25j * (-np.sin(h + gamma) + np.sin(h - gamma)), SX)
                       + _m(0.25j * (np.cos(h - gamma) + np.cos(h + gamma)), SY))
    a[..., 1, :, :] = (0.25j * (_m(-np.sin(h) ** 2 * np.cos(beta), I2) + _m((np.cos(h) ** 2 + 1) * np.cos(beta), SZ))
                       + _m(0.125j * (np.sin(beta - h + gamma) + np.sin(beta - h - gamma)
                                      + np.sin(beta + h + gamma) + np.sin(beta + h - gamma)), SX)
                       + _m(0.125j * (-np.cos(beta - h + gamma) + np.cos(beta - h - gamma)
                                      - np.cos(beta + h + gamma) + np.cos(beta + h - gamma)), SY))
    a[..., 2, :, :] = 0.25j * (_m(-np.sin(h) ** 2, I2) + _m(1 + np.cos(h) ** 2, SZ))
    return a


def su3_E3_A(x) -> np.ndarray:
    beta, alpha, gamma, theta = _split(x, 4)
    s2 = np.sin(theta / 2) ** 2
    a = np.zeros(beta.shape + (4, 1, 1), dtype=complex)
    a[..., 1, 0, 0] = 0.5j * np.cos(beta) * s2
    a[..., 2, 0, 0] = 0.5j * s2
    return a


def su3_E1_F(x) -> np.ndarray:
    beta, alpha, gamma, theta = _split(x, 4)
    h = theta / 2
    s2 = np.sin(h) ** 2
    cg_x_sg_y = _m(np.cos(gamma), SX) + _m(np.sin(gamma), SY)
    upper = {
        (0, 1): 0.25j * (_m(np.sin(beta) * s2, I2 - SZ) + _m(np.cos(beta) * np.cos(h) * s2, 1) * cg_x_sg_y),
        (0, 2): 0.25j * _m(s2 * np.cos(h), 1) * cg_x_sg_y,
        (0, 3): 0.25j * _m(np.sin(h), 1) * (_m(np.cos(gamma), SY) - _m(np.sin(gamma), SX)),
        (1, 2): 0.25j * _m(np.sin(beta) * s2 * np.cos(h), 1) * (_m(-np.cos(gamma), SY) + _m(np.sin(gamma), SX)),
        (1, 3): 0.25j * (_m(0.5 * np.cos(beta) * np.sin(theta), I2 + SZ)
                         + _m(np.sin(beta) * np.sin(h), 1) * cg_x_sg_y),
        (2, 3): _m(0.125j * np.sin(theta), I2 + SZ),
    }
    return _antisymmetrize(upper, beta.shape, 4, 2)


def su3_E3_F(x) -> np.ndarray:
    beta, alpha, gamma, theta = _split(x, 4)
    upper = {
        (0, 1): (-0.5j * np.sin(beta) * np.sin(theta / 2) ** 2)[..., None, None],
        (1, 3): (-0.25j * np.cos(beta) * np.sin(theta))[..., None, None],
        (2, 3): (-0.25j * np.sin(theta))[..., None, None],
    }
    return _antisymmetrize(upper, beta.shape, 4, 1)


# --------------------------------------------------------- flag manifold

def _pad_flag(a_cp2: np.ndarray, rank: int) -> np.ndarray:
    shape = a_cp2.shape
    if rank == 1:
        out = np.zeros(shape[:-3] + (6,) + shape[-2:], dtype=complex)
        out[..., :4, :, :] = a_cp2
    else:
        out = np.zeros(shape[:-4] + (6, 6) + shape[-2:], dtype=complex)
        out[..., :4, :4, :, :] = a_cp2
    return out


def flag_level3_A(x) -> np.ndarray:
    return _pad_flag(su3_E3_A(np.asarray(x)[..., :4]), 1)


def flag_level3_F(x) -> np.ndarray:
    return _pad_flag(su3_E3_F(np.asarray(x)[..., :4]), 2)


# --------------------------------------------------------------- adjoint

def adjoint_minus_A(x) -> np.ndarray:
    beta, alpha, gamma, theta = _split(x, 4)
    h = theta / 2
    sh = beta.shape
    eg = np.exp(1j * gamma)
    a = np.zeros(sh + (4, 2, 2), dtype=complex)
    a[..., 0, :, :] = _entries(sh, 2, {
        (0, 1): -0.25 * (np.exp(1j * (h + gamma)) + np.exp(1j * (-h + gamma))),
        (1, 0): 0.25 * (np.exp(-1j * (h + gamma)) + np.exp(1j * (h - gamma))),
    })
    a[..., 1, :, :] = _entries(sh, 2, {
        (0, 0): -0.5j * np.cos(beta) * np.cos(theta),
        (0, 1): 0.5j * np.sin(beta) * np.cos(h) * eg,
        (1, 0): 0.5j * np.sin(beta) * np.cos(h) * np.conj(eg),
        (1, 1): 0.25j * np.cos(beta) * (3 - np.cos(theta)),
    })
    a[..., 2, :, :] = _entries(sh, 2, {
        (0, 0): -0.5j * np.cos(theta),
        (1, 1): 0.25j * (3 - np.cos(theta)),
    })
    return a


def adjoint_plus_A(x) -> np.ndarray:
    return np.conj(adjoint_minus_A(x))


def adjoint_zero_A(x) -> np.ndarray:
    beta, alpha, gamma, theta = _split(x, 4)
    h = theta / 2
    sh = beta.shape
    eg = np.exp(1j * gamma)
    c1 = -SQ2 / 2 * 1j * np.cos(h)
    c2 = SQ2 / 2 * np.sin(beta) * np.cos(h)
    d2 = 0.25j * np.cos(beta) * (3 + np.cos(theta))
    d3 = 0.25j * (3 + np.cos(theta))
    a = np.zeros(sh + (4, 4, 4), dtype=complex)
    a[..., 0, :, :] = _entries(sh, 4, {
        (0, 1): c1 * eg, (1, 0): c1 * np.conj(eg), (1, 2): c1 * eg, (2, 1): c1 * np.conj(eg),
    })
    a[..., 1, :, :] = _entries(sh, 4, {
        (0, 0): -d2, (0, 1): -c2 * eg, (1, 0): c2 * np.conj(eg),
        (1, 2): -c2 * eg, (2, 1): c2 * np.conj(eg), (2, 2): d2,
    })
    a[..., 2, :, :] = _entries(sh, 4, {(0, 0): -d3, (2, 2): d3})
    return a


def adjoint_minus_F(x) -> np.ndarray:
    beta, alpha, gamma, theta = _split(x, 4)
    h = theta / 2
    sh = beta.shape
    s2 = np.sin(h) ** 2
    eg = np.exp(1j * gamma)
    off12 = 0.25j * np.cos(beta) * np.cos(h) * s2
    upper = {
        (0, 1): _entries(sh, 2, {
            (0, 0): -0.5j * np.sin(beta) * s2, (0, 1): off12 * eg,
            (1, 0): off12 * np.conj(eg), (1, 1): -1j * np.sin(beta) * s2,
        }),
        (0, 2): _entries(sh, 2, {
            (0, 1): 0.125j * s2 * (np.exp(1j * (h + gamma)) + np.exp(1j * (-h + gamma))),
            (1, 0): 0.125j * s2 * (np.exp(-1j * (h + gamma)) + np.exp(1j * (h - gamma))),
        }),
        (0, 3): _entries(sh, 2, {
            (0, 1): -0.25 * np.sin(h) * eg, (1, 0): 0.25 * np.sin(h) * np.conj(eg),
        }),
        (1, 2): _entries(sh, 2, {
            (0, 1): 0.25 * np.sin(beta) * np.cos(h) * s2 * eg,
            (1, 0): -0.25 * np.sin(beta) * np.cos(h) * s2 * np.conj(eg),
        }),
        (1, 3): _entries(sh, 2, {
            (0, 0): -0.5j * np.cos(beta) * np.sin(theta),
            (0, 1): 0.25j * np.sin(beta) * np.sin(h) * eg,
            (1, 0): 0.25j * np.sin(beta) * np.sin(h) * np.conj(eg),
            (1, 1): -0.25j * np.cos(beta) * np.sin(theta),
        }),
        (2, 3): _entries(sh, 2, {
            (0, 0): -0.5j * np.sin(theta), (1, 1): -0.25j * np.sin(theta),
        }),
    }
    return _antisymmetrize(upper, sh, 4, 2)


def adjoint_plus_F(x) -> np.ndarray:
    return np.conj(adjoint_minus_F(x))


def adjoint_zero_F(x) -> np.ndarray:
    beta, alpha, gamma, theta = _split(x, 4)
    h = theta / 2
    sh = beta.shape
    s2 = np.sin(h) ** 2
    eg = np.exp(1j * gamma)
    egc = np.conj(eg)

    def tri(diag0, up, down, diag2):
        """Spin-1 pattern: (0,1)=(1,2)=up*e^{i gamma}, (1,0)=(2,1)=down*e^{-i gamma}."""
        return _entries(sh, 4, {(0, 0): diag0, (0, 1): up * eg, (1, 0): down * egc,
                                (1, 2): up * eg, (2, 1): down * egc, (2, 2): diag2})

    k12 = SQ2 / 4 * np.cos(beta) * np.cos(h) * s2
    k13 = SQ2 / 4 * np.cos(h) * s2
    k14 = SQ2 / 4 * 1j * np.sin(h)
    k23 = SQ2 / 4 * 1j * np.sin(beta) * np.cos(h) * s2
    k24 = SQ2 / 4 * np.sin(beta) * np.sin(h)
    zero = np.zeros(sh)
    upper = {
        (0, 1): tri(0.5j * np.sin(beta) * s2, -k12, k12, -0.5j * np.sin(beta) * s2),
        (0, 2): tri(zero, -k13, k13, zero),
        (0, 3): tri(zero, -k14, -k14, zero),
        (1, 2): tri(zero, k23, k23, zero),
        (1, 3): tri(-0.25j * np.cos(beta) * np.sin(theta), -k24, k24, 0.25j * np.cos(beta) * np.sin(theta)),
        (2, 3): tri(-0.25j * np.sin(theta), zero, zero, 0.25j * np.sin(theta)),
    }
    return _antisymmetrize(upper, sh, 4, 4)
