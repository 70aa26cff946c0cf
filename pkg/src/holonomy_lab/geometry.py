"""Riemannian and Kahler structure of CP^2 in the chart (beta, alpha, gamma, theta).

Two-forms are stored as antisymmetric (..., 4, 4) arrays of components w_mn with
w = 1/2 w_mn dx^m ^ dx^n; matrix-valued forms carry two trailing matrix axes.
"""
from __future__ import annotations

from itertools import permutations

import numpy as np

from .lie_algebra import SQRT3, structure_constants
from .parametrization import ParamPoint, embedding_closed
from .quadrature import CP2_BOX, SOUTH_SPHERE_BOX, QuadratureResult, integrate_with_error, tensor_integrate

CP2_VOLUME = 9 * np.pi ** 2 / 2
ETA_NORM_SQUARED = 9 * np.pi ** 2

_LEVI_CIVITA = np.zeros((4, 4, 4, 4))
for _p in permutations(range(4)):
    _LEVI_CIVITA[_p] = np.linalg.det(np.eye(4)[list(_p)])


def _coords(x) -> tuple[np.ndarray, ...]:
    x = np.asarray(x.coords if isinstance(x, ParamPoint) else x, dtype=float)
    return tuple(x[..., k] for k in range(4))


def metric_at(x) -> np.ndarray:
    """Induced metric g_mn of the unit CP^2, shape (..., 4, 4)."""
    beta, alpha, gamma, theta = _coords(x)
    st2 = np.sin(theta) ** 2
    g = np.zeros(beta.shape + (4, 4))
    g[..., 0, 0] = 0.75 * np.sin(theta / 2) ** 2
    g[..., 1, 1] = 3 / 16 * st2 * np.cos(beta) ** 2 + 3 / 8 * np.sin(beta) ** 2 * (1 - np.cos(theta))
    g[..., 1, 2] = g[..., 2, 1] = 3 / 16 * np.cos(beta) * st2
    g[..., 2, 2] = 3 / 16 * st2
    g[..., 3, 3] = 0.75
    return g


def sqrt_det_metric(x) -> np.ndarray:
    """sqrt(det g) from the closed form: (9/32) sin(beta) sin^2(theta/2) sin(theta)."""
    beta, alpha, gamma, theta = _coords(x)
    return 9 / 32 * np.abs(np.sin(beta) * np.sin(theta)) * np.sin(theta / 2) ** 2


def embedding_jacobian(x, h: float = 1e-5) -> np.ndarray:
    """d xi^i / d x^m by central differences, shape (..., 8, 4)."""
    x = np.asarray(x, dtype=float)
    cols = []
    for m in range(4):
        e = np.zeros(4)
        e[m] = h
        cols.append((embedding_closed(x + e) - embedding_closed(x - e)) / (2 * h))
    return np.stack(cols, axis=-1)


def metric_pullback(x, h: float = 1e-5) -> np.ndarray:
    """g = J^T J with J the finite-difference Jacobian of the R^8 embedding."""
    jac = embedding_jacobian(x, h)
    return np.einsum("...im,...in->...mn", jac, jac)


def volume_cp2(n: int = 32, threads: int | None = None) -> QuadratureResult:
    if n < 16:
        raise ValueError("volume quadrature needs at least 16 points per axis")
    return integrate_with_error(sqrt_det_metric, CP2_BOX, n, threads=threads)


def volume_cp2_monte_carlo(samples: int = 10 ** 6, seed: int = 0) -> tuple[float, float]:
    """Plain Monte Carlo estimate of the volume and its standard error."""
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in CP2_BOX])
    hi = np.array([b[1] for b in CP2_BOX])
    box_volume = float(np.prod(hi - lo))
    vals = sqrt_det_metric(rng.uniform(lo, hi, size=(samples, 4))) * box_volume
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(samples))


def kahler_form(x) -> np.ndarray:
    """Closed-form Kahler two-form eta_mn (nonzero: eta_12, eta_24, eta_34)."""
    beta, alpha, gamma, theta = _coords(x)
    eta = np.zeros(beta.shape + (4, 4))
    eta[..., 0, 1] = 0.75 * np.sin(beta) * np.sin(theta / 2) ** 2
    eta[..., 1, 3] = 3 / 8 * np.cos(beta) * np.sin(theta)
    eta[..., 2, 3] = 3 / 8 * np.sin(theta)
    return eta - np.swapaxes(eta, -1, -2)


def kahler_form_pullback(x, h: float = 1e-5) -> np.ndarray:
    """eta = (1/sqrt 3) f_ijk xi^i dxi^j ^ dxi^k pulled back through the embedding."""
    xi = embedding_closed(x)
    jac = embedding_jacobian(x, h)
    f = structure_constants().f
    # f_ijk xi_i dxi_j ^ dxi_k = 1/2 (2 f_ijk xi_i J_jm J_kn) dx^m ^ dx^n
    return 2 / SQRT3 * np.einsum("ijk,...i,...jm,...kn->...mn", f, xi, jac, jac)


def hodge_star(omega: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(*w)_cd = (sqrt det g / 2) eps_abcd g^am g^bn w_mn, orientation (beta, alpha, gamma, theta).

    omega may be scalar (..., 4, 4) or matrix-valued (..., 4, 4, d, d).
    """
    det = np.linalg.det(g)
    if np.any(det <= 0):
        raise ValueError("metric is degenerate here (chart boundary)")
    ginv = np.linalg.inv(g)
    vol = np.sqrt(det)
    if omega.ndim == g.ndim:
        raised = np.einsum("...am,...bn,...mn->...ab", ginv, ginv, omega)
        return 0.5 * vol[..., None, None] * np.einsum("abcd,...ab->...cd", _LEVI_CIVITA, raised)
    raised = np.einsum("...am,...bn,...mnij->...abij", ginv, ginv, omega)
    return 0.5 * vol[..., None, None, None, None] * np.einsum("abcd,...abij->...cdij", _LEVI_CIVITA, raised)


def wedge_4form(w1: np.ndarray, w2: np.ndarray, matrix: bool = False) -> np.ndarray:
    """Coefficient of dx^1^dx^2^dx^3^dx^4 in w1 ^ w2.

    With matrix=True the inputs are (..., 4, 4, d, d) and are multiplied in
    order, w1 on the left.
    """
    if matrix:
        def c(w, m, n):
            return w[..., m, n, :, :]
        prod = np.matmul
    else:
        def c(w, m, n):
            return w[..., m, n]
        prod = np.multiply
    return (prod(c(w1, 0, 1), c(w2, 2, 3)) + prod(c(w1, 2, 3), c(w2, 0, 1))
            - prod(c(w1, 0, 2), c(w2, 1, 3)) - prod(c(w1, 1, 3), c(w2, 0, 2))
            + prod(c(w1, 0, 3), c(w2, 1, 2)) + prod(c(w1, 1, 2), c(w2, 0, 3)))


def form_inner_product(field1, field2, n: int = 32, threads: int | None = None) -> QuadratureResult:
    """<w1, w2> = integral of w1 ^ *w2 over CP^2 for scalar two-form fields.

    Fields are callables mapping coordinates (..., 4) to components (..., 4, 4).
    """
    def density(x):
        return wedge_4form(field1(x), hodge_star(field2(x), metric_at(x)))

    return integrate_with_error(density, CP2_BOX, n, threads=threads)


def volume_form_density(x) -> np.ndarray:
    """eta^2 / 2 as a density in dbeta dalpha dgamma dtheta."""
    eta = kahler_form(x)
    return 0.5 * wedge_4form(eta, eta)


def integrate_cp2(density, n: int = 32, threads: int | None = None) -> QuadratureResult:
    return integrate_with_error(density, CP2_BOX, n, threads=threads)


def south_sphere_integral(form, n: int = 128, gamma: float = 0.0, kinds=("gauss", "trapezoid"),
                          real: bool = True) -> QuadratureResult:
    """Integral of a two-form over S^2_s: the chart theta = pi, oriented by dbeta ^ dalpha.

    form maps (..., 4) coordinates to (..., 4, 4) components (scalar) or
    (..., 4, 4, d, d) (matrix-valued, traced here).
    """
    def density(y):
        x = np.concatenate([y, np.full(y.shape[:-1] + (1,), gamma), np.full(y.shape[:-1] + (1,), np.pi)], axis=-1)
        w = form(x)
        comp = w[..., 0, 1]
        if comp.ndim > y.ndim - 1:
            comp = np.trace(comp, axis1=-2, axis2=-1)
        return comp

    value = tensor_integrate(density, SOUTH_SPHERE_BOX, n, kinds)
    coarse = tensor_integrate(density, SOUTH_SPHERE_BOX, max(2, n // 2), kinds)
    if real:
        value, coarse = value.real, coarse.real
    return QuadratureResult(value, float(abs(value - coarse)), n)


def normalized_generator(x) -> np.ndarray:
    """omega = eta / (3 pi), the integral generator of H^2(CP^2)."""
    return kahler_form(x) / (3 * np.pi)
