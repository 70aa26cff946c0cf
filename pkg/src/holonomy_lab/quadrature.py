"""Tensor-product quadrature over coordinate boxes, evaluated in chunks."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

CP2_BOX = ((0.0, np.pi), (0.0, 2 * np.pi), (0.0, 4 * np.pi), (0.0, np.pi))
SOUTH_SPHERE_BOX = ((0.0, np.pi), (0.0, 2 * np.pi))
S2_BOX = ((0.0, np.pi), (0.0, 2 * np.pi))

CHUNK_POINTS = 1 << 16


@dataclass
class QuadratureResult:
    value: complex | float
    error: float
    n: int
    coarse: complex | float | None = None  # the same integral at n / 2

    def __float__(self):
        return float(np.real(self.value))


def default_threads() -> int:
    env = os.environ.get("HOLONOMY_LAB_THREADS")
    return max(1, int(env)) if env else 1


def rule_1d(lo: float, hi: float, n: int, kind: str = "gauss") -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [lo, hi]. kind="trapezoid" is for periodic integrands."""
    if kind == "gauss":
        x, w = np.polynomial.legendre.leggauss(n)
        half = (hi - lo) / 2
        return lo + half * (x + 1), half * w
    if kind == "trapezoid":
        h = (hi - lo) / n
        return lo + h * np.arange(n), np.full(n, h)
    raise ValueError(f"unknown rule {kind!r}")


def tensor_integrate(func: Callable[[np.ndarray], np.ndarray], box: Sequence[tuple[float, float]],
                     n: int | Sequence[int], kinds: Sequence[str] | None = None,
                     threads: int | None = None) -> complex:
    """Integrate func over a box with a tensor-product rule.

    func maps coordinates (..., dim) to values with the same leading shape. The
    grid is split along its first axis so memory stays bounded.
    """
    dim = len(box)
    ns = [n] * dim if np.isscalar(n) else list(n)
    kinds = kinds or ["gauss"] * dim
    rules = [rule_1d(lo, hi, k, kind) for (lo, hi), k, kind in zip(box, ns, kinds)]
    rest = int(np.prod(ns[1:])) if dim > 1 else 1
    per_chunk = max(1, CHUNK_POINTS // rest)
    inner = np.meshgrid(*[r[0] for r in rules[1:]], indexing="ij")
    inner_w = np.ones(())
    for r in rules[1:]:
        inner_w = np.multiply.outer(inner_w, r[1])

    x0, w0 = rules[0]

    def chunk(sl: slice) -> complex:
        xs = x0[sl]
        grid = np.empty((len(xs),) + tuple(ns[1:]) + (dim,))
        grid[..., 0] = xs.reshape((-1,) + (1,) * (dim - 1))
        for k, g in enumerate(inner, start=1):
            grid[..., k] = g
        vals = func(grid)
        weights = np.multiply.outer(w0[sl], inner_w)
        return complex(np.sum(vals * weights))

    slices = [slice(i, i + per_chunk) for i in range(0, ns[0], per_chunk)]
    threads = threads or default_threads()
    if threads > 1 and len(slices) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(chunk, slices))
    else:
        parts = [chunk(s) for s in slices]
    return complex(sum(parts))


def integrate_with_error(func, box, n: int, kinds=None, threads=None, real: bool = True) -> QuadratureResult:
    """Integral at resolution n, with |I(n) - I(n/2)| as the error estimate."""
    value = tensor_integrate(func, box, n, kinds, threads)
    coarse = tensor_integrate(func, box, max(2, n // 2), kinds, threads)
    if real:
        value, coarse = value.real, coarse.real
    return QuadratureResult(value, float(abs(value - coarse)), n, coarse)
