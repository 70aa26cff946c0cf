"""Printed closed-form coefficients that disagree with the numeric oracle.

Each entry keeps the printed expression next to the corrected one used by the
package, so reports can show both and the disagreement stays testable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import closed_forms as cf
from .parametrization import embedding_closed, embedding_trace, random_points, su3_adjoint, su3_degenerate


@dataclass(frozen=True)
class Erratum:
    name: str
    description: str
    printed: Callable[[np.ndarray], np.ndarray]
    corrected: Callable[[np.ndarray], np.ndarray]
    oracle: Callable[[np.ndarray], np.ndarray]


def _printed_xi(x):
    xi = embedding_closed(x).copy()
    xi[..., 3] *= -1
    return xi


def _printed_e1_a(x):
    a = cf.su3_E1_A(x).copy()
    beta, alpha, gamma, theta = (np.asarray(x)[..., k] for k in range(4))
    h = theta / 2
    wrong = 0.25j * (np.cos(h - gamma) - np.cos(h + gamma))
    right = 0.25j * (np.cos(h - gamma) + np.cos(h + gamma))
    a[..., 0, :, :] += (wrong - right)[..., None, None] * cf.SY
    return a


def _printed_minus_f12(x):
    f = cf.adjoint_minus_F(x).copy()
    f[..., 0, 1, :, :] *= np.array([[2, 0.5], [0.5, 2]])
    f[..., 1, 0, :, :] = -f[..., 0, 1, :, :]
    return f


def _printed_zero_f13(x):
    f = cf.adjoint_zero_F(x).copy()
    theta = np.asarray(x)[..., 3]
    scale = np.cos(theta) / np.cos(theta / 2)
    f[..., 0, 2, :, :] *= scale[..., None, None]
    f[..., 2, 0, :, :] = -f[..., 0, 2, :, :]
    return f


def _numeric(system, label, kind):
    from .gauge_field import connection_numeric, curvature_numeric, level_block

    block = level_block(system, label)
    if kind == "A":
        return lambda x: connection_numeric(block, x).A
    return lambda x: curvature_numeric(block, x).F


def registry() -> list[Erratum]:
    return [
        Erratum("embedding-xi4", "xi^4 printed with a + sign; (1/2) Tr[H lambda_4] gives the opposite sign",
                _printed_xi, embedding_closed, embedding_trace),
        Erratum("E1-A1-sigma_y", "sigma_y coefficient of A_1 on the E1 level: the cosines add, not subtract",
                _printed_e1_a, cf.su3_E1_A, _numeric(su3_degenerate(), "E1", "A")),
        Erratum("adjoint-minus-F12", "F_12 on the '-' level: diagonal is half the printed value, off-diagonal is i/4",
                _printed_minus_f12, cf.adjoint_minus_F, _numeric(su3_adjoint(), "-", "F")),
        Erratum("adjoint-zero-F13", "F_13 on the '0' level carries cos(theta/2), printed as cos(theta)",
                _printed_zero_f13, cf.adjoint_zero_F, _numeric(su3_adjoint(), "0", "F")),
    ]


def check(n: int = 200, seed: int = 0) -> list[dict]:
    """Max deviation of printed and corrected forms from the oracle at n random CP2 points."""
    rng = np.random.default_rng(seed)
    x = random_points("CP2", n, rng)
    out = []
    for e in registry():
        ref = e.oracle(x)
        out.append({
            "name": e.name,
            "description": e.description,
            "printed_deviation": float(np.max(np.abs(e.printed(x) - ref))),
            "corrected_deviation": float(np.max(np.abs(e.corrected(x) - ref))),
        })
    return out


__all__ = ["Erratum", "registry", "check"]
