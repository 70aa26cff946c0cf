"""SU(2) and SU(3) generator sets: Gell-Mann matrices, structure constants,
spin-j operators, the adjoint representation and its Cartan-diagonal basis.

Matrix indices in docstrings are 1-based (row, col); arrays are 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np

from ._linalg import commutator, dagger

ALGEBRA_TOL = 1e-10

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)
SQRT8 = np.sqrt(8.0)
SQRT38 = np.sqrt(3.0 / 8.0)


@dataclass(frozen=True)
class GeneratorSet:
    dim: int
    generators: np.ndarray  # (n, dim, dim) complex
    label: str

    def __post_init__(self):
        self.generators.setflags(write=False)

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.generators[i]

    def hermiticity_residual(self) -> float:
        g = self.generators
        return float(np.max(np.abs(g - dagger(g))))


@dataclass(frozen=True)
class StructureConstants:
    f: np.ndarray  # (8, 8, 8) real, totally antisymmetric

    def __post_init__(self):
        self.f.setflags(write=False)

    def __call__(self, i: int, j: int, k: int) -> float:
        """f_ijk with 1-based indices."""
        return float(self.f[i - 1, j - 1, k - 1])


@dataclass(frozen=True)
class CartanTransform:
    V: np.ndarray
    lambda3_diag: np.ndarray
    lambda8_diag: np.ndarray


def _matrix(entries: dict[tuple[int, int], complex], dim: int) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=complex)
    for (r, c), v in entries.items():
        m[r - 1, c - 1] = v
    return m


@lru_cache(maxsize=None)
def gell_mann() -> GeneratorSet:
    """The eight 3x3 Gell-Mann matrices, lambda_1 .. lambda_8."""
    lam = [
        _matrix({(1, 2): 1, (2, 1): 1}, 3),
        _matrix({(1, 2): -1j, (2, 1): 1j}, 3),
        _matrix({(1, 1): 1, (2, 2): -1}, 3),
        _matrix({(1, 3): 1, (3, 1): 1}, 3),
        _matrix({(1, 3): -1j, (3, 1): 1j}, 3),
        _matrix({(2, 3): 1, (3, 2): 1}, 3),
        _matrix({(2, 3): -1j, (3, 2): 1j}, 3),
        _matrix({(1, 1): 1, (2, 2): 1, (3, 3): -2}, 3) / SQRT3,
    ]
    return GeneratorSet(3, np.array(lam), "su3-defining")


# nonzero f_ijk with i<j<k; the rest follow by antisymmetry
_F_TABLE = {
    (1, 2, 3): 1.0,
    (4, 5, 8): SQRT3 / 2,
    (6, 7, 8): SQRT3 / 2,
    (1, 4, 7): 0.5,
    (2, 4, 6): 0.5,
    (2, 5, 7): 0.5,
    (3, 4, 5): 0.5,
    (5, 1, 6): 0.5,
    (6, 3, 7): 0.5,
}


def _perm_sign(p: tuple[int, ...]) -> int:
    sign, p = 1, list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def structure_constants() -> StructureConstants:
    f = np.zeros((8, 8, 8))
    for idx, val in _F_TABLE.items():
        for p in permutations(range(3)):
            f[tuple(idx[q] - 1 for q in p)] = _perm_sign(p) * val
    return StructureConstants(f)


def structure_constants_from_trace(gens: GeneratorSet | None = None) -> np.ndarray:
    """f_ijk = (1/4i) Tr([lambda_i, lambda_j] lambda_k), evaluated numerically."""
    lam = (gens or gell_mann()).generators
    comm = np.einsum("iab,jbc->ijac", lam, lam) - np.einsum("jab,ibc->ijac", lam, lam)
    f = np.einsum("ijab,kba->ijk", comm, lam) / 4j
    return f.real


def _parse_half_integer(j) -> Fraction:
    jf = Fraction(j) if not isinstance(j, float) else Fraction(j).limit_denominator(4)
    if isinstance(j, float) and abs(float(jf) - j) > 1e-12:
        raise ValueError(f"spin {j!r} is not a half-integer")
    if jf <= 0 or (2 * jf).denominator != 1:
        raise ValueError(f"spin {j!r} is not a positive half-integer")
    return jf


def spin_operators(j) -> GeneratorSet:
    """(Jx, Jy, Jz) for spin j in the |j, m> basis ordered m = j, j-1, ..., -j."""
    jf = _parse_half_integer(j)
    jv = float(jf)
    dim = int(2 * jf) + 1
    m = jv - np.arange(dim)
    # <m+1|J+|m> = sqrt(j(j+1) - m(m+1)); row index of m+1 is one less than m's
    jp = np.zeros((dim, dim), dtype=complex)
    for k in range(1, dim):
        jp[k - 1, k] = np.sqrt(jv * (jv + 1) - m[k] * (m[k] + 1))
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(complex)
    return GeneratorSet(dim, np.array([jx, jy, jz]), f"su2-spin-{jf}")


def adjoint_generators(f: StructureConstants | None = None) -> GeneratorSet:
    """(Lambda_i)_jk = i f_ijk.

    With this sign the generators satisfy [Lambda_i, Lambda_j] = -i f_ijk Lambda_k.
    """
    f = f or structure_constants()
    return GeneratorSet(8, 1j * np.asarray(f.f, dtype=complex), "su3-adjoint")


# Unitary that simultaneously diagonalizes Lambda_3 and Lambda_8, as printed.
TABULATED_V = _matrix(
    {
        (1, 3): 1j / SQRT2, (1, 5): 1j / SQRT2,
        (2, 3): -1 / SQRT2, (2, 5): 1 / SQRT2,
        (3, 4): 1,
        (4, 1): 1j / SQRT2, (4, 7): 1j / SQRT2,
        (5, 1): -1 / SQRT2, (5, 7): 1 / SQRT2,
        (6, 2): 1j / SQRT2, (6, 8): 1j / SQRT2,
        (7, 2): -1 / SQRT2, (7, 8): 1 / SQRT2,
        (8, 6): 1,
    },
    8,
)

TABULATED_LAMBDA3_DIAG = np.array([-0.5, 0.5, -1, 0, 1, 0, 0.5, -0.5])
TABULATED_LAMBDA8_DIAG = np.array([-1, -1, 0, 0, 0, 0, 1, 1]) * SQRT3 / 2

# The six non-Cartan generators in the diagonal basis, as printed.
TABULATED_PRIMED = {
    1: _matrix({
        (1, 2): -0.5, (2, 1): -0.5,
        (3, 4): -1j / SQRT2, (4, 3): 1j / SQRT2, (4, 5): -1j / SQRT2, (5, 4): 1j / SQRT2,
        (7, 8): 0.5, (8, 7): 0.5,
    }, 8),
    2: _matrix({
        (1, 2): 0.5j, (2, 1): -0.5j,
        (3, 4): -1 / SQRT2, (4, 3): -1 / SQRT2, (4, 5): -1 / SQRT2, (5, 4): -1 / SQRT2,
        (7, 8): 0.5j, (8, 7): -0.5j,
    }, 8),
    4: _matrix({
        (1, 4): -1j / SQRT8, (1, 6): -1j * SQRT38,
        (2, 5): 0.5,
        (3, 8): -0.5,
        (4, 1): 1j / SQRT8, (4, 7): -1j / SQRT8,
        (5, 2): 0.5,
        (6, 1): 1j * SQRT38, (6, 7): -1j * SQRT38,
        (7, 4): 1j / SQRT8, (7, 6): 1j * SQRT38,
        (8, 3): -0.5,
    }, 8),
    5: _matrix({
        (1, 4): -1 / SQRT8, (1, 6): -SQRT38,
        (2, 5): -0.5j,
        (3, 8): 0.5j,
        (4, 1): -1 / SQRT8, (4, 7): -1 / SQRT8,
        (5, 2): 0.5j,
        (6, 1): -SQRT38, (6, 7): -SQRT38,
        (7, 4): -1 / SQRT8, (7, 6): -SQRT38,
        (8, 3): -0.5j,
    }, 8),
    6: _matrix({
        (1, 3): 0.5,
        (2, 4): 1j / SQRT8, (2, 6): -1j * SQRT38,
        (3, 1): 0.5,
        (4, 2): -1j / SQRT8, (4, 8): 1j / SQRT8,
        (5, 7): -0.5,
        (6, 2): 1j * SQRT38, (6, 8): -1j * SQRT38,
        (7, 5): -0.5,
        (8, 4): -1j / SQRT8, (8, 6): 1j * SQRT38,
    }, 8),
    7: _matrix({
        (1, 3): -0.5j,
        (2, 4): 1 / SQRT8, (2, 6): -SQRT38,
        (3, 1): 0.5j,
        (4, 2): 1 / SQRT8, (4, 8): 1 / SQRT8,
        (5, 7): 0.5j,
        (6, 2): -SQRT38, (6, 8): -SQRT38,
        (7, 5): -0.5j,
        (8, 4): 1 / SQRT8, (8, 6): -SQRT38,
    }, 8),
}


def simultaneous_diagonalize(a: np.ndarray, b: np.ndarray, tol: float = ALGEBRA_TOL) -> np.ndarray:
    """Unitary W with W^dag a W and W^dag b W diagonal, for commuting Hermitian a, b.

    Columns come out sorted by (eigenvalue of b, eigenvalue of a).
    """
    if np.max(np.abs(commutator(a, b))) > tol:
        raise ValueError("matrices do not commute")
    wb, qb = np.linalg.eigh(b)
    cols = []
    start = 0
    while start < len(wb):
        stop = start
        while stop < len(wb) and abs(wb[stop] - wb[start]) < 1e-8:
            stop += 1
        block = qb[:, start:stop]
        wa, qa = np.linalg.eigh(block.conj().T @ a @ block)
        cols.append(block @ qa)
        start = stop
    w = np.hstack(cols)
    for m in (a, b):
        d = w.conj().T @ m @ w
        if np.max(np.abs(d - np.diag(np.diag(d)))) > tol:
            raise ValueError("simultaneous diagonalization residual too large")
    return w


def cartan_transform(adjoint: GeneratorSet | None = None, method: str = "tabulated") -> CartanTransform:
    """V diagonalizing Lambda_3 and Lambda_8 via V^dag Lambda V.

    method="tabulated" uses the printed V; method="numeric" recomputes it and
    orders the columns to reproduce the printed diagonal entries.
    """
    adjoint = adjoint or adjoint_generators()
    if adjoint.label != "su3-adjoint":
        raise ValueError(f"expected su3-adjoint generators, got {adjoint.label}")
    l3, l8 = adjoint[2], adjoint[7]
    if method == "tabulated":
        v = TABULATED_V.copy()
    elif method == "numeric":
        w = simultaneous_diagonalize(l3, l8)
        w3 = np.real(np.diag(w.conj().T @ l3 @ w))
        w8 = np.real(np.diag(w.conj().T @ l8 @ w))
        order, used = [], set()
        for t3, t8 in zip(TABULATED_LAMBDA3_DIAG, TABULATED_LAMBDA8_DIAG):
            k = next(k for k in range(8)
                     if k not in used and abs(w3[k] - t3) < 1e-8 and abs(w8[k] - t8) < 1e-8)
            used.add(k)
            order.append(k)
        v = w[:, order]
    else:
        raise ValueError(f"unknown method {method!r}")
    d3 = v.conj().T @ l3 @ v
    d8 = v.conj().T @ l8 @ v
    resid = max(np.max(np.abs(d3 - np.diag(np.diag(d3)))), np.max(np.abs(d8 - np.diag(np.diag(d8)))))
    if resid > ALGEBRA_TOL:
        raise ValueError(f"diagonalization residual {resid:.3g} exceeds {ALGEBRA_TOL}")
    return CartanTransform(v, np.real(np.diag(d3)), np.real(np.diag(d8)))


def transformed_generators(ct: CartanTransform | None = None,
                           adjoint: GeneratorSet | None = None) -> GeneratorSet:
    """Lambda'_i = V^dag Lambda_i V for all eight generators.

    This is the conjugation order that reproduces every printed Lambda'_i.
    """
    adjoint = adjoint or adjoint_generators()
    ct = ct or cartan_transform(adjoint)
    v = ct.V
    primed = np.einsum("ba,ibc,cd->iad", v.conj(), adjoint.generators, v)
    return GeneratorSet(8, primed, "su3-adjoint")


@lru_cache(maxsize=None)
def adjoint_cartan_basis() -> GeneratorSet:
    """Adjoint generators in the basis where Lambda'_3, Lambda'_8 are diagonal."""
    return transformed_generators()


def tabulated_discrepancies(primed: GeneratorSet | None = None, tol: float = 1e-12) -> list[dict]:
    """Entries where the computed Lambda'_i differ from the printed ones."""
    primed = primed or adjoint_cartan_basis()
    out = []
    printed = dict(TABULATED_PRIMED)
    printed[3] = np.diag(TABULATED_LAMBDA3_DIAG).astype(complex)
    printed[8] = np.diag(TABULATED_LAMBDA8_DIAG).astype(complex)
    for i, ref in sorted(printed.items()):
        diff = np.abs(primed[i - 1] - ref)
        for r, c in zip(*np.nonzero(diff > tol)):
            out.append({"generator": i, "row": int(r) + 1, "col": int(c) + 1,
                        "printed": complex(ref[r, c]), "computed": complex(primed[i - 1][r, c])})
    return out


def jacobi_residual(f: np.ndarray) -> float:
    t = np.einsum("ijm,mkl->ijkl", f, f)
    return float(np.max(np.abs(t + np.einsum("ijkl->jkil", t) + np.einsum("ijkl->kijl", t))))


def commutation_residual(gens: GeneratorSet, f: np.ndarray, scale: complex) -> float:
    """max_ij ||[G_i, G_j] - scale * f_ijk G_k||."""
    g = gens.generators
    lhs = np.einsum("iab,jbc->ijac", g, g) - np.einsum("jab,ibc->ijac", g, g)
    rhs = scale * np.einsum("ijk,kab->ijab", f, g)
    return float(np.max(np.abs(lhs - rhs)))


def verify_algebra() -> list[dict]:
    """Identity checks for the CLI's `algebra verify` table."""
    lam = gell_mann()
    f = structure_constants()
    adj = adjoint_generators(f)
    primed = adjoint_cartan_basis()
    ct = cartan_transform(adj)
    ct_num = cartan_transform(adj, method="numeric")
    gram = np.einsum("iab,jba->ij", lam.generators, lam.generators)
    checks = [
        ("gell_mann_hermitian", lam.hermiticity_residual(), 1e-12),
        ("gell_mann_trace_orthonormal", float(np.max(np.abs(gram - 2 * np.eye(8)))), ALGEBRA_TOL),
        ("gell_mann_commutators", commutation_residual(lam, f.f, 2j), ALGEBRA_TOL),
        ("f_matches_trace_formula", float(np.max(np.abs(f.f - structure_constants_from_trace(lam)))), ALGEBRA_TOL),
        ("f_jacobi", jacobi_residual(f.f), ALGEBRA_TOL),
        ("adjoint_hermitian", adj.hermiticity_residual(), 1e-12),
        # (Lambda_i)_jk = +i f_ijk closes with the opposite sign: [L_i, L_j] = -i f_ijk L_k
        ("adjoint_commutators", commutation_residual(adj, f.f, -1j), ALGEBRA_TOL),
        ("V_unitary", float(np.max(np.abs(ct.V.conj().T @ ct.V - np.eye(8)))), 1e-12),
        ("cartan_diag_lambda3", float(np.max(np.abs(ct.lambda3_diag - TABULATED_LAMBDA3_DIAG))), 1e-12),
        ("cartan_diag_lambda8", float(np.max(np.abs(ct.lambda8_diag - TABULATED_LAMBDA8_DIAG))), 1e-12),
        ("numeric_cartan_diag", float(max(np.max(np.abs(ct_num.lambda3_diag - TABULATED_LAMBDA3_DIAG)),
                                          np.max(np.abs(ct_num.lambda8_diag - TABULATED_LAMBDA8_DIAG)))), ALGEBRA_TOL),
        ("tabulated_primed_entrywise", max((abs(d["printed"] - d["computed"]) for d in tabulated_discrepancies(primed)),
                                          default=0.0), 1e-12),
        ("primed_commutators", commutation_residual(primed, f.f, -1j), ALGEBRA_TOL),
    ]
    for j in ("1/2", "1", "3/2", "2", "5/2"):
        s = spin_operators(j)
        checks.append((f"spin_{j}_commutator",
                       float(np.max(np.abs(commutator(s[0], s[1]) - 1j * s[2]))), 1e-12))
    return [{"name": n, "residual": r, "tolerance": t, "pass": bool(r <= t)} for n, r, t in checks]
