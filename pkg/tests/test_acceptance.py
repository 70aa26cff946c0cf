"""Acceptance criteria: each test runs one verification suite at the stated tolerances and runtime limit.

Each test prints one line: ACCEPTANCE <n> <name>: PASS|FAIL with the worst check and wall time.
"""
import time

import pytest

from holonomy_lab.verification import SUITES, SuiteOptions

CRITERIA = [
    (1, "algebra", "algebra identities and Cartan-basis matrices", 1.0),
    (2, "monopole", "SU(2) monopole charges and degenerate-pair flux", 5.0),
    (3, "geometry", "CP2 volume, Kahler form norm and self-duality, generator integrals", 60.0),
    (4, "fields", "closed-form vs finite-difference A and F", 120.0),
    (5, "decomposition", "U(1)/SU(2) decomposition and (anti-)self-duality", 10.0),
    (6, "chern", "Chern numbers at default and doubled grids", 600.0),
    (7, "holonomy", "Wilson loops, reversal and the dynamics oracle", 300.0),
]


def _worst(checks):
    return max(checks, key=lambda c: c.error / c.tolerance if c.tolerance else (0.0 if c.passed else float("inf")))


@pytest.mark.slow
@pytest.mark.parametrize("number,suite,title,limit", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_acceptance_criterion(number, suite, title, limit, capsys):
    t0 = time.perf_counter()
    checks = SUITES[suite](SuiteOptions())
    elapsed = time.perf_counter() - t0
    failed = [c.name for c in checks if not c.passed]
    ok = not failed and elapsed < limit
    worst = _worst(checks)
    with capsys.disabled():
        print(f"\nACCEPTANCE {number} {suite} ({title}): {'PASS' if ok else 'FAIL'} "
              f"[{len(checks)} checks, worst {worst.name} error {worst.error:.3g} <= {worst.tolerance:.3g}; "
              f"{elapsed:.1f} s < {limit:.0f} s]")
    assert not failed, f"failed checks: {failed}"
    assert elapsed < limit, f"runtime {elapsed:.1f} s exceeds {limit} s"
