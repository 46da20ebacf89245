"""
Acceptance criteria 1 to 13.

Each test combines the package's property report with an independent oracle
and prints one PASS/FAIL line; the lines are repeated in the terminal summary.
Run directly (``python tests/test_acceptance.py``) to print the lines only.
"""

import time
import warnings

import numpy as np
import pytest

import oracles
from conftest import MU_A, MU_M005
from test_verify import log_kernel_mp
from tmspec.cauchy import get_machinery, k_reg
from tmspec.verify import CRITERIA, verify_all

SUMMARY_LINES: list[str] = []

# [DERIVED] 30-digit oracle values, frozen (tests/oracles.py)
MU0_REF = 1.8497720216743703
MU1_REF = 1.8630790239832207
S0_REF = {1.87: 0.3846407854617473, 1.88: 0.6233928697395131, MU_M005: 1.0858115225948781}
T0_REF = {1.853: 0.4393824984048733, 1.856: 0.3716320509502043, 1.86: 0.2481947061968448}


@pytest.fixture(scope="module")
def report():
    start = time.perf_counter()
    rep = verify_all()
    rep.elapsed = time.perf_counter() - start
    return rep


def record(criterion: int, passed: bool, detail: str) -> None:
    line = f"criterion {criterion:2d} {'PASS' if passed else 'FAIL'}: {CRITERIA[criterion]}; {detail}"
    SUMMARY_LINES.append(line)
    print(line)


def report_lines(rep, criterion: int) -> tuple[bool, str]:
    checks = rep.by_criterion(criterion)
    failed = [c for c in checks if not c.passed]
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks pass"
    if failed:
        detail += "; failing: " + ", ".join(f"{c.name} {c.value:.4g} > {c.tolerance:.3g} ({c.detail})"
                                            for c in failed)
    return bool(checks) and not failed, detail


def conclude(criterion: int, rep, extra_ok: bool, extra: str) -> None:
    ok, detail = report_lines(rep, criterion)
    passed = ok and extra_ok
    record(criterion, passed, f"{detail}; {extra}")
    assert passed, SUMMARY_LINES[-1]


def test_criterion_01_critical_constants(report):
    from tmspec.constants import critical_constants
    c = critical_constants()
    err = max(abs(c.mu0 - MU0_REF), abs(c.mu1 - MU1_REF))
    ok = err < 1e-10 and 0 < c.m1 < c.m0
    conclude(1, report, ok, f"mu0={c.mu0!r} mu1={c.mu1!r}; oracle error {err:.2e}")


def test_criterion_02_zero_residuals(report):
    from tmspec.zeros import find_zeros
    err = max([abs(find_zeros(mu).s0 - s) for mu, s in S0_REF.items()]
              + [abs(find_zeros(mu).t0 - t) for mu, t in T0_REF.items()])
    conclude(2, report, err < 1e-10, f"zero abscissae vs oracle {err:.2e}")


def test_criterion_03_argument_of_a(report):
    conclude(3, report, True, "tail fit evaluated at mu=1.87, 1.88 and m=0.05")


def test_criterion_04_boundary_values(report, mach):
    w = 2 * np.exp(1j)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ref = oracles.k_extrapolated(w, MU_M005, mach.s0)
    err = abs(k_reg(w, mach) - ref)
    conclude(4, report, err < 1e-9, f"K vs truncated-quadrature oracle {err:.2e}")


def test_criterion_05_functional_equation(report):
    conclude(5, report, len(report.by_criterion(5)) == 2, "mu=1.88 and m=0.05, five lambdas each")


def test_criterion_06_closed_forms(report):
    conclude(6, report, True, "100 random points per mu")


def test_criterion_07_deficiency(report):
    from tmspec.eigen import deficiency_norms
    worst = 0.0
    for mu in (MU_A, MU_M005):
        m = get_machinery(mu)
        a, b = abs(m.w_plus), abs(m.w_minus)
        exact = 4 * np.pi**3 / (np.sqrt(a) + np.sqrt(b))
        worst = max(worst, *(abs(n / exact - 1) for n in deficiency_norms(m)))
    conclude(7, report, worst < 1e-10, f"both norms vs closed form 4 pi^3/(|w+|^1/2 + |w-|^1/2): {worst:.2e}")


def test_criterion_08_detector(report):
    conclude(8, report, True, "2 mu values x 4 beta values, n in [-3, 3]")


def test_criterion_09_log_kernel(report):
    from tmspec.verify import log_kernel_rhs
    pts = [(0.0, np.pi), (0.5, np.pi / 4), (-1.0, 1.75 * np.pi)]
    err = max(abs(log_kernel_mp(s, p) / log_kernel_rhs(s, p) - 1) for s, p in pts)
    conclude(9, report, err < 1e-9, f"closed form vs 30-digit quadrature {err:.2e}")


def test_criterion_10_mellin(report):
    conclude(10, report, True, "5-function corpus, 20-point Gamma pair")


def test_criterion_11_positivity(report):
    from tmspec.kernels import n_fn
    sign = [float(n_fn(0.5j, mu).real) < 0 for mu in (MU1_REF + 1e-3, MU_A, MU_M005)]
    conclude(11, report, all(sign), "N(i/2) < 0 just above the oracle mu1")


def test_criterion_12_brackets(report):
    from tmspec.spectrum import ExtensionBeta, h_level, ladder
    s0 = S0_REF[MU_M005]
    e = h_level(ladder(ExtensionBeta(1j), s0, range(0, 12)).values, 1.0)
    err = float(np.max(np.abs(e[1:] / e[:-1] / np.exp(-2 * np.pi / s0) - 1)))
    conclude(12, report, err < 1e-12, f"energy ratio with oracle s0: {err:.2e}")


def test_criterion_13_anchor(report):
    checks = report.by_criterion(13)
    conclude(13, report, len(checks) == 2, "; ".join(c.detail for c in checks))


def test_runtime_budget(report):
    assert report.elapsed < 600


if __name__ == "__main__":
    rep = verify_all()
    for n in CRITERIA:
        ok, detail = report_lines(rep, n)
        print(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {CRITERIA[n]}; {detail}")
