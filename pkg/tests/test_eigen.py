import numpy as np
import pytest

from tmspec.eigen import (EigenParams, abs2_closed, b_lambda, boundary_traces, deficiency_norms,
                          functional_equation_residual, g_lambda, membership_integrals, residues,
                          residues_analytic, trace_moduli_closed)
from tmspec.kernels import n_star_lower

LAMBDAS = [1j, -1j, -1.0, -10.0, 2.0 + 0.5j]


def coast_t(mach):
    return np.geomspace(1e-3, 1e3, 61)


def test_params(mach):
    p = EigenParams.create(-1.0, mach)
    assert p.theta == pytest.approx(np.pi)
    assert p.lambda_star == pytest.approx(-1 / (2 * np.pi**2 * mach.c))
    assert p.sigma == pytest.approx((np.pi - 1j * np.log(abs(p.lambda_star))) / (2 * np.pi))
    with pytest.raises(ValueError):
        EigenParams.create(0.0, mach)
    with pytest.raises(ValueError):
        EigenParams.create(3.0, mach)


@pytest.mark.parametrize("lam", LAMBDAS)
def test_functional_equation(mach_each, lam):
    p = EigenParams.create(lam, mach_each)
    assert np.max(functional_equation_residual(coast_t(mach_each), p, mach_each)) < 1e-8


def test_traces_satisfy_equation_directly(mach):
    p = EigenParams.create(1j, mach)
    t = coast_t(mach)
    up, lo = boundary_traces(t, p, mach)
    lhs = n_star_lower(t, mach.mu) * lo.values
    assert np.allclose(lhs, p.lambda_star * up.values, rtol=1e-8, atol=0)


def test_b_regular_at_lower_pole(mach):
    p = EigenParams.create(-1.0, mach)
    wm = mach.w_minus
    at = b_lambda(wm + 0j, p, mach)
    assert np.isfinite(at) and at != 0
    eps = 1e-6 * abs(wm)
    near = (eps * 1j) * g_lambda(wm + eps * 1j, p, mach)
    assert abs(near - at) / abs(at) < 1e-5
    with pytest.raises(ValueError):
        g_lambda(wm + 0j, p, mach)
    with pytest.raises(ValueError):
        b_lambda(mach.w_plus + 0j, p, mach)


@pytest.mark.parametrize("lam", LAMBDAS)
def test_residues_two_ways_and_analytic(mach, lam):
    p = EigenParams.create(lam, mach)
    r = residues(p, mach)
    assert r.discrepancy < 1e-6
    assert abs(r.res_plus) > 0 and abs(r.res_minus) > 0
    ap, am = residues_analytic(p, mach)
    assert abs(ap - r.res_plus) / abs(ap) < 1e-6
    assert abs(am - r.res_minus) / abs(am) < 1e-6


@pytest.mark.parametrize("psi", [0.4, 2.0, np.pi, 4.0, 5.9])
def test_abs2_closed_matches_direct(mach_each, psi):
    m = mach_each
    for lam in (1j, -1.0, -1j):
        p = EigenParams.create(lam, m)
        for r in (0.05, 0.7, 30.0):
            w = r * np.exp(1j * psi) if psi != np.pi else complex(-r, 0.0)
            if min(abs(w - m.w_plus) / abs(m.w_plus), abs(w - m.w_minus) / abs(m.w_minus)) < 0.05:
                continue
            direct = abs(g_lambda(w, p, m)) ** 2
            assert abs2_closed(w, p, m) == pytest.approx(direct, rel=1e-7)


def test_trace_moduli(mach):
    t = coast_t(mach)
    for lam in (1j, -1.0):
        p = EigenParams.create(lam, mach)
        up, lo = boundary_traces(t, p, mach)
        cu, cl = trace_moduli_closed(t, p, mach)
        assert np.allclose(np.abs(up.values) ** 2, cu, rtol=1e-8, atol=0)
        assert np.allclose(np.abs(lo.values) ** 2, cl, rtol=1e-8, atol=0)


def test_abs2_closed_rejects_cut(mach):
    with pytest.raises(ValueError):
        abs2_closed(2.0 + 0j, EigenParams.create(1j, mach), mach)


def test_deficiency_norms_closed_form(mach_each):
    a, b = abs(mach_each.w_plus), abs(mach_each.w_minus)
    exact = 4 * np.pi**3 / (np.sqrt(a) + np.sqrt(b))
    n_plus, n_minus = deficiency_norms(mach_each)
    assert n_plus == pytest.approx(exact, rel=1e-10)
    assert n_minus == pytest.approx(exact, rel=1e-10)


def test_membership_integrals_finite_and_converged(mach):
    p = EigenParams.create(1j, mach)
    psi = np.array([0.0, 1.0, 2.5, 4.0, 2 * np.pi])
    base = membership_integrals(p, mach, psi)
    assert np.all(np.isfinite(base)) and np.all(base > 0)
    fine = membership_integrals(p, mach, psi, step=0.025)
    assert np.allclose(base, fine, rtol=1e-10)
    # |G|^2 ~ r^(theta/pi) as r -> 0, so the cut at v = -30 leaves O(e^-15)
    wide = membership_integrals(p, mach, psi, v_range=(-40.0, 40.0))
    assert np.allclose(base, wide, rtol=1e-5)
