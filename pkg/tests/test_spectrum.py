import numpy as np
import pytest

from tmspec.spectrum import (ExtensionBeta, brackets, cross_validate, detect_spectrum, gamma_eta, h_level,
                             ladder, ladder_anchor, ladder_anchor_alternative, phase_condition_residual,
                             resolvent_system)
from tmspec.zeros import s0_of_mu

BETAS = [1j, 1.0, -1.0, np.exp(2j * np.pi / 3)]


def test_beta_normalised():
    assert ExtensionBeta(3j).beta == 1j
    assert ExtensionBeta.from_angle(np.pi).beta == pytest.approx(-1)
    with pytest.raises(ValueError):
        ExtensionBeta(0)


def test_gamma_unit_modulus(mach):
    rng = np.random.default_rng(7)
    for ang in rng.uniform(0, 2 * np.pi, 100):
        gamma, eta = gamma_eta(ExtensionBeta.from_angle(ang), mach.s0)
        assert abs(abs(gamma) - 1) < 1e-14
        assert 0 < eta <= 2 * np.pi


def test_beta_i_gives_eta_pi(mach_each):
    _, eta = gamma_eta(ExtensionBeta(1j), mach_each.s0)
    assert eta == pytest.approx(np.pi, abs=1e-14)


def test_eta_monotone_in_arg_beta(mach):
    angles = np.linspace(0, 2 * np.pi, 2001)
    etas = np.unwrap([gamma_eta(ExtensionBeta.from_angle(a), mach.s0)[1] for a in angles])
    steps = np.diff(etas)
    assert np.all(steps > 0) or np.all(steps < 0)
    assert abs(etas[-1] - etas[0]) == pytest.approx(2 * np.pi, abs=1e-9)


def test_ladder_ratio_and_phase(mach):
    for b in BETAS:
        lad = ladder(ExtensionBeta(b), mach.s0, range(-5, 6))
        vals = lad.values
        assert np.all(vals < 0)
        assert np.allclose(vals[1:] / vals[:-1], np.exp(np.pi / mach.s0), rtol=1e-12, atol=0)
        assert dict(lad.entries)[0] == lad.lambda0 == ladder_anchor(lad.eta, mach.s0)
        for lam in vals:
            assert phase_condition_residual(lam, ExtensionBeta(b), mach.s0) < 1e-10


def test_ladder_set_invariant_under_eta_shift(mach):
    s0 = mach.s0
    lad = ladder(ExtensionBeta(1.0), s0, range(-6, 7))
    shifted = [-np.exp((-(lad.eta + 2 * np.pi) + 2 * np.pi * n) / (2 * s0)) for n in range(-5, 8)]
    assert np.allclose(np.sort(lad.values), np.sort(shifted), rtol=1e-12, atol=0)


def test_determinant_vanishes_only_on_ladder(mach):
    beta = ExtensionBeta(1j)
    lad = ladder(beta, mach.s0, range(-1, 2))
    for lam in lad.values:
        sysm = resolvent_system(lam, beta, mach)
        assert abs(sysm.det) / abs(sysm.p_term) < 1e-9
    mid = lad.values[1] * np.sqrt(lad.ratio)
    sysm = resolvent_system(mid, beta, mach)
    assert abs(sysm.det) / abs(sysm.p_term) > 1.0
    assert abs(abs(sysm.p_term) / abs(sysm.q_term) - 1) < 1e-8
    with pytest.raises(ValueError):
        resolvent_system(1.0, beta, mach)


def test_resolvent_solve_zero_source(mach):
    beta = ExtensionBeta(1j)
    lad = ladder(beta, mach.s0, [0])
    sysm = resolvent_system(lad.lambda0 * np.sqrt(lad.ratio), beta, mach)
    sol = sysm.solve(lambda x: np.zeros_like(x))
    assert np.all(sol == 0)


@pytest.mark.parametrize("b", BETAS, ids=["i", "1", "-1", "cube_root"])
def test_detector_equals_ladder(mach_each, b):
    res = cross_validate(ExtensionBeta(b), mach_each, range(-3, 4), rtol=1e-6)
    assert res["max_rel_error"] < 1e-6
    assert len(res["detected"]) == 7


def test_one_zero_per_period(mach):
    beta = ExtensionBeta(-1.0)
    lad = ladder(beta, mach.s0, [0])
    for k in range(-2, 3):
        lo = lad.lambda0 * lad.ratio ** (k + 0.3)
        hi = lad.lambda0 * lad.ratio ** (k - 0.7)
        assert len(detect_spectrum(beta, (lo, hi), mach)) == 1


def test_empty_interval_between_entries(mach):
    beta = ExtensionBeta(1.0)
    lad = ladder(beta, mach.s0, [0])
    assert detect_spectrum(beta, (lad.lambda0 * lad.ratio ** 0.9, lad.lambda0 * lad.ratio ** 0.1), mach) == []


def test_alternative_anchor_is_not_an_eigenvalue(mach):
    beta = ExtensionBeta(1j)
    _, eta = gamma_eta(beta, mach.s0)
    alt = ladder_anchor_alternative(eta, mach.s0)
    assert phase_condition_residual(alt, beta, mach.s0) > 1e-3


def test_brackets(mach):
    lad = ladder(ExtensionBeta(1j), mach.s0, range(-10, 20))
    b = brackets(lad, mach.mu)
    assert b.c == pytest.approx(2 * np.pi**2)
    assert np.isfinite(b.n0) and b.kappa < 0
    for n, lo, hi in b.gaps:
        if n >= b.n0:
            assert lo < hi
    n_before = b.n0 - 1
    gap = dict((n, (lo, hi)) for n, lo, hi in b.gaps)[n_before]
    assert not gap[0] < gap[1]
    for n, lo, hi in b.brackets:
        lam = dict(lad.entries)[n]
        assert hi - lo == pytest.approx(4 * b.c, abs=4 * np.spacing(abs(lam)))


def test_bracket_index_decreases_as_s0_grows():
    # stated property: n0 is finite and does not grow with s0
    n0 = []
    for mu in (1.87, 1.88, 1.9, 1.95, 1.99):
        s0 = s0_of_mu(mu)
        n0.append(brackets(ladder(ExtensionBeta(1j), s0, range(-40, 60)), mu).n0)
    assert all(b <= a for a, b in zip(n0, n0[1:])), f"n0 by increasing s0: {n0}"


def test_h_level_examples(mach):
    assert h_level(1.0, 1.0) == -1.0
    assert h_level(2.0, 1.0) == -0.25
    assert h_level(-3.0, 1.5) == -0.25
    with pytest.raises(ValueError):
        h_level(0.0, 1.0)
    with pytest.raises(ValueError):
        h_level(1.0, 0.0)


def test_h_level_accumulates_at_zero(mach):
    lad = ladder(ExtensionBeta(1j), mach.s0, range(0, 30))
    e = h_level(lad.values, 1.0)
    assert np.all(e < 0)
    assert np.allclose(e[1:] / e[:-1], np.exp(-2 * np.pi / mach.s0), rtol=1e-12, atol=0)
    assert abs(e[-1]) < abs(e[0]) * 1e-30
