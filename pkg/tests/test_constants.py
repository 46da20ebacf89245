import numpy as np
import pytest

import oracles
from tmspec.constants import (CriticalConstants, Regime, classify, critical_constants, find_mu0,
                              find_mu1)
from tmspec.kernels import DEFAULT_CONFIG, q0, q1, sqrt_term

# frozen from the 30-digit oracle (tests/oracles.py)
MU0_REF = 1.8497720216743703
MU1_REF = 1.8630790239832207


def test_frozen_oracle_values_are_current():
    assert oracles.mu0() == pytest.approx(MU0_REF, abs=1e-15)
    assert oracles.mu1() == pytest.approx(MU1_REF, abs=1e-15)


def test_thresholds_match_oracle(constants):
    assert constants.mu0 == pytest.approx(MU0_REF, abs=1e-12)
    assert constants.mu1 == pytest.approx(MU1_REF, abs=1e-12)
    assert abs(sqrt_term(constants.mu0) - q0(constants.mu0)) < 1e-10


def test_ordering_and_masses(constants):
    c = constants
    assert 0 < c.mu0 < c.mu1 < 2
    assert 0 < c.m1 < c.m0
    assert c.m0 == pytest.approx(2 / c.mu0 - 1, rel=1e-15)
    assert c.m1 == pytest.approx(2 / c.mu1 - 1, rel=1e-15)


def test_threshold_functions_change_sign():
    assert sqrt_term(1e-3) - q0(1e-3) > 0
    assert sqrt_term(2 - 1e-9) - q0(2 - 1e-9) < 0
    assert sqrt_term(1e-3) - q1(1e-3) > 0
    assert sqrt_term(2 - 1e-12) - q1(2 - 1e-12) == pytest.approx(-2 / np.pi, abs=1e-5)


def test_tolerance_halving_is_stable(constants):
    half = DEFAULT_CONFIG.halved()
    assert abs(find_mu0(half) - constants.mu0) < 10 * DEFAULT_CONFIG.abs_tol
    assert abs(find_mu1(half) - constants.mu1) < 10 * DEFAULT_CONFIG.abs_tol


def test_classify(constants):
    c = constants
    assert classify(c.mu0 / 2, c) is Regime.SELF_ADJOINT
    assert classify((c.mu0 + c.mu1) / 2, c) is Regime.IMAGINARY_PAIR
    assert classify((c.mu1 + 2) / 2, c) is Regime.REAL_LINE
    assert classify(c.mu1 + 0.5e-9, c) is Regime.DOUBLE_ZERO
    assert classify(c.mu1 - 0.5e-9, c) is Regime.DOUBLE_ZERO
    with pytest.raises(ValueError):
        classify(2.0, c)


def test_classification_is_monotone(constants):
    order = [Regime.SELF_ADJOINT, Regime.IMAGINARY_PAIR, Regime.DOUBLE_ZERO, Regime.REAL_LINE]
    ranks = [order.index(classify(mu, constants)) for mu in np.linspace(0.01, 1.999, 4001)]
    assert ranks == sorted(ranks)


def test_constants_invariant():
    with pytest.raises(ValueError):
        CriticalConstants.from_mu(1.9, 1.8)


def test_cached_per_config():
    assert critical_constants() is critical_constants()
