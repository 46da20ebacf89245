"""Critical values mu0 < mu1 of the reduced mass and regime classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError
from .kernels import DEFAULT_CONFIG, QuadratureConfig, q0, q1, q1_closed, sqrt_term

DOUBLE_ZERO_TOL = 1e-9
_SCAN_POINTS = 2000
_SCAN_LO, _SCAN_HI = 1e-3, 2.0 - 1e-9
_ROOT_XTOL = 1e-12


class Regime(enum.Enum):
    SELF_ADJOINT = "SelfAdjoint"
    IMAGINARY_PAIR = "ImaginaryPairZeros"
    DOUBLE_ZERO = "DoubleZero"
    REAL_LINE = "RealLineZeros"


@dataclass(frozen=True)
class CriticalConstants:
    """Thresholds in mu and the corresponding masses m = 2/mu - 1."""

    mu0: float
    mu1: float
    m0: float
    m1: float
    tol: float = DOUBLE_ZERO_TOL

    def __post_init__(self):
        if not 0 < self.mu0 < self.mu1 < 2:
            raise ValueError(f"expected 0 < mu0 < mu1 < 2, got {self.mu0}, {self.mu1}")

    @classmethod
    def from_mu(cls, mu0: float, mu1: float, tol: float = DOUBLE_ZERO_TOL) -> "CriticalConstants":
        return cls(mu0=mu0, mu1=mu1, m0=2.0 / mu0 - 1.0, m1=2.0 / mu1 - 1.0, tol=tol)


def _scan_root(g, xtol: float) -> float:
    """Unique sign change of g on the scan grid, refined by bracketing."""
    grid = np.linspace(_SCAN_LO, _SCAN_HI, _SCAN_POINTS)
    vals = np.array([g(x) for x in grid])
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if idx.size != 1:
        raise BracketError(f"expected one sign change on the scan grid, found {idx.size}")
    i = int(idx[0])
    return float(brentq(g, grid[i], grid[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps))


def find_mu0(cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Root of sqrt(1 - mu^2/4) = Lambda(0)."""
    return _scan_root(lambda mu: sqrt_term(mu) - q0(mu, cfg), min(_ROOT_XTOL, cfg.abs_tol))


def find_mu1(cfg: QuadratureConfig = DEFAULT_CONFIG, cross_check_tol: float = 1e-9) -> float:
    """
    Root of sqrt(1 - mu^2/4) = Lambda(i/2).

    The closed form of Lambda(i/2) drives the root search; the quadrature value
    at the root must agree to ``cross_check_tol``.
    """
    mu1 = _scan_root(lambda mu: sqrt_term(mu) - q1_closed(mu), min(_ROOT_XTOL, cfg.abs_tol))
    if abs(q1(mu1, cfg) - q1_closed(mu1)) > cross_check_tol:
        raise BracketError("closed form and quadrature of Lambda(i/2) disagree at mu1")
    return mu1


@lru_cache(maxsize=8)
def critical_constants(cfg: QuadratureConfig = DEFAULT_CONFIG) -> CriticalConstants:
    """Both thresholds, cached per configuration."""
    return CriticalConstants.from_mu(find_mu0(cfg), find_mu1(cfg))


def classify(mu: float, constants: CriticalConstants) -> Regime:
    """Regime of mu relative to the thresholds."""
    if not 0 < mu < 2:
        raise ValueError(f"mu must lie in (0, 2), got {mu}")
    if abs(mu - constants.mu1) <= constants.tol:
        return Regime.DOUBLE_ZERO
    if mu < constants.mu0:
        return Regime.SELF_ADJOINT
    if mu < constants.mu1:
        return Regime.IMAGINARY_PAIR
    return Regime.REAL_LINE
