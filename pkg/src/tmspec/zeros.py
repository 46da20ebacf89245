"""Zero pair z+- of N(z) in the strip and its image in the w-plane."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .constants import CriticalConstants, Regime, classify, critical_constants
from .errors import BracketError, NoZerosError, RegimeError
from .kernels import (DEFAULT_CONFIG, QuadratureConfig, lambda_fn, n_fn, n_on_imag_axis,
                      n_on_midline, sqrt_term)

_ROOT_XTOL = 1e-14
_MAX_BRACKET = 2.0**12


@dataclass(frozen=True)
class ZeroData:
    """
    Zeros of N(z) and their images w = exp(2 pi z).

    ``z_minus`` is built as ``1j - z_plus`` so that the pair sums to i exactly.
    """

    regime: Regime
    z_plus: complex
    z_minus: complex
    t0: Optional[float]
    s0: Optional[float]
    w_plus: complex
    w_minus: complex

    def residuals(self, mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[float, float]:
        """|N(z+)| and |N(z-)|."""
        return abs(n_fn(self.z_plus, mu, cfg)), abs(n_fn(self.z_minus, mu, cfg))


def _decay_half_width(mu: float) -> float:
    """|s| beyond which Lambda on the strip is below 1e-17."""
    rate = 0.5 * np.pi - np.arcsin(0.5 * mu)
    return float(min(40.0 / rate, 5000.0))


def s0_of_mu(mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Positive root s0 of N(i/2 + s) for mu above mu1."""
    f = lambda s: n_on_midline(s, mu, cfg)  # noqa: E731
    if f(0.0) >= 0:
        raise RegimeError(f"N(i/2) >= 0 at mu={mu}; zeros are not on the line Im z = 1/2")
    hi = 1.0
    while f(hi) <= 0:
        hi *= 2.0
        if hi > _MAX_BRACKET:
            raise BracketError(f"no sign change of N(i/2+s) for s <= {_MAX_BRACKET}")
    lo = hi / 2.0 if hi > 1.0 else 0.0
    return float(brentq(f, lo, hi, xtol=_ROOT_XTOL, rtol=4 * np.finfo(float).eps))


def _t0_of_mu(mu: float, cfg: QuadratureConfig) -> float:
    f = lambda t: n_on_imag_axis(0.5 + t, mu, cfg)  # noqa: E731
    f_end = f(0.5)
    if f_end == 0.0:
        return 0.5
    if f(0.0) <= 0 or f_end > 0:
        raise BracketError(f"N(i/2 + i t) has no sign change on (0, 1/2] at mu={mu}")
    return float(brentq(f, 0.0, 0.5, xtol=_ROOT_XTOL, rtol=4 * np.finfo(float).eps))


def find_zeros(mu: float, constants: Optional[CriticalConstants] = None,
               cfg: QuadratureConfig = DEFAULT_CONFIG) -> ZeroData:
    """
    Locate the zero pair on its one-dimensional real restriction.

    Raises
    ------
    NoZerosError
        If mu <= mu0.
    """
    constants = constants or critical_constants(cfg)
    if mu <= constants.mu0:
        raise NoZerosError(f"mu={mu} <= mu0={constants.mu0}: N has no zeros in the strip")
    regime = classify(mu, constants)
    t0 = s0 = None
    if regime is Regime.DOUBLE_ZERO:
        t0 = s0 = 0.0
        z_plus = 0.5j
    elif regime is Regime.IMAGINARY_PAIR:
        t0 = _t0_of_mu(mu, cfg)
        z_plus = 1j * (0.5 + t0)
    else:
        s0 = s0_of_mu(mu, cfg)
        z_plus = s0 + 0.5j
    z_minus = 1j - z_plus
    if regime is Regime.REAL_LINE:
        w_plus = complex(-np.exp(2 * np.pi * s0))
        w_minus = complex(-np.exp(-2 * np.pi * s0))
    else:
        w_plus = complex(np.exp(2 * np.pi * z_plus))
        w_minus = complex(np.exp(2 * np.pi * z_minus))
    return ZeroData(regime, complex(z_plus), complex(z_minus), t0, s0, w_plus, w_minus)


def _closed_path_winding(values: np.ndarray) -> float:
    steps = np.angle(values[1:] / values[:-1])
    if np.max(np.abs(steps)) > np.pi / 4:
        raise ValueError("phase step too large; refine the contour")
    return float(steps.sum())


def strip_winding(mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
                  half_width: Optional[float] = None, points_per_unit: int = 16) -> float:
    """
    Winding number of N around the rectangle [-S, S] x [0, 1].

    Counts the zeros inside the strip by the argument principle.
    """
    S = half_width or _decay_half_width(mu)
    for _ in range(6):
        n_h = int(2 * S * points_per_unit) + 1
        n_v = 4 * points_per_unit + 1
        s = np.linspace(-S, S, n_h)
        t = np.linspace(0.0, 1.0, n_v)
        path = np.concatenate([s[:-1], S + 1j * t[:-1], s[::-1][:-1] + 1j, -S + 1j * t[::-1]])
        try:
            total = _closed_path_winding(n_fn(path, mu, cfg))
        except ValueError:
            points_per_unit *= 2
            continue
        return total / (2 * np.pi)
    raise ValueError("winding contour could not be resolved")


def lower_coast_winding(mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
                        points_per_unit: int = 32) -> float:
    """Total increment of arg N*_- along the lower coast, in radians."""
    S = _decay_half_width(mu)
    s = np.linspace(-S, S, int(2 * S * points_per_unit) + 1)
    vals = 1.0 - lambda_fn(s + 1j, mu, cfg) / sqrt_term(mu)
    steps = np.angle(vals[1:] / vals[:-1])
    if np.max(np.abs(steps)) > np.pi / 4:
        raise ValueError("phase step too large; refine the coast grid")
    return float(steps.sum())
