"""
Unitary Mellin transform, the strip <-> cut-plane change of variables, and the
quadratic form of the unbounded part of the operator.

The forward transform f(s) = (2 pi)^(-1/2) int_0^inf r^(-is+1/2) phi(r) dr is
computed after r = e^u as a Fourier integral of psi(u) = e^(3u/2) phi(e^u),
using the trapezoid rule on a uniform u-grid (spectrally accurate for smooth,
exponentially decaying psi).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .kernels import DEFAULT_CONFIG, QuadratureConfig, StripPoint, branch_log, n_on_midline

_SQRT_2PI = np.sqrt(2.0 * np.pi)

U_STEP = 1.0 / 32.0
_U_START = (-40.0, 8.0)
_U_LIMIT = 400.0
_TAIL_REL = 1e-17


@dataclass(frozen=True)
class CutPlanePoint:
    """
    A point of the w-plane cut along [0, inf).

    ``coast`` ('upper' or 'lower') is required for, and only meaningful on, the
    positive real axis.
    """

    w: complex
    coast: Optional[str] = None

    def __post_init__(self):
        w = complex(self.w)
        if w == 0:
            raise ValueError("w = 0 is excluded")
        on_cut = w.imag == 0 and w.real > 0
        if on_cut and self.coast not in ("upper", "lower"):
            raise ValueError("points on the positive axis need coast='upper' or 'lower'")
        if not on_cut and self.coast is not None:
            raise ValueError("coast is only meaningful on the positive axis")

    def log(self) -> complex:
        """ln w with imaginary part in (0, 2 pi]."""
        return branch_log(self.w, self.coast)


@dataclass(frozen=True)
class SampledFunction:
    """Samples of a function on a strictly increasing real grid."""

    grid: np.ndarray
    values: np.ndarray
    interpretation: str

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be one-dimensional and of equal length")
        if grid.size > 1 and np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        if self.interpretation not in ("radial", "line", "coast"):
            raise ValueError(f"unknown interpretation {self.interpretation!r}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)


def default_s_grid() -> np.ndarray:
    """[-40, 40] at 16 points per unit."""
    return np.linspace(-40.0, 40.0, 80 * 16 + 1)


def _psi_on_u(phi: Callable, u: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", under="ignore"):
        vals = np.exp(1.5 * u) * np.asarray(phi(np.exp(u)), dtype=complex)
    vals = np.where(np.isfinite(vals), vals, np.nan)
    return vals


def _u_window(phi: Callable) -> tuple[np.ndarray, np.ndarray]:
    """Uniform u-grid wide enough that |psi| at both ends is negligible."""
    lo, hi = _U_START
    for _ in range(200):
        u = np.arange(lo, hi + 0.5 * U_STEP, U_STEP)
        psi = _psi_on_u(phi, u)
        if np.any(np.isnan(psi)):
            raise ValueError("non-decaying input: phi overflows on the quadrature grid")
        peak = np.max(np.abs(psi))
        if peak == 0:
            return u, psi
        tail = _TAIL_REL * peak
        lo_ok = np.max(np.abs(psi[:64])) <= tail
        hi_ok = np.max(np.abs(psi[-64:])) <= tail
        if lo_ok and hi_ok:
            return u, psi
        if not lo_ok:
            lo -= 8.0
        if not hi_ok:
            hi += 8.0
        if max(-lo, hi) > _U_LIMIT:
            break
    raise ValueError("non-decaying input: r^(3/2) phi(r) does not vanish at the ends of the grid")


def mellin_forward(phi: Union[Callable, SampledFunction], s_grid: Optional[np.ndarray] = None,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> SampledFunction:
    """
    Unitary Mellin transform onto the line.

    Parameters
    ----------
    phi : callable or SampledFunction
        A vectorised function of r > 0, or samples on a radial grid that is
        uniform in ln r.
    s_grid : ndarray, optional
        Output abscissae; defaults to :func:`default_s_grid`.
    """
    s = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
    if isinstance(phi, SampledFunction):
        if phi.interpretation != "radial":
            raise ValueError("expected radial samples")
        u = np.log(phi.grid)
        du = np.diff(u)
        if not np.allclose(du, du[0], rtol=1e-9, atol=0):
            raise ValueError("radial samples must be uniform in ln r")
        psi = np.exp(1.5 * u) * phi.values
        peak = np.max(np.abs(psi)) if psi.size else 0.0
        if peak and max(abs(psi[0]), abs(psi[-1])) > 1e-12 * peak:
            raise ValueError("non-decaying input: samples do not vanish at the ends")
        h = du[0]
    else:
        u, psi = _u_window(phi)
        h = U_STEP
    f = np.empty(s.shape, dtype=complex)
    for k0 in range(0, s.size, 256):
        sl = slice(k0, k0 + 256)
        f[sl] = np.exp(-1j * np.outer(s[sl], u)) @ psi
    return SampledFunction(s, f * h / _SQRT_2PI, "line")


def mellin_inverse(f: Union[Callable, SampledFunction], r_grid: np.ndarray,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> SampledFunction:
    """
    Inverse transform phi(r) = (2 pi)^(-1/2) int r^(is-3/2) f(s) ds.

    A callable ``f`` is sampled on :func:`default_s_grid`; samples must decay
    at the ends of the s-grid.
    """
    r = np.asarray(r_grid, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r_grid must be positive")
    if isinstance(f, SampledFunction):
        if f.interpretation != "line":
            raise ValueError("expected samples on the line")
        s, vals = f.grid, f.values
    else:
        s = default_s_grid()
        vals = np.asarray(f(s), dtype=complex)
    peak = np.max(np.abs(vals)) if vals.size else 0.0
    if peak and max(abs(vals[0]), abs(vals[-1])) > 1e-10 * peak:
        raise ValueError("line samples do not decay at the ends of the grid")
    ds = np.diff(s)
    weights = np.empty_like(s)
    weights[0], weights[-1] = ds[0] / 2, ds[-1] / 2
    weights[1:-1] = (ds[:-1] + ds[1:]) / 2
    u = np.log(r)
    out = np.exp(1j * np.outer(u, s)) @ (weights * vals)
    return SampledFunction(r, out * np.exp(-1.5 * u) / _SQRT_2PI, "radial")


def radial_norm_sq(phi: Callable) -> float:
    """int_0^inf |phi(r)|^2 r^2 dr by the same u-grid rule as the transform."""
    u, psi = _u_window(phi)
    return float(np.sum(np.abs(psi) ** 2) * U_STEP)


def line_norm_sq(f: SampledFunction) -> float:
    """int |f(s)|^2 ds by the trapezoid rule."""
    return float(np.trapezoid(np.abs(f.values) ** 2, f.grid))


def strip_to_plane(z) -> CutPlanePoint:
    """w = exp(2 pi z); Im z = 0 lands on the upper coast, Im z = 1 on the lower."""
    z = complex(z.z if isinstance(z, StripPoint) else z)
    StripPoint(z)
    w = complex(np.exp(2 * np.pi * z))
    if z.imag == 0:
        return CutPlanePoint(complex(w.real, 0.0), "upper")
    if z.imag == 1:
        return CutPlanePoint(complex(w.real, 0.0), "lower")
    return CutPlanePoint(w)


def plane_to_strip(w) -> StripPoint:
    """z = ln w / 2 pi with the (0, 2 pi] branch."""
    p = w if isinstance(w, CutPlanePoint) else CutPlanePoint(complex(w))
    return StripPoint(p.log() / (2 * np.pi))


def quadratic_form_m0(f: SampledFunction, mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """
    int |F(i/2 + s)|^2 N(i/2 + s) ds for samples F(i/2 + s) on an s-grid.
    """
    if f.interpretation != "line":
        raise ValueError("expected samples F(i/2 + s) on the line")
    weight = n_on_midline(f.grid, mu, cfg)
    return float(np.trapezoid(np.abs(f.values) ** 2 * weight, f.grid))
