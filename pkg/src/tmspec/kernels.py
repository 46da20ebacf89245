"""
Analytic symbols of the l=1 three-body operator.

The kernel Lambda(z) is evaluated on the strip 0 <= Im z <= 1 by Gauss-Legendre
quadrature after the substitution x = (2/mu) sin(u), which removes the
1/cos v(x) endpoint singularity for every mu in (0, 2):

    Lambda(z) = (4/mu^2) int_0^V sin(u) sinh(u zeta) / sinh(pi zeta / 2) du,

with zeta = z - i/2 and V = arcsin(mu/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import QuadratureError

TWO_PI_SQ = 2.0 * np.pi**2

# Below this |zeta| the ratio sinh(u zeta)/sinh(pi zeta/2) uses its Taylor series.
_SMALL_ZETA = 1e-6
_STRIP_SLACK = 1e-12


@dataclass(frozen=True)
class MassParams:
    """Mass m of the third particle and the reduced parameter mu = 2/(m+1)."""

    m: float
    mu: float

    def __post_init__(self):
        if not (self.m > 0 and 0 < self.mu < 2):
            raise ValueError(f"need m > 0 and 0 < mu < 2, got m={self.m}, mu={self.mu}")

    @classmethod
    def from_m(cls, m: float) -> "MassParams":
        m = float(m)
        if not m > 0:
            raise ValueError(f"mass must be positive, got {m}")
        return cls(m=m, mu=2.0 / (m + 1.0))

    @classmethod
    def from_mu(cls, mu: float) -> "MassParams":
        mu = float(mu)
        if not 0 < mu < 2:
            raise ValueError(f"mu must lie in (0, 2), got {mu}")
        return cls(m=2.0 / mu - 1.0, mu=mu)


@dataclass(frozen=True)
class StripPoint:
    """A point of the closed strip 0 <= Im z <= 1."""

    z: complex

    def __post_init__(self):
        if not (-_STRIP_SLACK <= complex(self.z).imag <= 1 + _STRIP_SLACK):
            raise ValueError(f"{self.z} is outside the strip 0 <= Im z <= 1")


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Tolerances and grid parameters shared by all integrals.

    Parameters
    ----------
    abs_tol, rel_tol : float
        Convergence criterion |I_2n - I_n| <= abs_tol + rel_tol |I_2n|.
    max_subdivisions : int
        Upper bound on the number of panels in adaptive quadrature.
    tail_cutoff_X : float
        x beyond which the asymptotic part of Ln a(x) is integrated analytically.
    pv_epsilon : float
        Half-width in ln x of the window where principal values use subtraction.
    grid_points_per_decade : int
        Density of the log-spaced master grid of a(x).
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 60
    tail_cutoff_X: float = 1e6
    pv_epsilon: float = 1.0
    grid_points_per_decade: int = 64

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.pv_epsilon > 0):
            raise ValueError("tolerances must be strictly positive")
        if not self.tail_cutoff_X > 1:
            raise ValueError("tail_cutoff_X must exceed 1")
        if self.max_subdivisions < 2 or self.grid_points_per_decade < 1:
            raise ValueError("max_subdivisions >= 2 and grid_points_per_decade >= 1 required")

    def halved(self) -> "QuadratureConfig":
        """Same configuration with both tolerances halved."""
        return QuadratureConfig(self.abs_tol / 2, self.rel_tol / 2, self.max_subdivisions,
                                self.tail_cutoff_X, self.pv_epsilon, self.grid_points_per_decade)


DEFAULT_CONFIG = QuadratureConfig()

_GL_ORDER = 20


def sqrt_term(mu: float) -> float:
    """sqrt(1 - (mu/2)^2)."""
    return float(np.sqrt(1.0 - 0.25 * mu * mu))


def _check_mu(mu: float) -> None:
    if not 0 < mu < 2:
        raise ValueError(f"mu must lie in (0, 2), got {mu}")


def v(x, mu: float):
    """arcsin(mu x / 2) for x in [0, 1]."""
    _check_mu(mu)
    x = np.asarray(x, dtype=float)
    arg = 0.5 * mu * x
    if np.any(x < 0) or np.any(arg >= 1):
        raise ValueError("v(x) requires 0 <= x and mu x / 2 < 1")
    out = np.arcsin(arg)
    return float(out) if out.ndim == 0 else out


def _sinh_ratio(u: np.ndarray, zeta: np.ndarray) -> np.ndarray:
    """sinh(u zeta)/sinh(pi zeta/2) without overflow; u and zeta broadcast."""
    u, zeta = np.broadcast_arrays(u, zeta)
    out = np.empty(u.shape, dtype=complex)
    az = np.abs(zeta)
    tiny = az < _SMALL_ZETA
    big = az >= 1.0
    mid = ~(tiny | big)
    if tiny.any():
        uu, zz = u[tiny], zeta[tiny]
        out[tiny] = (2.0 * uu / np.pi) * (1.0 + zz * zz * (uu * uu - np.pi**2 / 4.0) / 6.0)
    if mid.any():
        out[mid] = np.sinh(u[mid] * zeta[mid]) / np.sinh(0.5 * np.pi * zeta[mid])
    if big.any():
        zz = zeta[big]
        zz = np.where(zz.real < 0, -zz, zz)  # the ratio is even in zeta
        uu = u[big]
        out[big] = (np.exp((uu - 0.5 * np.pi) * zz) * (-np.expm1(-2.0 * uu * zz))
                    / (-np.expm1(-np.pi * zz)))
    return out


@lru_cache(maxsize=256)
def _panel_rule(upper: float, n_panels: int):
    x, w = np.polynomial.legendre.leggauss(_GL_ORDER)
    edges = np.linspace(0.0, upper, n_panels + 1)
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    nodes = (mid + half * x).ravel()
    weights = (half * w).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _lambda_level(zeta: np.ndarray, upper: float, n_panels: int) -> np.ndarray:
    nodes, weights = _panel_rule(upper, n_panels)
    vals = np.sin(nodes)[None, :] * _sinh_ratio(nodes[None, :], zeta[:, None])
    return vals @ weights


def lambda_fn(z, mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """
    Kernel Lambda(z) on the strip, vectorised over z.

    Parameters
    ----------
    z : complex or array_like
        Points with 0 <= Im z <= 1.
    mu : float
        Reduced mass parameter in (0, 2).
    cfg : QuadratureConfig
        Tolerances of the panel-doubling Gauss-Legendre rule.

    Returns
    -------
    complex or ndarray
    """
    _check_mu(mu)
    zarr = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(zarr.imag < -_STRIP_SLACK) or np.any(zarr.imag > 1 + _STRIP_SLACK):
        raise ValueError("lambda_fn requires 0 <= Im z <= 1")
    zeta = zarr.ravel() - 0.5j
    upper = float(np.arcsin(0.5 * mu))
    scale = 4.0 / (mu * mu)

    out = np.empty(zeta.shape, dtype=complex)
    todo = np.arange(zeta.size)
    prev = _lambda_level(zeta, upper, 1)
    n_panels = 1
    while todo.size:
        n_panels *= 2
        if n_panels > cfg.max_subdivisions:
            raise QuadratureError(
                f"kernel quadrature not converged with {n_panels // 2} panels at {todo.size} points")
        cur = _lambda_level(zeta[todo], upper, n_panels)
        ok = np.abs(cur - prev) <= cfg.abs_tol / scale + cfg.rel_tol * np.abs(cur)
        out[todo[ok]] = cur[ok]
        todo, prev = todo[~ok], cur[~ok]
    out = (scale * out).reshape(zarr.shape)
    return complex(out[0]) if np.ndim(z) == 0 else out


def n_fn(z, mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Symbol N(z) = 2 pi^2 (sqrt(1 - mu^2/4) - Lambda(z))."""
    return TWO_PI_SQ * (sqrt_term(mu) - lambda_fn(z, mu, cfg))


def _real_restriction(z, mu, cfg, where: str):
    vals = np.asarray(n_fn(z, mu, cfg))
    scale = np.maximum(1.0, np.abs(vals))
    if np.any(np.abs(vals.imag) > 10 * (cfg.abs_tol * TWO_PI_SQ + cfg.rel_tol * scale)):
        raise QuadratureError(f"N is not real on {where}: max |Im N| = {np.abs(vals.imag).max():.3e}")
    out = vals.real
    return float(out) if out.ndim == 0 else out


def n_on_midline(s, mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Real values N(i/2 + s) on the line Im z = 1/2."""
    return _real_restriction(np.asarray(s, dtype=float) + 0.5j, mu, cfg, "Im z = 1/2")


def n_on_imag_axis(t, mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Real values N(i t) on the segment 0 <= t <= 1."""
    return _real_restriction(1j * np.asarray(t, dtype=float), mu, cfg, "Re z = 0")


def branch_log(w, coast: Optional[str] = None):
    """
    Logarithm with imaginary part in (0, 2 pi].

    For w on the positive axis the coast tag selects Im = 0 ('upper') or
    Im = 2 pi ('lower'); it is required there.
    """
    warr = np.asarray(w, dtype=complex)
    if np.any(warr == 0):
        raise ValueError("w = 0 has no logarithm")
    on_cut = (warr.imag == 0) & (warr.real > 0)
    L = np.log(warr)
    L = np.where(L.imag <= 0, L + 2j * np.pi, L)
    if np.any(on_cut):
        if coast == "upper":
            L = np.where(on_cut, np.log(np.abs(warr)) + 0j, L)
        elif coast != "lower":
            raise ValueError("points on the positive axis need coast='upper' or 'lower'")
    return complex(L) if L.ndim == 0 else L


def n_star_w(w, mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG, coast: Optional[str] = None):
    """Normalised symbol N*(w) = 1 - Lambda(ln w / 2 pi)/sqrt(1 - mu^2/4)."""
    z = branch_log(w, coast) / (2.0 * np.pi)
    return 1.0 - lambda_fn(z, mu, cfg) / sqrt_term(mu)


def n_star_lower(x, mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Lower-coast values N*_-(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    return 1.0 - lambda_fn(np.log(x) / (2.0 * np.pi) + 1j, mu, cfg) / sqrt_term(mu)


def q0(mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Lambda(0)."""
    val = lambda_fn(0.0, mu, cfg)
    return float(val.real)


def q1(mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Lambda(i/2) by quadrature."""
    val = lambda_fn(0.5j, mu, cfg)
    return float(val.real)


def q1_closed(mu: float) -> float:
    """Lambda(i/2) in closed form, (8/(pi mu^2)) (mu/2 - arcsin(mu/2) sqrt(1 - mu^2/4))."""
    if not 0 < mu <= 2:
        raise ValueError(f"mu must lie in (0, 2], got {mu}")
    c = np.sqrt(max(0.0, 1.0 - 0.25 * mu * mu))
    return float(8.0 / (np.pi * mu * mu) * (0.5 * mu - np.arcsin(0.5 * mu) * c))


def m1_symbol(r, mu: float):
    """Multiplier 2 pi^2 (sqrt(c^2 r^2 + 1) - c r) of the bounded part, c = sqrt(1 - mu^2/4)."""
    _check_mu(mu)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("m1_symbol requires r >= 0")
    c = sqrt_term(mu)
    out = TWO_PI_SQ / (np.sqrt(c * c * r * r + 1.0) + c * r)
    return float(out) if out.ndim == 0 else out


def m1_symbol_sup(mu: float) -> float:
    """Supremum of m1_symbol over r >= 0, attained at r = 0."""
    return m1_symbol(0.0, mu)
