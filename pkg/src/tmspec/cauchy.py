"""
Singular-integral machinery on the cut plane.

Everything is computed in the log variable y = ln x.  The regularised Cauchy
integral

    K(w) = lim_n [ (1/2 pi i) int_0^n Ln a(x) / (x - w) dx + Ln ln n ]

becomes (1/2 pi i) int phi(y) / (1 - w e^-y) dy with phi(y) = Ln a(e^y).  For
y > Y the exact logarithm g(y) of the coast ratio h+/h- (which carries the
slowly decaying -2 pi i / y part of phi) is subtracted inside the integral;
its regularised integral together with the Ln ln n counterterm is the
elementary constant A(Y).  The result does not depend on Y.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .constants import Regime
from .errors import BranchError, RegimeError
from .kernels import DEFAULT_CONFIG, QuadratureConfig, branch_log, lambda_fn, sqrt_term
from .mellin import SampledFunction
from .zeros import find_zeros

TWO_PI = 2.0 * np.pi

_GL_ORDER = 20
_Y_LO = -80.0
_MARGIN = 40.0           # |w| must satisfy Y_LO + MARGIN <= ln|w| <= y_hi - MARGIN
_NEAR_CUT = 0.5          # angular distance to the cut below which subtraction is used
_PHI_NEGLIGIBLE = 1e-17
_Y_HI_CAP = 8000.0
_MIN_SPLIT_GAP = 1.0     # Y >= 2 pi s0 + gap keeps g(y) on the principal branch
_EXT_Y = 1e6             # extent of the extended grid used for increments

_gl_x, _gl_w = np.polynomial.legendre.leggauss(_GL_ORDER)


def _gl_on(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    return (half * _gl_x + 0.5 * (a + b)).ravel(), (half * _gl_w).ravel()


def h_fn(w, s0: float, coast: Optional[str] = None):
    """h(w) = ln w / 2 pi - s0 - i/2 with the (0, 2 pi] branch."""
    return branch_log(w, coast) / TWO_PI - s0 - 0.5j


def h_coasts(x, s0: float):
    """Coast values (h+(x), h-(x)) for x > 0."""
    u = np.log(np.asarray(x, dtype=float)) / TWO_PI - s0
    return u - 0.5j, u + 0.5j


def coast_ratio_log(y, s0: float):
    """Principal Ln(h+/h-) at x = e^y, valid for y > 2 pi s0."""
    return -2j * np.arctan(np.pi / (np.asarray(y, dtype=float) - TWO_PI * s0))


def _tail_constant(Y: float, s0: float) -> complex:
    """Regularised (1/2 pi i) int_Y^inf Ln(h+/h-) dy plus the Ln ln n counterterm."""
    v0 = Y - TWO_PI * s0
    return (v0 * np.arctan(np.pi / v0) + 0.5 * np.pi * np.log(v0 * v0 + np.pi**2)) / np.pi - 1.0


def _a_of_y(y, mu: float, s0: float, cfg: QuadratureConfig) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    n_star = 1.0 - lambda_fn(y / TWO_PI + 1j, mu, cfg) / sqrt_term(mu)
    u = y / TWO_PI - s0
    a = n_star * (u - 0.5j) / (u + 0.5j)
    if np.any(a == 0):
        raise BranchError("a(x) vanishes on the grid; zero pair and symbol are inconsistent")
    return a


def _check_principal(phase: np.ndarray, where: str) -> None:
    steps = np.diff(phase)
    if np.any(np.abs(steps) >= np.pi):
        raise BranchError(f"principal Ln a jumps by 2 pi on {where}; |arg a| reaches pi")


@dataclass(frozen=True, eq=False)
class CauchyMachinery:
    """
    Branch-checked samples of Ln a and the quadrature data behind K(w).

    Build with :func:`build_machinery`.  Instances are immutable apart from a
    private memo of boundary values, which only ever caches pure results.
    """

    mu: float
    s0: float
    x_grid: np.ndarray
    ln_a: np.ndarray
    tail_coeff: float
    cfg: QuadratureConfig
    w_plus: float
    w_minus: float
    split_y: float
    y_hi: float
    _nodes: np.ndarray = field(repr=False)
    _weights: np.ndarray = field(repr=False)
    _phi: np.ndarray = field(repr=False)
    _tail_sum: complex = field(repr=False)
    _tail_const: complex = field(repr=False)
    _memo: dict = field(default_factory=dict, repr=False)

    @property
    def c(self) -> float:
        return sqrt_term(self.mu)

    def phi(self, y) -> np.ndarray:
        """Principal Ln a(e^y)."""
        return np.log(_a_of_y(y, self.mu, self.s0, self.cfg))

    def support(self) -> tuple[float, float]:
        """Range of ln|w| where K is available."""
        return _Y_LO + _MARGIN, self.y_hi - _MARGIN


def build_machinery(mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
                    s0: Optional[float] = None) -> CauchyMachinery:
    """
    Precompute Ln a and the K(w) quadrature for mu above mu1.

    Parameters
    ----------
    s0 : float, optional
        Override of the zero abscissa; only meant for sensitivity experiments.

    Raises
    ------
    RegimeError
        If the zeros are not on the line Im z = 1/2.
    BranchError
        If the principal logarithm of a(x) is discontinuous.
    """
    if s0 is None:
        zd = find_zeros(mu, cfg=cfg)
        if zd.regime is not Regime.REAL_LINE:
            raise RegimeError(f"a(x) and K(w) need zeros on Im z = 1/2; regime is {zd.regime.value}")
        s0 = zd.s0
    s0 = float(s0)

    decades = np.arange(-8 * cfg.grid_points_per_decade, 12 * cfg.grid_points_per_decade + 1)
    y_master = decades * (np.log(10.0) / cfg.grid_points_per_decade)
    a_master = _a_of_y(y_master, mu, s0, cfg)
    ln_a = np.log(a_master)
    _check_principal(ln_a.imag, "the master grid")
    last = y_master >= y_master[-1] - np.log(10.0)
    inv = 1.0 / y_master[last]
    tail_coeff = float(np.dot(ln_a.imag[last], inv) / np.dot(inv, inv))

    split_y = max(float(np.log(cfg.tail_cutoff_X)), TWO_PI * s0 + _MIN_SPLIT_GAP)
    y_hi = np.ceil(split_y) + 2 * _MARGIN
    while abs(np.log(1.0 - lambda_fn(y_hi / TWO_PI + 1j, mu, cfg) / sqrt_term(mu))) >= _PHI_NEGLIGIBLE:
        y_hi += 20.0
        if y_hi > _Y_HI_CAP:
            raise BranchError("Ln N*_- does not decay within the supported range")
    edges = np.union1d(np.arange(_Y_LO, y_hi + 0.5), [split_y])
    nodes, weights = _gl_on(edges)
    phi = np.log(_a_of_y(nodes, mu, s0, cfg))
    _check_principal(phi.imag, "the quadrature nodes")
    beyond = nodes > split_y
    tail_sum = complex(np.sum(weights[beyond] * coast_ratio_log(nodes[beyond], s0)))
    for arr in (y_master, ln_a, nodes, weights, phi):
        arr.setflags(write=False)
    return CauchyMachinery(
        mu=float(mu), s0=s0, x_grid=np.exp(y_master), ln_a=ln_a, tail_coeff=tail_coeff,
        cfg=cfg, w_plus=-float(np.exp(TWO_PI * s0)), w_minus=-float(np.exp(-TWO_PI * s0)),
        split_y=split_y, y_hi=float(y_hi), _nodes=nodes, _weights=weights, _phi=phi,
        _tail_sum=tail_sum, _tail_const=complex(_tail_constant(split_y, s0)))


@lru_cache(maxsize=16)
def get_machinery(mu: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> CauchyMachinery:
    """Cached :func:`build_machinery` for the true zero pair."""
    return build_machinery(mu, cfg)


def a_fn(x, mach: CauchyMachinery):
    """a(x) = N*_-(x) h+(x)/h-(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("a(x) needs x > 0")
    out = _a_of_y(np.log(x), mach.mu, mach.s0, mach.cfg)
    return complex(out) if out.ndim == 0 else out


def ln_a_unwrapped(mach: CauchyMachinery) -> SampledFunction:
    """Continuous-argument Ln a on the master grid (coincides with the principal branch)."""
    phase = np.unwrap(mach.ln_a.imag)
    return SampledFunction(mach.x_grid, mach.ln_a.real + 1j * phase, "coast")


def tail_fit_relative_error(mach: CauchyMachinery) -> float:
    """(c + 2 pi)/(2 pi) for the fit arg a ~ c / ln x over the last decade of the master grid."""
    return (mach.tail_coeff + TWO_PI) / TWO_PI


def extended_y_grid(mach: CauchyMachinery, extent: float = _EXT_Y) -> np.ndarray:
    """Dense grid on the quadrature range plus geometric spacing out to |y| = extent."""
    dense = np.arange(_Y_LO, mach.y_hi + 1e-9, 0.05)
    right = np.geomspace(mach.y_hi, extent, 4000)[1:]
    left = -np.geomspace(-_Y_LO, extent, 4000)[::-1][:-1]
    return np.concatenate([left, dense, right])


def argument_increment(mach: CauchyMachinery, extent: float = _EXT_Y) -> dict:
    """
    Increment of arg a(x) over ln x in [-extent, extent].

    Beyond the quadrature range N*_- equals 1 to double precision, so a reduces
    to the elementary coast ratio there.
    """
    y = extended_y_grid(mach, extent)
    inner = (y >= _Y_LO) & (y <= mach.y_hi)
    u = y / TWO_PI - mach.s0
    a = (u - 0.5j) / (u + 0.5j)
    a[inner] = _a_of_y(y[inner], mach.mu, mach.s0, mach.cfg)
    principal = np.angle(a)
    unwrapped = np.unwrap(principal)
    return {
        "increment": float(unwrapped[-1] - unwrapped[0]),
        "arg_start": float(unwrapped[0]),
        "arg_end": float(unwrapped[-1]),
        "max_abs_arg": float(np.max(np.abs(principal))),
        "principal_continuous": bool(np.allclose(unwrapped, principal, atol=1e-12, rtol=0)),
        "min_abs_a": float(np.min(np.abs(a))),
        "max_abs_a": float(np.max(np.abs(a))),
    }


def _angular_distance_to_cut(w: np.ndarray) -> np.ndarray:
    arg = np.mod(np.angle(w), TWO_PI)
    return np.minimum(arg, TWO_PI - arg)


def _check_support(tau: np.ndarray, mach: CauchyMachinery) -> None:
    lo, hi = mach.support()
    if np.any(tau < lo) or np.any(tau > hi):
        raise ValueError(f"ln|w| must lie in [{lo}, {hi}]")


def _fast_k(w: np.ndarray, mach: CauchyMachinery) -> np.ndarray:
    out = np.empty(w.shape, dtype=complex)
    wphi = mach._weights * mach._phi
    decay = np.exp(-mach._nodes)
    for k0 in range(0, w.size, 64):
        sl = slice(k0, k0 + 64)
        ker = 1.0 / (1.0 - np.outer(w[sl], decay))
        out[sl] = ker @ wphi
    return (out - mach._tail_sum) / (TWO_PI * 1j) + mach._tail_const


def _local_edges(tau: float, dist: float, a: float, b: float, split_y: float) -> np.ndarray:
    pts = [a, b, tau]
    pts += list(np.arange(np.ceil(a), b))
    if a < split_y < b:
        pts.append(split_y)
    if dist > 0:
        step = dist
        while step < b - a:
            pts += [tau - step, tau + step]
            step *= 2.0
    pts = np.array(pts)
    pts = pts[(pts >= a) & (pts <= b)]
    return np.unique(pts)


def _near_cut_parts(w: complex, tau: float, dist: float, mach: CauchyMachinery):
    """
    Pieces of K near or on the cut: (smooth integral, phi(tau), window a, b).

    The smooth integral collects int phi k_w dy over all nodes outside [a, b],
    int (phi - phi(tau)) k_w dy over [a, b] on graded panels, and the tail
    subtraction; phi(tau) multiplies the elementary window integral of k_w.
    """
    a = max(_Y_LO, np.floor(tau - mach.cfg.pv_epsilon))
    b = min(mach.y_hi, np.ceil(tau + mach.cfg.pv_epsilon))
    nodes = mach._nodes
    outside = (nodes < a) | (nodes > b)
    ker = 1.0 / (1.0 - w * np.exp(-nodes[outside]))
    total = np.sum(mach._weights[outside] * mach._phi[outside] * ker)
    total -= mach._tail_sum
    inside_tail = (~outside) & (nodes > mach.split_y)
    total += np.sum(mach._weights[inside_tail] * coast_ratio_log(nodes[inside_tail], mach.s0))

    phi_tau = complex(mach.phi(np.array([tau]))[0])
    loc_nodes, loc_weights = _gl_on(_local_edges(tau, dist, a, b, mach.split_y))
    loc_phi = mach.phi(loc_nodes)
    diff = loc_nodes - tau
    with np.errstate(divide="ignore", invalid="ignore"):
        ker = 1.0 / (1.0 - w * np.exp(-loc_nodes))
        integrand = (loc_phi - phi_tau) * ker
    integrand = np.where(diff == 0, 0.0, integrand)
    beyond = loc_nodes > mach.split_y
    integrand[beyond] -= coast_ratio_log(loc_nodes[beyond], mach.s0)
    total += np.sum(loc_weights * integrand)
    return total, phi_tau, a, b


def _k_near(w: complex, mach: CauchyMachinery) -> complex:
    tau = float(np.log(abs(w)))
    dist = float(_angular_distance_to_cut(np.array([w]))[0])
    total, phi_tau, a, b = _near_cut_parts(w, tau, dist, mach)
    # int_a^b dy / (1 - w e^-y) = [y + Log(1 - w e^-y)]_a^b, continuous as Im w != 0
    window = (b - a) + np.log(1.0 - w * np.exp(-b)) - np.log(1.0 - w * np.exp(-a))
    return (total + phi_tau * window) / (TWO_PI * 1j) + mach._tail_const


def k_reg(w, mach: CauchyMachinery):
    """
    Regularised Cauchy integral K(w) off the cut, vectorised over w.

    Raises
    ------
    ValueError
        For w on [0, inf) or with ln|w| outside :meth:`CauchyMachinery.support`.
    """
    warr = np.atleast_1d(np.asarray(w, dtype=complex)).ravel()
    if np.any((warr.imag == 0) & (warr.real >= 0)):
        raise ValueError("w lies on the cut; use k_boundary")
    _check_support(np.log(np.abs(warr)), mach)
    dist = _angular_distance_to_cut(warr)
    out = np.empty(warr.shape, dtype=complex)
    fast = dist >= _NEAR_CUT
    if fast.any():
        out[fast] = _fast_k(warr[fast], mach)
    for i in np.nonzero(~fast)[0]:
        out[i] = _k_near(complex(warr[i]), mach)
    out = out.reshape(np.shape(w))
    return complex(out) if out.ndim == 0 else out


def k_principal_value(t, mach: CauchyMachinery):
    """Regularised principal value (1/2 pi i) PV int Ln a(x)/(x - t) dx for t > 0."""
    tarr = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
    if np.any(tarr <= 0):
        raise ValueError("t must be positive")
    taus = np.log(tarr)
    _check_support(taus, mach)
    out = np.empty(tarr.shape, dtype=complex)
    for i, (tv, tau) in enumerate(zip(tarr, taus)):
        key = float(tv)
        hit = mach._memo.get(key)
        if hit is None:
            total, phi_tau, a, b = _near_cut_parts(complex(tv), float(tau), 0.0, mach)
            # PV int_a^b dy/(1 - t e^-y) = ln(e^b - t) - ln(t - e^a)
            window = (b + np.log1p(-np.exp(tau - b))) - (tau + np.log1p(-np.exp(a - tau)))
            hit = ((total + phi_tau * window) / (TWO_PI * 1j) + mach._tail_const, phi_tau)
            mach._memo[key] = hit
        out[i] = hit[0]
    out = out.reshape(np.shape(t))
    return complex(out) if out.ndim == 0 else out


def k_boundary(t, side: str, mach: CauchyMachinery):
    """Boundary values K+-(t) = PV +- (1/2) Ln a(t) on the upper (+) or lower (-) coast."""
    if side not in ("upper", "lower"):
        raise ValueError("side must be 'upper' or 'lower'")
    pv = np.asarray(k_principal_value(t, mach))
    half = 0.5 * np.log(np.asarray(a_fn(t, mach)))
    out = pv + half if side == "upper" else pv - half
    return complex(out) if np.ndim(out) == 0 else out
