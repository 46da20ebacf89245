"""
Eigenfunctions G^lambda of the adjoint on the cut plane, their closed-form
moduli, boundary traces, deficiency norms, and residues at the poles w+-.

    G^lambda(w) = w^sigma / (h(w) (w - w-)) exp K(w),
    sigma = (theta - i ln|lambda*|) / 2 pi,

with every power taken on the (0, 2 pi] branch of ln w.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .cauchy import CauchyMachinery, h_fn, k_boundary, k_reg
from .errors import ResidueMismatchError
from .kernels import TWO_PI_SQ, branch_log, lambda_fn, n_star_lower, n_star_w, sqrt_term
from .mellin import SampledFunction

TWO_PI = 2.0 * np.pi
FOUR_PI_SQ = TWO_PI**2

RESIDUE_RTOL = 1e-6
_CONTOUR_POINTS = 64
_CONTOUR_RADIUS = 0.3
_LIMIT_RADII = 0.2 * 0.5 ** np.arange(8)
_POLE_GUARD = 1e-12


@dataclass(frozen=True)
class EigenParams:
    """Spectral parameter lambda = |lambda| e^(i theta), 0 < theta < 2 pi, with derived constants."""

    lam: complex
    theta: float
    lambda_star: complex
    mu: float
    s0: float
    w_plus: float
    w_minus: float

    @classmethod
    def create(cls, lam: complex, mach: CauchyMachinery) -> "EigenParams":
        lam = complex(lam)
        if lam == 0:
            raise ValueError("lambda = 0 is excluded")
        theta = float(np.mod(np.angle(lam), TWO_PI))
        if not 0 < theta < TWO_PI:
            raise ValueError("lambda must lie off the positive semiaxis")
        return cls(lam, theta, lam / (TWO_PI_SQ * sqrt_term(mach.mu)), mach.mu, mach.s0,
                   mach.w_plus, mach.w_minus)

    @property
    def sigma(self) -> complex:
        return (self.theta - 1j * np.log(abs(self.lambda_star))) / TWO_PI


@dataclass(frozen=True)
class PoleResidues:
    """Residues at w+ and w-, with the two numerical estimates kept for audit."""

    res_plus: complex
    res_minus: complex
    limit: tuple[complex, complex]
    contour: tuple[complex, complex]

    @property
    def discrepancy(self) -> float:
        return max(abs(self.limit[i] - self.contour[i]) / abs(self.contour[i]) for i in range(2))


def _as_points(w) -> np.ndarray:
    return np.atleast_1d(np.asarray(w, dtype=complex)).ravel()


def _shape_like(out: np.ndarray, w):
    out = out.reshape(np.shape(w))
    return complex(out) if out.ndim == 0 else out


def _check_poles(w: np.ndarray, p: EigenParams, which=("plus", "minus")) -> None:
    for name in which:
        pole = p.w_plus if name == "plus" else p.w_minus
        if np.any(np.abs(w - pole) <= _POLE_GUARD * abs(pole)):
            raise ValueError(f"evaluation at the pole w_{name}")


def _b_core(w: np.ndarray, p: EigenParams, mach: CauchyMachinery, coast: Optional[str]) -> np.ndarray:
    """w^sigma / h(w) exp K(w)."""
    if coast is None:
        L = branch_log(w)
        K = k_reg(w, mach)
    else:
        if np.any(w.imag != 0) or np.any(w.real <= 0):
            raise ValueError("a coast tag needs points on the positive axis")
        L = branch_log(w, coast)
        K = k_boundary(w.real, coast, mach)
    h = L / TWO_PI - p.s0 - 0.5j
    return np.exp(p.sigma * L + K) / h


def g_lambda(w, p: EigenParams, mach: CauchyMachinery, coast: Optional[str] = None):
    """
    G^lambda(w) off the cut, or its boundary value on the given coast.

    Parameters
    ----------
    w : complex or array_like
        Points of the cut plane; real positive points need ``coast``.
    coast : {'upper', 'lower'}, optional
    """
    pts = _as_points(w)
    _check_poles(pts, p)
    return _shape_like(_b_core(pts, p, mach, coast) / (pts - p.w_minus), w)


def b_lambda(w, p: EigenParams, mach: CauchyMachinery, coast: Optional[str] = None):
    """B^lambda(w) = (w - w-) G^lambda(w), analytic at w-."""
    pts = _as_points(w)
    _check_poles(pts, p, ("plus",))
    return _shape_like(_b_core(pts, p, mach, coast), w)


def _ln_abs_n_star_negative_axis(v: np.ndarray, mu: float) -> np.ndarray:
    """Ln|N*(-e^v)|; N* is real on the negative axis."""
    vals = 1.0 - lambda_fn(v / TWO_PI + 0.5j, mu) / sqrt_term(mu)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(vals.real))


def _poisson_exponent(w: complex, mach: CauchyMachinery) -> float:
    """(1/pi) int_{-inf}^0 Ln|N*(s)| Im w / |s - w|^2 ds, in the variable s = -e^v."""
    r = abs(w)
    lr = np.log(r)
    v_sing = [np.log(-mach.w_plus), np.log(-mach.w_minus)]
    lo, hi = lr - 60.0, lr + 60.0
    width = max(1e-3, abs(np.pi - np.mod(np.angle(w), TWO_PI)))
    pts = list(np.arange(np.floor(lo), hi + 1.0)) + [lr] + v_sing
    for vs in v_sing:
        pts += [vs - 2.0**-k for k in range(1, 31)] + [vs + 2.0**-k for k in range(1, 31)]
    k = 0
    while width * 2.0**k < 2.0:
        pts += [lr - width * 2.0**k, lr + width * 2.0**k]
        k += 1
    edges = np.unique(np.clip(pts, lo, hi))
    x, wt = np.polynomial.legendre.leggauss(20)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (b - a) * x + 0.5 * (a + b)).ravel()
    weights = (0.5 * (b - a) * wt).ravel()
    s = -np.exp(nodes)
    kernel = w.imag * np.exp(nodes) / np.abs(s - w) ** 2
    return float(np.sum(weights * _ln_abs_n_star_negative_axis(nodes, mach.mu) * kernel) / np.pi)


def abs2_closed(w, p: EigenParams, mach: CauchyMachinery):
    """
    |G^lambda(w)|^2 from its closed-form modulus, w = r e^(i psi).

    Off the negative axis this is (2 pi)^2 r^(theta/pi) |lambda*|^(psi/pi)
    exp(-P) / (|w - w-| |w - w+|), with P the Poisson integral of Ln|N*| over
    the negative axis, divided by |N*(w)| |N*(conj w)| when pi < psi < 2 pi.
    On the negative axis it reduces to (2 pi)^2 r^(theta/pi) |lambda*| /
    (|w - w+| |w - w-| |N*(w)|).
    """
    pts = _as_points(w)
    _check_poles(pts, p)
    if np.any((pts.imag == 0) & (pts.real > 0)):
        raise ValueError("closed form is for points off the cut; use trace_moduli_closed")
    out = np.empty(pts.shape)
    ls = abs(p.lambda_star)
    for i, wi in enumerate(pts):
        r = abs(wi)
        base = FOUR_PI_SQ * r ** (p.theta / np.pi) / (abs(wi - p.w_minus) * abs(wi - p.w_plus))
        if wi.imag == 0:
            out[i] = base * ls / abs(n_star_w(wi, p.mu).real)
            continue
        psi = float(np.mod(np.angle(wi), TWO_PI))
        val = base * ls ** (psi / np.pi) * np.exp(-_poisson_exponent(complex(wi), mach))
        if psi > np.pi:
            val /= abs(n_star_w(wi, p.mu)) * abs(n_star_w(np.conj(wi), p.mu))
        out[i] = val
    out = out.reshape(np.shape(w))
    return float(out) if out.ndim == 0 else out


def trace_moduli_closed(t, p: EigenParams, mach: CauchyMachinery) -> tuple[np.ndarray, np.ndarray]:
    """
    Closed forms of |G+(t)|^2 and |G-(t)|^2 on the coasts.

    |G-|^2 = |G+|^2 |lambda*|^2 / |N*_-(t)|^2, as forced by the functional
    equation N*_- G- = lambda* G+.
    """
    t = np.asarray(t, dtype=float)
    upper = FOUR_PI_SQ * t ** (p.theta / np.pi) / (np.abs(t - p.w_plus) * np.abs(t - p.w_minus))
    lower = upper * abs(p.lambda_star) ** 2 / np.abs(n_star_lower(t, p.mu)) ** 2
    return upper, lower


def boundary_traces(t_grid, p: EigenParams, mach: CauchyMachinery) -> tuple[SampledFunction, SampledFunction]:
    """Complex boundary values (G+, G-) on a t-grid."""
    t = np.asarray(t_grid, dtype=float)
    up = g_lambda(t + 0j, p, mach, coast="upper")
    lo = g_lambda(t + 0j, p, mach, coast="lower")
    return SampledFunction(t, np.atleast_1d(up), "coast"), SampledFunction(t, np.atleast_1d(lo), "coast")


def functional_equation_residual(t_grid, p: EigenParams, mach: CauchyMachinery) -> np.ndarray:
    """|N*_- G- - lambda* G+| / |lambda* G+| on a t-grid."""
    up, lo = boundary_traces(t_grid, p, mach)
    lhs = n_star_lower(up.grid, p.mu) * lo.values
    rhs = p.lambda_star * up.values
    return np.abs(lhs - rhs) / np.abs(rhs)


def deficiency_norms(mach: CauchyMachinery) -> tuple[float, float]:
    """
    Squared coast norms of the deficiency vectors at lambda = i and -i.

    Both are int_0^inf (2 pi)^2 t^(theta/pi) / (|t - w+| |t - w-|) dt / t with
    theta = pi/2 and 3 pi/2, integrated in v = ln t.
    """
    wp, wm = mach.w_plus, mach.w_minus

    def norm(power):
        f = lambda v: FOUR_PI_SQ * np.exp(power * v) / (abs(np.exp(v) - wp) * abs(np.exp(v) - wm))  # noqa: E731
        val, _ = quad(f, -120.0, 120.0, points=[np.log(-wp), np.log(-wm), 0.0],
                      limit=500, epsabs=0.0, epsrel=1e-13)
        return float(val)

    return norm(0.5), norm(1.5)


def residue_stencil(pole: float, mach: CauchyMachinery):
    key = ("stencil", pole)
    hit = mach._memo.get(key)
    if hit is None:
        rho = _CONTOUR_RADIUS * abs(pole)
        phases = np.exp(2j * np.pi * np.arange(_CONTOUR_POINTS) / _CONTOUR_POINTS)
        circle = pole + rho * phases
        ray = pole + 1j * abs(pole) * _LIMIT_RADII
        pts = np.concatenate([circle, ray])
        hit = (circle, rho * phases, ray, pts, k_reg(pts, mach), branch_log(pts))
        mach._memo[key] = hit
    return hit


def _neville_at_zero(x: np.ndarray, y: np.ndarray) -> complex:
    p = y.astype(complex).copy()
    n = len(x)
    for m in range(1, n):
        p[: n - m] = (x[m:] * p[: n - m] - x[: n - m] * p[1 : n - m + 1]) / (x[m:] - x[: n - m])
    return complex(p[0])


def _pole_residue(pole: float, p: EigenParams, mach: CauchyMachinery) -> tuple[complex, complex]:
    circle, dz, ray, pts, K, L = residue_stencil(pole, mach)
    h = L / TWO_PI - p.s0 - 0.5j
    G = np.exp(p.sigma * L + K) / (h * (pts - p.w_minus))
    n_c = circle.size
    contour = complex(np.mean(G[:n_c] * dz))
    limit = _neville_at_zero(np.abs(ray - pole), (ray - pole) * G[n_c:])
    return limit, contour


def residues(p: EigenParams, mach: CauchyMachinery, rtol: float = RESIDUE_RTOL) -> PoleResidues:
    """
    Residues of G^lambda at w+ and w-, by a shrinking-distance limit and by a
    circle contour; raises if they disagree beyond ``rtol``.
    """
    lp, cp = _pole_residue(p.w_plus, p, mach)
    lm, cm = _pole_residue(p.w_minus, p, mach)
    out = PoleResidues(cp, cm, (lp, lm), (cp, cm))
    if not out.discrepancy <= rtol:
        raise ResidueMismatchError(f"residue estimates disagree: relative gap {out.discrepancy:.3e}")
    return out


def residues_analytic(p: EigenParams, mach: CauchyMachinery) -> tuple[complex, complex]:
    """Residues from the pole structure: h has a simple zero at w+ with h' = 1/(2 pi w)."""
    kp, km = k_reg(np.array([p.w_plus, p.w_minus], dtype=complex), mach)
    Lp, Lm = branch_log(np.array([p.w_plus, p.w_minus], dtype=complex))
    res_p = TWO_PI * p.w_plus * np.exp(p.sigma * Lp + kp) / (p.w_plus - p.w_minus)
    res_m = np.exp(p.sigma * Lm + km) / (Lm / TWO_PI - p.s0 - 0.5j)
    return complex(res_p), complex(res_m)


def membership_integrals(p: EigenParams, mach: CauchyMachinery, psi_grid, step: float = 0.05,
                         exclusion: float = 0.5, v_range: tuple[float, float] = (-30.0, 30.0)) -> np.ndarray:
    """
    int |G(r e^(i psi))|^2 dr / r along rays, excluding discs of radius
    ``exclusion`` |w+-| around the poles; coasts use boundary values.
    """
    v = np.arange(v_range[0], v_range[1] + 0.5 * step, step)
    r = np.exp(v)
    out = []
    for psi in np.atleast_1d(psi_grid):
        if psi == 0.0 or psi == TWO_PI:
            vals = g_lambda(r + 0j, p, mach, coast="upper" if psi == 0.0 else "lower")
            w = r + 0j
        else:
            w = r * np.exp(1j * psi)
            keep = (np.abs(w - p.w_plus) > exclusion * abs(p.w_plus)) & \
                   (np.abs(w - p.w_minus) > exclusion * abs(p.w_minus))
            vals = np.zeros(w.shape, dtype=complex)
            vals[keep] = g_lambda(w[keep], p, mach)
        out.append(float(np.trapezoid(np.abs(vals) ** 2, v)))
    return np.array(out)
