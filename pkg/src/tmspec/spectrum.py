"""
Self-adjoint extensions, the negative eigenvalue ladder, an independent
determinant-based spectrum detector, perturbation brackets, and the map to
three-body energies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np
from scipy.optimize import brentq

from .cauchy import CauchyMachinery
from .eigen import EigenParams, PoleResidues, b_lambda, residues, residue_stencil
from .errors import DetectorMismatchError
from .kernels import m1_symbol_sup

TWO_PI = 2.0 * np.pi
_UNIT_TOL = 1e-14


@dataclass(frozen=True)
class ExtensionBeta:
    """Unit-modulus extension parameter; the input is normalised on construction."""

    beta: complex

    def __post_init__(self):
        b = complex(self.beta)
        if b == 0 or not np.isfinite(b):
            raise ValueError("beta must be a finite nonzero complex number")
        object.__setattr__(self, "beta", b / abs(b))

    @classmethod
    def from_angle(cls, angle: float) -> "ExtensionBeta":
        return cls(complex(np.cos(angle), np.sin(angle)))


@dataclass(frozen=True)
class LadderResult:
    """Two-sided geometric ladder lambda_n = lambda0 ratio^n."""

    beta: ExtensionBeta
    s0: float
    eta: float
    gamma: complex
    lambda0: float
    ratio: float
    entries: tuple[tuple[int, float], ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([lam for _, lam in self.entries])


@dataclass(frozen=True)
class BracketSet:
    """Intervals Delta_n = (lambda_n - 2c, lambda_n + 2c) and the gaps between them."""

    c: float
    brackets: tuple[tuple[int, float, float], ...]
    gaps: tuple[tuple[int, float, float], ...]
    n0: int
    kappa: float


def gamma_eta(beta: ExtensionBeta, s0: float) -> tuple[complex, float]:
    """
    gamma = (1 + i beta e^(pi s0)) / (e^(pi s0) + i beta) and eta = arg gamma in (0, 2 pi].
    """
    if not s0 > 0:
        raise ValueError("s0 must be positive")
    b = beta.beta
    q = np.exp(-np.pi * s0)
    gamma = complex((q + 1j * b) / (1.0 + 1j * b * q))
    if abs(abs(gamma) - 1.0) > _UNIT_TOL:
        raise ArithmeticError(f"|gamma| = {abs(gamma)!r} deviates from 1")
    eta = float(np.mod(np.angle(gamma), TWO_PI))
    return gamma, (TWO_PI if eta == 0.0 else eta)


def ladder_anchor(eta: float, s0: float) -> float:
    """lambda_0 = -exp(-eta / (2 s0)), the ladder entry with n = 0."""
    return -float(np.exp(-eta / (2.0 * s0)))


def ladder_anchor_alternative(eta: float, s0: float) -> float:
    """The competing anchor -exp(-eta) / (2 s0); kept only to be refuted by the detector."""
    return -float(np.exp(-eta) / (2.0 * s0))


def ladder(beta: ExtensionBeta, s0: float, n_range: Iterable[int]) -> LadderResult:
    """
    Negative eigenvalues of the extension: |lambda_n| = exp(-(eta - 2 pi n) / (2 s0)).

    These are exactly the solutions of exp(-2 i s0 ln|lambda|) = gamma.
    """
    gamma, eta = gamma_eta(beta, s0)
    lam0 = ladder_anchor(eta, s0)
    ns = sorted(set(int(n) for n in n_range))
    entries = tuple((n, -float(np.exp((-eta + TWO_PI * n) / (2.0 * s0)))) for n in ns)
    return LadderResult(beta, float(s0), eta, gamma, lam0, float(np.exp(np.pi / s0)), entries)


def phase_condition_residual(lam: float, beta: ExtensionBeta, s0: float) -> float:
    """|exp(-2 i s0 ln|lambda|) - gamma|; zero exactly on the ladder."""
    gamma, _ = gamma_eta(beta, s0)
    return float(abs(np.exp(-2j * s0 * np.log(abs(lam))) - gamma))


@dataclass(frozen=True)
class ResolventSystem:
    """
    2x2 system for (C1, C0): C1 res G^lambda - C0 res(G^i + beta G^-i) = -res L^lambda
    at w+ (first row) and w- (second row).
    """

    lam: float
    matrix: np.ndarray
    det: complex
    p_term: complex
    q_term: complex
    rhs_builder: Callable[[Callable], np.ndarray]

    def solve(self, source: Callable) -> np.ndarray:
        return np.linalg.solve(self.matrix, self.rhs_builder(source))


def _deficiency_residues(beta: ExtensionBeta, mach: CauchyMachinery) -> tuple[complex, complex]:
    r_i = residues(EigenParams.create(1j, mach), mach)
    r_mi = residues(EigenParams.create(-1j, mach), mach)
    return (r_i.res_plus + beta.beta * r_mi.res_plus, r_i.res_minus + beta.beta * r_mi.res_minus)


def source_residues(p: EigenParams, source: Callable, mach: CauchyMachinery,
                    y_range: tuple[float, float] = (-30.0, 5.0)) -> tuple[complex, complex]:
    """
    Residues at w+- of L(w) = B(w) / (2 pi i lambda*) int_0^inf b(x) / (x - w) dx,
    b = source / B_+, by circle-contour quadrature.
    """
    x_gl, w_gl = np.polynomial.legendre.leggauss(16)
    edges = np.arange(y_range[0], y_range[1] + 0.5)
    a, bnd = edges[:-1, None], edges[1:, None]
    y = (0.5 * (bnd - a) * x_gl + 0.5 * (a + bnd)).ravel()
    wy = (0.5 * (bnd - a) * w_gl).ravel()
    x = np.exp(y)
    density = np.asarray(source(x), dtype=complex) / b_lambda(x + 0j, p, mach, coast="upper")
    out = []
    for pole in (p.w_plus, p.w_minus):
        circle, dz, ray, pts, K, L = residue_stencil(pole, mach)
        n_c = circle.size
        Lc, Kc = L[:n_c], K[:n_c]
        B = np.exp(p.sigma * Lc + Kc) / (Lc / TWO_PI - p.s0 - 0.5j)
        cauchy = (wy * density * x) @ (1.0 / (x[:, None] - circle[None, :]))
        vals = B * cauchy / (TWO_PI * 1j * p.lambda_star)
        out.append(complex(np.mean(vals * dz)))
    return out[0], out[1]


def resolvent_system(lam: float, beta: ExtensionBeta, mach: CauchyMachinery) -> ResolventSystem:
    """Assemble the residue matrix at a negative lambda; det = p_term - q_term."""
    if not lam < 0:
        raise ValueError("the resolvent system is posed for lambda < 0")
    p = EigenParams.create(lam, mach)
    g: PoleResidues = residues(p, mach)
    d_plus, d_minus = _deficiency_residues(beta, mach)
    matrix = np.array([[g.res_plus, -d_plus], [g.res_minus, -d_minus]], dtype=complex)
    p_term = d_plus * g.res_minus
    q_term = d_minus * g.res_plus

    def rhs_builder(source: Callable) -> np.ndarray:
        rp, rm = source_residues(p, source, mach)
        return -np.array([rp, rm], dtype=complex)

    return ResolventSystem(float(lam), matrix, complex(p_term - q_term), complex(p_term),
                           complex(q_term), rhs_builder)


def _pq_phase(log_abs_lam: float, beta: ExtensionBeta, mach: CauchyMachinery) -> float:
    sysm = resolvent_system(-float(np.exp(log_abs_lam)), beta, mach)
    return float(np.angle(sysm.p_term / sysm.q_term))


def detect_spectrum(beta: ExtensionBeta, lambda_range: tuple[float, float], mach: CauchyMachinery,
                    points_per_period: int = 32) -> list[float]:
    """
    Negative lambda in ``lambda_range`` where the residue determinant vanishes.

    Since |p_term| = |q_term|, det / (2 i sqrt(p_term q_term)) = sin(phi/2) with
    phi the continuous phase of p_term / q_term; its sign changes bracket the
    zeros, which are refined on the principal phase.
    """
    lo, hi = sorted(lambda_range)
    if not hi < 0:
        raise ValueError("lambda_range must be negative")
    u_lo, u_hi = np.log(-hi), np.log(-lo)
    step = (np.pi / mach.s0) / points_per_period
    u = np.linspace(u_lo, u_hi, max(3, int(np.ceil((u_hi - u_lo) / step)) + 1))
    phase = np.unwrap([_pq_phase(x, beta, mach) for x in u])
    indicator = np.sin(0.5 * phase)
    found = []
    f = lambda x: _pq_phase(x, beta, mach)  # noqa: E731
    for i in np.nonzero(np.sign(indicator[:-1]) * np.sign(indicator[1:]) < 0)[0]:
        f_lo, f_hi = f(u[i]), f(u[i + 1])
        if not f_lo * f_hi < 0:
            raise DetectorMismatchError(f"phase of the determinant is under-resolved near lambda={-np.exp(u[i]):.6g}")
        root = brentq(f, u[i], u[i + 1], xtol=1e-13, rtol=1e-15)
        found.append(-float(np.exp(root)))
    for i in np.nonzero(indicator == 0)[0]:
        found.append(-float(np.exp(u[i])))
    return sorted(set(found))


def cross_validate(beta: ExtensionBeta, mach: CauchyMachinery, n_range=range(-3, 4),
                   rtol: float = 1e-6) -> dict:
    """
    Compare detector zeros with the ladder on n_range; raises on any missing
    or spurious zero.
    """
    lad = ladder(beta, mach.s0, n_range)
    vals = lad.values
    margin = np.sqrt(lad.ratio)
    found = np.array(detect_spectrum(beta, (vals.min() * margin, vals.max() / margin), mach))
    if found.size != vals.size:
        raise DetectorMismatchError(f"detector found {found.size} zeros, ladder has {vals.size}")
    rel = np.abs(np.sort(found) - np.sort(vals)) / np.abs(np.sort(vals))
    if np.max(rel) > rtol:
        raise DetectorMismatchError(f"detector and ladder differ by {np.max(rel):.3e} relative")
    return {"ladder": lad, "detected": np.sort(found), "max_rel_error": float(np.max(rel))}


def brackets(lad: LadderResult, mu: float) -> BracketSet:
    """
    Brackets of half-width c = sup of the bounded part's symbol around each entry.

    n0 is the least n with lambda_(n+1) + 2c < lambda_n - 2c; kappa is the top
    of the first bracket at or after n0 that lies in the negative half-line.
    """
    c = m1_symbol_sup(mu)
    A, r = abs(lad.lambda0), lad.ratio
    n0 = int(np.floor(np.log(4.0 * c / (A * (r - 1.0))) / np.log(r))) + 1
    n1 = max(n0, int(np.floor(np.log(2.0 * c / A) / np.log(r))) + 1)
    kappa = -A * r**n1 + 2.0 * c
    ent = dict(lad.entries)
    brs = tuple((n, lam - 2 * c, lam + 2 * c) for n, lam in lad.entries)
    gaps = tuple((n, ent[n + 1] + 2 * c, ent[n] - 2 * c) for n, _ in lad.entries if n + 1 in ent)
    for n, g_lo, g_hi in gaps:
        if n >= n0 and not g_lo < g_hi:
            raise ArithmeticError(f"brackets {n} and {n + 1} overlap although n >= n0 = {n0}")
    if not kappa < 0:
        raise ArithmeticError("kappa must be negative")
    return BracketSet(c, brs, gaps, n0, float(kappa))


def h_level(lam, eps):
    """Three-body energy -(lambda / eps)^(-2)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam == 0) or eps == 0:
        raise ValueError("lambda and eps must be nonzero")
    out = -((lam / eps) ** -2.0)
    return float(out) if out.ndim == 0 else out
