"""
Spectral analysis of the l=1 operator for two fermions and a third particle.

Modules, bottom up: ``kernels`` (symbols Lambda, N), ``constants`` (thresholds
mu0 < mu1), ``zeros`` (zero pair of N), ``mellin`` (transform and strip map),
``cauchy`` (Ln a and the regularised Cauchy integral K), ``eigen`` (adjoint
eigenfunctions), ``spectrum`` (extensions, ladder, detector, brackets),
``verify`` (property suite) and ``cli``.
"""

from .cauchy import CauchyMachinery, build_machinery, get_machinery, k_boundary, k_reg
from .constants import CriticalConstants, Regime, classify, critical_constants, find_mu0, find_mu1
from .eigen import EigenParams, PoleResidues, abs2_closed, b_lambda, g_lambda, residues
from .errors import (BracketError, BranchError, DetectorMismatchError, NoZerosError, QuadratureError,
                     RegimeError, ResidueMismatchError, TmspecError)
from .kernels import (DEFAULT_CONFIG, MassParams, QuadratureConfig, StripPoint, lambda_fn, m1_symbol,
                      m1_symbol_sup, n_fn, n_star_w, q0, q1, sqrt_term, v)
from .mellin import CutPlanePoint, SampledFunction, mellin_forward, mellin_inverse, plane_to_strip, strip_to_plane
from .spectrum import (BracketSet, ExtensionBeta, LadderResult, brackets, cross_validate, detect_spectrum,
                       gamma_eta, h_level, ladder, resolvent_system)
from .verify import VerificationReport, emit_threshold_curves, verify_all, verify_log_kernel_identity
from .zeros import ZeroData, find_zeros, s0_of_mu

__version__ = "0.1.0"

__all__ = [
    "BracketError", "BracketSet", "BranchError", "CauchyMachinery", "CriticalConstants", "CutPlanePoint",
    "DEFAULT_CONFIG", "DetectorMismatchError", "EigenParams", "ExtensionBeta", "LadderResult", "MassParams",
    "NoZerosError", "PoleResidues", "QuadratureConfig", "QuadratureError", "Regime", "RegimeError",
    "ResidueMismatchError", "SampledFunction", "StripPoint", "TmspecError", "VerificationReport", "ZeroData",
    "abs2_closed", "b_lambda", "brackets", "build_machinery", "classify", "critical_constants",
    "cross_validate", "detect_spectrum", "emit_threshold_curves", "find_mu0", "find_mu1", "find_zeros",
    "g_lambda", "gamma_eta", "get_machinery", "h_level", "k_boundary", "k_reg", "ladder", "lambda_fn",
    "m1_symbol", "m1_symbol_sup", "mellin_forward", "mellin_inverse", "n_fn", "n_star_w", "plane_to_strip",
    "q0", "q1", "residues", "resolvent_system", "s0_of_mu", "sqrt_term", "strip_to_plane", "v",
    "verify_all", "verify_log_kernel_identity",
]
