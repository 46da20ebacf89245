"""
Command-line interface: ``tmspec <subcommand> [options]``.

Output is JSON ``{"meta": ..., "data": ...}`` by default or CSV with a header
row. Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from .cauchy import get_machinery
from .constants import Regime, classify, critical_constants
from .eigen import EigenParams, boundary_traces, functional_equation_residual, trace_moduli_closed
from .errors import NoZerosError, TmspecError
from .kernels import DEFAULT_CONFIG, MassParams, QuadratureConfig
from .spectrum import ExtensionBeta, brackets, cross_validate, gamma_eta, h_level, ladder
from .verify import emit_threshold_curves, format_float, threshold_curves, verify_all
from .zeros import find_zeros

SUBCOMMANDS = ("constants", "zeros", "curve", "ladder", "detect", "hlevels", "eigenfunction", "verify")

DISCREPANCY_NOTES = (
    "ladder anchor: lambda0 = -exp(-eta/(2 s0)) solves the residue condition and is confirmed by the "
    "determinant detector; the alternative -exp(-eta)/(2 s0) is not an eigenvalue",
    "ladder indexing: lambda_(n+1)/lambda_n = exp(pi/s0), so |lambda_n| grows with n",
    "closed-form modulus of G uses exp(-P) with P the Poisson integral of Ln|N*| over the negative axis",
    "lower trace: |G-|^2 = |G+|^2 |lambda*|^2 / |N*_-|^2",
    "logarithmic kernel identity: right side is 2 pi e^(-2 psi s) / (1 + e^(-2 pi s))^2",
)

_CONFIG_FIELDS = {
    "tol_abs": "abs_tol",
    "tol_rel": "rel_tol",
    "max_subdivisions": "max_subdivisions",
    "tail_cutoff": "tail_cutoff_X",
    "pv_epsilon": "pv_epsilon",
    "points_per_decade": "grid_points_per_decade",
}


class UsageError(Exception):
    """Invalid combination of arguments (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _complex_pair(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    mass = common.add_mutually_exclusive_group()
    mass.add_argument("--mu", type=float, help="reduced parameter mu = 2/(m+1) in (0, 2)")
    mass.add_argument("--m", type=float, help="mass of the third particle, m > 0")
    common.add_argument("--out", type=Path, help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), help="output format (default: json)")
    common.add_argument("--config", type=Path, help="JSON file with option defaults; flags take precedence")
    common.add_argument("--tol-abs", type=float)
    common.add_argument("--tol-rel", type=float)
    common.add_argument("--max-subdivisions", type=int)
    common.add_argument("--tail-cutoff", type=float)
    common.add_argument("--pv-epsilon", type=float)
    common.add_argument("--points-per-decade", type=int)

    ext = _Parser(add_help=False)
    b = ext.add_mutually_exclusive_group()
    b.add_argument("--beta", type=_complex_pair, help="extension parameter as 're,im' (normalised)")
    b.add_argument("--beta-angle", type=float, help="extension parameter as an angle in radians")
    ext.add_argument("--n-min", type=int)
    ext.add_argument("--n-max", type=int)
    ext.add_argument("--eps", type=float, help="nonzero coupling of the energy map")

    parser = _Parser(prog="tmspec", description="Spectral analysis of the l=1 three-body operator.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common], help="critical values mu0, mu1, m0, m1")
    sub.add_parser("zeros", parents=[common], help="zero pair of N(z)")
    p = sub.add_parser("curve", parents=[common], help="threshold curves sqrt_term, q0, q1 against mu")
    p.add_argument("--mu-min", type=float)
    p.add_argument("--mu-max", type=float)
    p.add_argument("--points", type=int)
    sub.add_parser("ladder", parents=[common, ext], help="eigenvalue ladder with brackets")
    sub.add_parser("detect", parents=[common, ext], help="determinant zeros compared with the ladder")
    sub.add_parser("hlevels", parents=[common, ext], help="three-body energies of the ladder")
    p = sub.add_parser("eigenfunction", parents=[common], help="coast traces of G")
    p.add_argument("--lambda", dest="lam", type=_complex_pair, help="spectral parameter 're,im'")
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--points", type=int)
    p = sub.add_parser("verify", parents=[common], help="run the property suite")
    p.add_argument("--check", action="append", dest="checks", help="keep only this check (repeatable)")
    p.add_argument("--mu-list", type=lambda s: [float(x) for x in s.split(",")],
                   help="comma-separated mu values for the regime-wide checks")
    return parser


_DEFAULTS = {
    "format": "json", "n_min": -3, "n_max": 3, "mu_min": 0.05, "mu_max": 1.995, "points": None,
    "t_min": 1e-4, "t_max": 1e4, "lam": complex(-1.0, 0.0),
}


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    values = {}
    if args.config is not None:
        try:
            values = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(values, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(values) - set(vars(args))
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for key, val in values.items():
        if getattr(args, key) is None:
            if key in ("beta", "lam") and isinstance(val, str):
                val = _complex_pair(val)
            elif key == "out":
                val = Path(val)
            setattr(args, key, val)
    for key, val in _DEFAULTS.items():
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, val)
    if args.mu is not None and args.m is not None:
        raise UsageError("give exactly one of --mu and --m")
    return args


def _quadrature_config(args) -> QuadratureConfig:
    kwargs = {field: getattr(args, key) for key, field in _CONFIG_FIELDS.items() if getattr(args, key) is not None}
    try:
        return QuadratureConfig(**{**asdict(DEFAULT_CONFIG), **kwargs})
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _mass(args, required: bool) -> Optional[MassParams]:
    try:
        if args.mu is not None:
            return MassParams.from_mu(args.mu)
        if args.m is not None:
            return MassParams.from_m(args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if required:
        raise UsageError("this subcommand needs --mu or --m")
    return None


def _beta(args) -> ExtensionBeta:
    try:
        if args.beta is not None:
            return ExtensionBeta(args.beta)
        if args.beta_angle is not None:
            return ExtensionBeta.from_angle(args.beta_angle)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError("this subcommand needs --beta or --beta-angle")


def _n_range(args) -> range:
    if args.n_min > args.n_max:
        raise UsageError("--n-min must not exceed --n-max")
    return range(args.n_min, args.n_max + 1)


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, Regime):
        return x.value
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _jsonable(float(x.real)), "im": _jsonable(float(x.imag))}
    if isinstance(x, (float, np.floating)):
        return float(x) if np.isfinite(x) else None
    return x


def _csv_cell(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format_float(x)
    text = str(x)
    return f'"{text}"' if ("," in text or '"' in text) else text


def _flatten(record: dict) -> dict:
    flat = {}
    for key, val in record.items():
        if isinstance(val, (complex, np.complexfloating)):
            flat[f"{key}_re"], flat[f"{key}_im"] = float(val.real), float(val.imag)
        elif isinstance(val, (list, tuple)) and len(val) == 2 and key == "bracket":
            flat["bracket_lo"], flat["bracket_hi"] = val
        else:
            flat[key] = val
    return flat


def render_csv(data: Any) -> str:
    """Records become rows under a header; a single object becomes key,value rows."""
    buf = io.StringIO()
    if isinstance(data, dict):
        buf.write("key,value\n")
        for key, val in _flatten(data).items():
            buf.write(f"{key},{_csv_cell(val)}\n")
        return buf.getvalue()
    rows = [_flatten(r) for r in data]
    header = list(rows[0]) if rows else []
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(_csv_cell(r.get(k)) for k in header) + "\n")
    return buf.getvalue()


def render_json(meta: dict, data: Any) -> str:
    return json.dumps({"meta": _jsonable(meta), "data": _jsonable(data)}, indent=2, allow_nan=False) + "\n"


def _meta(mass: Optional[MassParams], cfg: QuadratureConfig, **extra) -> dict:
    regime = None
    if mass is not None:
        regime = classify(mass.mu, critical_constants(cfg))
    meta = {
        "mu": None if mass is None else mass.mu,
        "m": None if mass is None else mass.m,
        "regime": regime,
        "tolerances": asdict(cfg),
        "discrepancy_notes": list(DISCREPANCY_NOTES),
    }
    meta.update(extra)
    return meta


def _real_line_machinery(mass: MassParams, cfg: QuadratureConfig):
    regime = classify(mass.mu, critical_constants(cfg))
    if regime is not Regime.REAL_LINE:
        raise TmspecError(f"the ladder exists only for mu above mu1; regime at mu={mass.mu!r} is {regime.value}")
    return get_machinery(mass.mu, cfg)


def _ladder_records(args, cfg):
    mass = _mass(args, required=True)
    beta = _beta(args)
    mach = _real_line_machinery(mass, cfg)
    lad = ladder(beta, mach.s0, _n_range(args))
    return mass, beta, mach, lad


def _cmd_constants(args, cfg):
    c = critical_constants(cfg)
    return _meta(None, cfg), {"mu0": c.mu0, "mu1": c.mu1, "m0": c.m0, "m1": c.m1, "tol": c.tol}


def _cmd_zeros(args, cfg):
    mass = _mass(args, required=True)
    try:
        zd = find_zeros(mass.mu, cfg=cfg)
    except NoZerosError:
        return _meta(mass, cfg), {"zeros_in_strip": False}
    res = zd.residuals(mass.mu, cfg)
    return _meta(mass, cfg), {
        "zeros_in_strip": True, "z_plus": zd.z_plus, "z_minus": zd.z_minus, "t0": zd.t0, "s0": zd.s0,
        "w_plus": zd.w_plus, "w_minus": zd.w_minus, "residual_plus": res[0], "residual_minus": res[1],
    }


def _cmd_curve(args, cfg):
    if not 0 < args.mu_min < args.mu_max < 2:
        raise UsageError("need 0 < --mu-min < --mu-max < 2")
    points = args.points or 200
    if points < 2:
        raise UsageError("--points must be at least 2")
    grid = np.linspace(args.mu_min, args.mu_max, points)
    if args.out is not None and args.format == "csv":
        emit_threshold_curves(grid, args.out, "csv", cfg)
        return None, None
    curves = threshold_curves(grid, cfg)
    rows = [{k: float(curves[k][i]) for k in ("mu", "sqrt_term", "q0", "q1")} for i in range(points)]
    return _meta(None, cfg, crossings={"mu0": curves["mu0"], "mu1": curves["mu1"]}), rows


def _cmd_ladder(args, cfg):
    mass, beta, mach, lad = _ladder_records(args, cfg)
    bs = brackets(lad, mass.mu)
    bounds = {n: (lo, hi) for n, lo, hi in bs.brackets}
    rows = [{"n": n, "lambda_n": lam, "bracket": list(bounds[n]),
             "h_level": None if args.eps is None else h_level(lam, args.eps)} for n, lam in lad.entries]
    summary = {"beta": beta.beta, "s0": lad.s0, "eta": lad.eta, "gamma": lad.gamma, "lambda0": lad.lambda0,
               "ratio": lad.ratio, "c": bs.c, "n0": bs.n0, "kappa": bs.kappa, "eps": args.eps}
    return _meta(mass, cfg, ladder=summary), rows


def _cmd_detect(args, cfg):
    mass, beta, mach, lad = _ladder_records(args, cfg)
    res = cross_validate(beta, mach, _n_range(args))
    rows = [{"n": n, "lambda_ladder": lam, "lambda_detected": float(d), "rel_error": abs(d - lam) / abs(lam)}
            for (n, lam), d in zip(sorted(lad.entries, key=lambda e: e[1]), res["detected"])]
    rows.sort(key=lambda r: r["n"])
    return _meta(mass, cfg, detector={"max_rel_error": res["max_rel_error"], "s0": lad.s0, "eta": lad.eta}), rows


def _cmd_hlevels(args, cfg):
    if args.eps is None or args.eps == 0:
        raise UsageError("hlevels needs a nonzero --eps")
    mass, beta, mach, lad = _ladder_records(args, cfg)
    rows = [{"n": n, "lambda_n": lam, "h_level": h_level(lam, args.eps)} for n, lam in lad.entries]
    return _meta(mass, cfg, energy_ratio=float(np.exp(-2 * np.pi / lad.s0)), eps=args.eps), rows


def _cmd_eigenfunction(args, cfg):
    mass = _mass(args, required=True)
    if not 0 < args.t_min < args.t_max:
        raise UsageError("need 0 < --t-min < --t-max")
    points = args.points or 101
    mach = _real_line_machinery(mass, cfg)
    try:
        p = EigenParams.create(args.lam, mach)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t = np.geomspace(args.t_min, args.t_max, points)
    up, lo = boundary_traces(t, p, mach)
    cu, cl = trace_moduli_closed(t, p, mach)
    resid = functional_equation_residual(t, p, mach)
    rows = [{"t": float(t[i]), "g_upper": complex(up.values[i]), "g_lower": complex(lo.values[i]),
             "abs2_upper_closed": float(cu[i]), "abs2_lower_closed": float(cl[i]),
             "equation_residual": float(resid[i])} for i in range(points)]
    return _meta(mass, cfg, spectral_parameter=p.lam, lambda_star=p.lambda_star), rows


def _cmd_verify(args, cfg):
    mass = _mass(args, required=False)
    mu_list = args.mu_list if args.mu_list else ([mass.mu] if mass is not None else None)
    report = verify_all(mu_list, cfg, names=args.checks)
    if args.checks and not report.checks:
        raise UsageError(f"no checks named {args.checks}")
    meta = _meta(mass, cfg, overall=report.overall)
    if args.format == "csv":
        return meta, [asdict(c) for c in report.checks]
    return meta, report.to_dict()


_COMMANDS = {
    "constants": _cmd_constants, "zeros": _cmd_zeros, "curve": _cmd_curve, "ladder": _cmd_ladder,
    "detect": _cmd_detect, "hlevels": _cmd_hlevels, "eigenfunction": _cmd_eigenfunction,
    "verify": _cmd_verify,
}


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, newline="\n")


def cli_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run the subcommand, write its output and return the exit code."""
    parser = build_parser()
    try:
        args = _merge_config(parser.parse_args(argv))
        cfg = _quadrature_config(args)
        meta, data = _COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (TmspecError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"tmspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if meta is not None:
        _emit(render_csv(data) if args.format == "csv" else render_json(meta, data), args.out)
    if args.command == "verify" and not meta["overall"]:
        return 1
    return 0


def main() -> None:
    sys.exit(cli_dispatch())
