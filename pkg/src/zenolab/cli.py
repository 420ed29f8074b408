"""
Command-line front end.

    zeno sweep   --t-up2 0.9999 --n-min 1 --n-max 1000 --out sweep.csv
    zeno table1
    zeno opt     --t-up2 0.99975
    zeno general --config lossy.yaml --format json

Configuration files are flat YAML mappings whose keys mirror the long flags
(``t_up2``, ``n_max``, ...).  Flags override file values.  Complex mirror
coefficients are given either as a squared modulus plus phase (``t_up2``,
``phase_up``; ``r_up2``, ``phase_r_up``; ``t_ud2``, ``phase_t_ud``) or as real
and imaginary parts (``t_up_re``, ``t_up_im``).  Spin-flip mirrors use the
eight names ``t_uu t_ud t_du t_dd r_uu r_ud r_du r_dd`` and are only
configurable from a file.

Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numerical
consistency error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict
from typing import Any, Optional

import yaml

from . import engine, optimizer
from .errors import ConfigError, DomainError, NumericalConsistencyError, OutOfRegimeError
from .mirrors import DiagonalMirror, IdealMirror, MirrorModel, SpinFlipMirror, coefficient

COMMANDS = ("sweep", "opt", "table1", "general")
TABLE1_TRANSMISSIONS = (0.99, 0.999, 0.9999)

SWEEP_COLUMNS = ("N", "P_exact", "P_first_order", "P_dominant", "P_ideal")
TABLE1_COLUMNS = ("t_up2", "n_opt_estimate", "n_opt_exact", "p_estimate", "p_exact")
OPT_COLUMNS = ("n_opt_exact", "p_at_exact", "n_opt_estimate", "p_estimate",
               "search_ceiling", "ceiling_hit", "note")
GENERAL_COLUMNS = ("n_opt_analytic", "p_opt_analytic", "n_opt_numeric", "p_opt_numeric",
                   "stationarity_residual", "note")

DIAGONAL_COEFFS = ("t_up", "t_down", "r_up", "r_down")
SPINFLIP_COEFFS = ("t_uu", "t_ud", "t_du", "t_dd", "r_uu", "r_ud", "r_du", "r_dd")
# the two transmission phases have short flag-style names
PHASE_ALIASES = {"t_up": "phase_up", "t_down": "phase_down"}


def _coeff_keys(name: str) -> tuple[str, str, str, str]:
    return (f"{name}2", PHASE_ALIASES.get(name, f"phase_{name}"), f"{name}_re", f"{name}_im")


DIAGONAL_KEYS = frozenset(k for n in DIAGONAL_COEFFS for k in _coeff_keys(n))
SPINFLIP_KEYS = frozenset(k for n in SPINFLIP_COEFFS for k in _coeff_keys(n))
MIRROR_KEYS = DIAGONAL_KEYS | SPINFLIP_KEYS | {"mirror"}
LOSS_KEYS = frozenset({"a", "b", "c", "tau_z", "alpha1", "alpha2", "t_total"})
COMMON_KEYS = frozenset({"theta", "out", "format"})

ALLOWED_KEYS = {
    "sweep": COMMON_KEYS | MIRROR_KEYS | {"n_min", "n_max"},
    "opt": COMMON_KEYS | MIRROR_KEYS | {"n_max"},
    "table1": COMMON_KEYS,
    "general": COMMON_KEYS | LOSS_KEYS,
}
INT_KEYS = {"n_min", "n_max"}
STR_KEYS = {"out", "format", "mirror"}


def _fmt(x: Optional[float]) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


def _json_value(x: Any) -> Any:
    if isinstance(x, float):
        if not math.isfinite(x):
            return None
        return float(f"{x:.12g}")
    return x


def load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a flat key-value mapping")
    for key, value in data.items():
        if isinstance(value, (dict, list)):
            raise ConfigError(f"{path}: field '{key}' must be a scalar")
    return {str(k): v for k, v in data.items()}


def _coerce(cfg: dict) -> dict:
    out = {}
    for key, value in cfg.items():
        try:
            if key in STR_KEYS:
                out[key] = str(value)
            elif key in INT_KEYS:
                as_float = float(value)
                if as_float != int(as_float):
                    raise ValueError
                out[key] = int(as_float)
            else:
                out[key] = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"field '{key}' has invalid value {value!r}") from None
    return out


def resolve_config(command: str, file_cfg: dict, flag_cfg: dict) -> dict:
    """Merge file and flag values, reject fields the command does not take."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    merged = {**file_cfg, **{k: v for k, v in flag_cfg.items() if v is not None}}
    allowed = ALLOWED_KEYS[command]
    for key in sorted(merged):
        if key not in allowed:
            raise ConfigError(f"field '{key}' is not accepted by '{command}'")
    cfg = _coerce(merged)
    cfg.setdefault("theta", math.pi / 2)
    cfg.setdefault("format", "json" if command in ("opt", "general") else "csv")
    if cfg["format"] not in ("csv", "json"):
        raise ConfigError(f"field 'format' must be csv or json, got {cfg['format']!r}")
    if not math.isfinite(cfg["theta"]):
        raise ConfigError("field 'theta' must be finite")
    if command == "sweep":
        cfg.setdefault("n_min", 1)
        cfg.setdefault("n_max", 1000)
        if cfg["n_min"] < 1:
            raise ConfigError("field 'n_min' must be >= 1")
        if cfg["n_min"] > cfg["n_max"]:
            raise ConfigError("field 'n_min' exceeds 'n_max'")
    if command == "opt" and "n_max" in cfg and cfg["n_max"] < 1:
        raise ConfigError("field 'n_max' must be >= 1")
    return cfg


def _complex_from(cfg: dict, name: str, default: Optional[complex]) -> Optional[complex]:
    mod2_key, phase_key, re_key, im_key = _coeff_keys(name)
    polar = mod2_key in cfg or phase_key in cfg
    cartesian = re_key in cfg or im_key in cfg
    if polar and cartesian:
        raise ConfigError(f"field '{name}' given both as modulus/phase and as re/im")
    if polar:
        if mod2_key not in cfg:
            raise ConfigError(f"field '{phase_key}' needs '{mod2_key}'")
        try:
            return coefficient(cfg[mod2_key], cfg.get(phase_key, 0.0))
        except DomainError as exc:
            raise ConfigError(f"field '{mod2_key}': {exc}") from None
    if cartesian:
        return complex(cfg.get(re_key, 0.0), cfg.get(im_key, 0.0))
    return default


def build_mirror(cfg: dict) -> MirrorModel:
    keys = set(cfg)
    has_diag = bool(keys & DIAGONAL_KEYS)
    has_flip = bool(keys & SPINFLIP_KEYS)
    kind = cfg.get("mirror")
    if kind is None:
        if has_diag and has_flip:
            raise ConfigError("diagonal and spin-flip mirror fields cannot be mixed")
        kind = "spinflip" if has_flip else "diagonal" if has_diag else "ideal"
    if kind not in ("ideal", "diagonal", "spinflip"):
        raise ConfigError(f"field 'mirror' must be ideal, diagonal or spinflip, got {kind!r}")
    stray = {"ideal": keys & (DIAGONAL_KEYS | SPINFLIP_KEYS),
             "diagonal": keys & SPINFLIP_KEYS,
             "spinflip": keys & DIAGONAL_KEYS}[kind]
    if stray:
        raise ConfigError(f"field '{sorted(stray)[0]}' is not accepted by a {kind} mirror")
    try:
        if kind == "ideal":
            return IdealMirror()
        if kind == "diagonal":
            t_up = _complex_from(cfg, "t_up", 1 + 0j)
            t_down = _complex_from(cfg, "t_down", 0j)
            r_up = _complex_from(cfg, "r_up", None)
            r_down = _complex_from(cfg, "r_down", None)
            if r_up is None:
                r_up = math.sqrt(max(0.0, 1.0 - abs(t_up) ** 2))
            if r_down is None:
                r_down = math.sqrt(max(0.0, 1.0 - abs(t_down) ** 2))
            return DiagonalMirror(t_up, t_down, r_up, r_down)
        entries = [_complex_from(cfg, name, 0j) for name in SPINFLIP_COEFFS]
        return SpinFlipMirror.from_entries(*entries)
    except DomainError as exc:
        raise ConfigError(f"invalid mirror: {exc}") from None


def _optional(fn, *args):
    try:
        return fn(*args)
    except (DomainError, OutOfRegimeError):
        return None


def cmd_sweep(cfg: dict) -> dict:
    mirror = build_mirror(cfg)
    theta = cfg["theta"]
    t_up2 = mirror.transmission_up2
    rows = []
    for n in range(cfg["n_min"], cfg["n_max"] + 1):
        run = engine.ZenoRun(theta, n, mirror)
        rows.append({
            "N": n,
            "P_exact": engine.survival_exact(run),
            "P_first_order": _optional(engine.survival_first_order, run) if n >= 2 else None,
            "P_dominant": _optional(engine.survival_dominant, theta, t_up2, n),
            "P_ideal": engine.survival_ideal(theta, n),
        })
    return {"columns": SWEEP_COLUMNS, "rows": rows}


def cmd_table1(cfg: dict) -> dict:
    theta = cfg["theta"]
    rows = []
    for t_up2 in TABLE1_TRANSMISSIONS:
        report = optimizer.optimize(theta, DiagonalMirror.from_transmission(t_up2))
        rows.append({
            "t_up2": t_up2,
            "n_opt_estimate": report.n_opt_estimate,
            "n_opt_exact": report.n_opt_exact,
            "p_estimate": report.p_estimate,
            "p_exact": report.p_at_exact,
        })
    return {"columns": TABLE1_COLUMNS, "rows": rows}


def cmd_opt(cfg: dict) -> dict:
    mirror = build_mirror(cfg)
    report = optimizer.optimize(cfg["theta"], mirror, cfg.get("n_max"))
    return {"columns": OPT_COLUMNS, "rows": [asdict(report)]}


def cmd_general(cfg: dict) -> dict:
    params = {k: cfg[k] for k in LOSS_KEYS if k in cfg}
    if "a" not in params:
        raise ConfigError("field 'a' is required by 'general'")
    if "alpha1" in params and "alpha2" not in params:
        params["alpha2"] = 1.0 - params["alpha1"]
    elif "alpha2" in params and "alpha1" not in params:
        params["alpha1"] = 1.0 - params["alpha2"]
    params.setdefault("t_total", params.get("tau_z", 1.0) * cfg["theta"])
    try:
        model = optimizer.LossModel(**params)
    except DomainError as exc:
        raise ConfigError(f"invalid loss model: {exc}") from None
    notes = []
    n_analytic = residual = p_analytic = None
    try:
        n_analytic = optimizer.general_n_opt(model)
        p_analytic = optimizer.general_p_opt(model)
        if math.isinf(n_analytic):
            notes.append("infinite optimal frequency (a = 1)")
        else:
            residual = optimizer.stationarity_residual(model, n_analytic)
    except OutOfRegimeError as exc:
        notes.append(str(exc))
    n_numeric, p_numeric = optimizer.numeric_optimum(model)
    row = {
        "n_opt_analytic": n_analytic,
        "p_opt_analytic": p_analytic,
        "n_opt_numeric": n_numeric,
        "p_opt_numeric": p_numeric,
        "stationarity_residual": residual,
        "note": "; ".join(notes),
    }
    return {"columns": GENERAL_COLUMNS, "rows": [row]}


HANDLERS = {"sweep": cmd_sweep, "table1": cmd_table1, "opt": cmd_opt, "general": cmd_general}


def render(command: str, cfg: dict, result: dict) -> str:
    columns, rows = result["columns"], result["rows"]
    if cfg["format"] == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row[c] if isinstance(row[c], str) else _fmt(row[c]) for c in columns])
        return buf.getvalue()
    payload = {
        "command": command,
        "theta": _json_value(cfg["theta"]),
        "rows": [{c: _json_value(row[c]) for c in columns} for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zeno", description="Lossy quantum Zeno experiments.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", metavar="PATH")
    parser.add_argument("--theta", type=float)
    parser.add_argument("--t-up2", dest="t_up2", type=float)
    parser.add_argument("--t-down2", dest="t_down2", type=float)
    parser.add_argument("--phase-up", dest="phase_up", type=float)
    parser.add_argument("--phase-down", dest="phase_down", type=float)
    parser.add_argument("--n-min", dest="n_min", type=int)
    parser.add_argument("--n-max", dest="n_max", type=int)
    parser.add_argument("--out", metavar="PATH")
    parser.add_argument("--format", choices=("csv", "json"))
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        file_cfg = load_config(args.config) if args.config else {}
        cfg = resolve_config(args.command, file_cfg, flags)
        text = render(args.command, cfg, HANDLERS[args.command](cfg))
        if cfg.get("out"):
            with open(cfg["out"], "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"zeno: config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"zeno: I/O error: {exc}", file=sys.stderr)
        return 2
    except NumericalConsistencyError as exc:
        print(f"zeno: numerical error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
