"""Command-line interface: classify, trace, profile, portrait, sweep.

Configuration comes from a flat ``key = value`` text file and/or flags;
flags override file values.  Exit codes: 0 when a layer exists (or the
requested artifacts were produced), 2 when no layer/curves exist for the
data, 1 on input or runtime errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .engine import (ExistenceEngine, Query, Tolerances, decay_to_dict,
                     export_profile_csv, verdict_to_dict)
from .errors import ConfigError, LayerError
from .gas import (EndState, GasParams, TOL_FLUX, TOL_MACH, classify_regime)
from .linearize import eigen_2x2
from .portrait import render_portrait
from .system import build_system
from .tracer import (CURVE_GAMMA2, TraceOptions, export_curve_csv,
                     export_curve_json, trace_gamma)

_FLOAT_KEYS = {
    "gamma", "R", "mu", "kappa",
    "v_minus", "u_minus", "theta_minus",
    "v_plus", "u_plus", "theta_plus",
    "tol_member", "tol_mach", "tol_flux",
    "mach_min", "mach_max",
}
_INT_KEYS = {"mach_points", "trajectories"}
_STR_KEYS = {"out", "format"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS


@dataclass(frozen=True)
class RunConfig:
    gamma: float | None = None
    R: float | None = None
    mu: float | None = None
    kappa: float | None = None
    v_minus: float | None = None
    u_minus: float | None = None
    theta_minus: float | None = None
    v_plus: float | None = None
    u_plus: float | None = None
    theta_plus: float | None = None
    tol_member: float = 1e-6
    tol_mach: float = TOL_MACH
    tol_flux: float = TOL_FLUX
    mach_min: float | None = None
    mach_max: float | None = None
    mach_points: int = 0
    trajectories: int = 3
    out: str = "."
    format: str = "csv"


def load_config_file(path) -> dict:
    """Parse a flat key = value file; '#' starts a comment."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in _STR_KEYS:
            values[key] = val
        else:
            caster = int if key in _INT_KEYS else float
            try:
                values[key] = caster(val)
            except ValueError as exc:
                raise ConfigError(
                    f"{path}:{lineno}: field {key!r} needs a number, got {val!r}") from exc
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = replace(cfg, **load_config_file(args.config))
    overrides = {}
    for key in _ALL_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    return replace(cfg, **overrides)


def _require(cfg: RunConfig, names: tuple[str, ...], what: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ConfigError(f"{what} requires {', '.join(missing)}")


def _gas(cfg: RunConfig) -> GasParams:
    _require(cfg, ("gamma", "R", "mu", "kappa"), "gas setup")
    try:
        return GasParams(cfg.gamma, cfg.R, cfg.mu, cfg.kappa)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _state(cfg: RunConfig, side: str) -> EndState:
    names = (f"v_{side}", f"u_{side}", f"theta_{side}")
    _require(cfg, names, f"{side} end state")
    try:
        return EndState(*(getattr(cfg, n) for n in names))
    except ValueError as exc:
        raise ConfigError(f"{side} end state: {exc}") from exc


def _tolerances(cfg: RunConfig) -> Tolerances:
    return Tolerances(tol_A=cfg.tol_flux, tol_M=cfg.tol_mach,
                      tol_member=cfg.tol_member)


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_classify(cfg: RunConfig) -> int:
    engine = ExistenceEngine()
    q = Query(_state(cfg, "minus"), _state(cfg, "plus"), _gas(cfg), _tolerances(cfg))
    verdict = engine.decide(q)
    print(json.dumps(verdict_to_dict(verdict), indent=2))
    return 0 if verdict.exists else 2


def cmd_trace(cfg: RunConfig) -> int:
    engine = ExistenceEngine()
    gas = _gas(cfg)
    right = _state(cfg, "plus")
    s = build_system(gas, right)
    regime = classify_regime(s.mach_plus, cfg.tol_mach)
    if regime.is_supersonic:
        print("no existence curves: the far field is supersonic", file=sys.stderr)
        return 2
    curves = engine.curves_for(gas, right, cfg.tol_mach)
    out = _outdir(cfg)
    for label, curve in curves.items():
        if cfg.format == "json":
            payload = {"label": label, "terminal": curve.terminal,
                       "samples": curve.samples.tolist()}
            (out / f"{label}.samples.json").write_text(json.dumps(payload))
        else:
            export_curve_csv(curve, out / f"{label}.csv")
        export_curve_json(curve, out / f"{label}.json")
        print(f"{label}: {len(curve.samples)} samples, terminal {curve.terminal}")
    return 0


def cmd_profile(cfg: RunConfig) -> int:
    engine = ExistenceEngine()
    q = Query(_state(cfg, "minus"), _state(cfg, "plus"), _gas(cfg), _tolerances(cfg))
    verdict = engine.decide(q)
    payload = verdict_to_dict(verdict)
    if not verdict.exists:
        print(json.dumps(payload, indent=2))
        return 2
    prof = engine.compute_profile(q, verdict)
    out = _outdir(cfg)
    export_profile_csv(prof, out / "profile.csv")
    decay = prof.metrics.get("decay")
    payload = verdict_to_dict(verdict, decay)
    payload["profile"] = {
        "n_samples": int(len(prof.xi)),
        "monotone_ok": bool(prof.metrics["monotone_ok"]),
        "residual_sup": prof.metrics["residual_sup"],
        "endpoint_gap": prof.metrics["endpoint_gap"],
        "decay": decay_to_dict(decay),
    }
    print(json.dumps(payload, indent=2))
    return 0


def cmd_portrait(cfg: RunConfig) -> int:
    engine = ExistenceEngine()
    gas = _gas(cfg)
    right = _state(cfg, "plus")
    s = build_system(gas, right)
    regime = classify_regime(s.mach_plus, cfg.tol_mach)
    if regime.is_supersonic:
        print("no portrait: the far field is supersonic", file=sys.stderr)
        return 2
    curves = engine.curves_for(gas, right, cfg.tol_mach)
    out = _outdir(cfg)
    target = out / "portrait.svg"
    render_portrait(s, curves, path=target, n_trajectories=cfg.trajectories)
    print(f"wrote {target}")
    return 0


def run_sweep(gas: GasParams, v_plus: float, theta_plus: float, machs,
              trace_gamma2: bool = True) -> list[dict]:
    """Evaluate regime/eigen/equilibrium data over a Mach grid.

    The far-field velocity is set from each Mach number; rows come back in
    grid order.  When ``trace_gamma2`` is set, subsonic rows carry the
    actual traced terminal kind of the gamma2 branch.
    """
    sound = math.sqrt(gas.R * gas.gamma * theta_plus)
    fast_opts = TraceOptions(rel_tol=1e-8, abs_tol=1e-10, max_steps=100_000,
                             sample_cap=5e-2, thin_spacing=1e-4)

    def one(mach_plus: float) -> dict:
        right = EndState(v_plus, mach_plus * sound, theta_plus)
        s = build_system(gas, right)
        regime = classify_regime(s.mach_plus)
        eig = eigen_2x2(s.matrix)
        row = {
            "mach_plus": mach_plus,
            "regime": regime.tag,
            "det_A": s.det_A,
            "tr_A": s.tr_A,
            "lambda1": eig.lambda1,
            "lambda2": eig.lambda2,
            "alpha1": s.alpha1,
            "alpha2": s.alpha2,
            "gamma2_terminal": "",
        }
        if regime.is_subsonic and trace_gamma2:
            try:
                curve = trace_gamma(s, eig, CURVE_GAMMA2, fast_opts)
                row["gamma2_terminal"] = curve.terminal
            except LayerError as exc:
                row["gamma2_terminal"] = f"error:{type(exc).__name__}"
        return row

    with ThreadPoolExecutor(max_workers=4) as pool:
        return list(pool.map(one, machs))


def cmd_sweep(cfg: RunConfig) -> int:
    gas = _gas(cfg)
    _require(cfg, ("v_plus", "theta_plus", "mach_min", "mach_max"), "sweep")
    if cfg.mach_points < 2:
        raise ConfigError("sweep requires mach_points >= 2")
    if not 0.0 < cfg.mach_min < cfg.mach_max:
        raise ConfigError("sweep requires 0 < mach_min < mach_max")
    machs = [cfg.mach_min + i * (cfg.mach_max - cfg.mach_min) / (cfg.mach_points - 1)
             for i in range(cfg.mach_points)]
    rows = run_sweep(gas, cfg.v_plus, cfg.theta_plus, machs)
    out = _outdir(cfg)
    target = out / "sweep.csv"
    fieldnames = ["mach_plus", "regime", "det_A", "tr_A", "lambda1", "lambda2",
                  "alpha1", "alpha2", "gamma2_terminal"]
    with open(target, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {target} ({len(rows)} rows)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inflow-layer",
        description="Boundary-layer existence classification and tracing for "
                    "the compressible inflow problem")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    for key in sorted(_FLOAT_KEYS):
        common.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float)
    for key in sorted(_INT_KEYS):
        common.add_argument(f"--{key.replace('_', '-')}", dest=key, type=int)
    common.add_argument("--out", dest="out")
    common.add_argument("--format", dest="format", choices=["csv", "json"])
    sub.add_parser("classify", parents=[common],
                   help="decide existence for boundary + far-field data")
    sub.add_parser("trace", parents=[common],
                   help="trace the existence curves for a far field")
    sub.add_parser("profile", parents=[common],
                   help="classify, then compute and verify the layer profile")
    sub.add_parser("portrait", parents=[common],
                   help="render the phase portrait to SVG")
    sub.add_parser("sweep", parents=[common],
                   help="tabulate regime/eigen data over a Mach grid")
    return parser


_COMMANDS = {
    "classify": cmd_classify,
    "trace": cmd_trace,
    "profile": cmd_profile,
    "portrait": cmd_portrait,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return _COMMANDS[args.command](cfg)
    except LayerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
