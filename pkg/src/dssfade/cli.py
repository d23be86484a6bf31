"""Command-line front end.

Subcommands::

    dssfade sweep              Monte Carlo P_s / P_sub sweep over E_b/N_0
    dssfade optimize-rotation  best QAM rotation under f1 and/or f2
    dssfade oracle-check       synthetic-channel check against the exact P_sub

Options may also come from a JSON file given with ``--config``; keys are the
long option names with dashes replaced by underscores, and command-line
flags take precedence. When ``--out`` is omitted the result is written to
``$DSSFADE_OUTPUT_DIR`` (or the current directory).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .analysis import OracleCheck, empirical_psub_matches_oracle
from .channel import ChannelKind
from .constellation import SUPPORTED_Q
from .rotation_opt import Objective, RotationObjectiveConfig, RotationResult, es_over_4n0_from_ebn0, optimize_rotation
from .simulator import SimulationPlan, SweepPoint, SweepResult, ThetaMode, derive_block_stream, run_sweep

OUTPUT_DIR_ENV = "DSSFADE_OUTPUT_DIR"
SUBCOMMANDS = ("sweep", "optimize-rotation", "oracle-check")
FORMATS = ("csv", "json")

SWEEP_COLUMNS = (
    "ebn0_db", "theta_rad", "trials", "ps", "ps_stderr", "psub", "psub_stderr",
    "lower_bound", "upper_bound", "r_times_ps",
)
SWEEP_JSON_EXTRA = ("symbol_errors", "psub_errors", "multi_error_trials", "cancelled_trials")
ROTATION_COLUMNS = (
    "ebn0_db", "es_over_4n0", "objective", "theta_star_rad", "objective_value",
    "grid_theta_rad", "grid_value",
)
ORACLE_COLUMNS = (
    "q", "r", "ps", "trials", "psub", "psub_stderr", "exact", "lower_bound", "upper_bound", "z", "passed",
)


class ConfigError(ValueError):
    def __init__(self, fieldname: str, message: str) -> None:
        super().__init__(f"{fieldname}: {message}")
        self.field = fieldname


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    q: int = 4
    r: int = 2
    channel: str = "awgn"
    ebn0: tuple[float, ...] = (0.0,)
    trials: int = 100_000
    theta_mode: str = "none"
    theta: float = 0.0
    seed: int = 0
    out: Path = Path("out.csv")
    format: str = "csv"
    workers: int = 1
    grid: int = 1024
    objective: str = "both"
    ps: tuple[float, ...] = (0.01, 0.1, 0.3)


def parse_ebn0(text: str) -> tuple[float, ...]:
    """``start:stop:step`` (stop included when on the grid), a single value, or a comma list."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError("ebn0", f"expected start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError("ebn0", f"non-numeric range {text!r}") from None
        if step <= 0 or stop < start:
            raise ConfigError("ebn0", f"range {text!r} must have step > 0 and stop >= start")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 10) for k in range(n))
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ConfigError("ebn0", f"could not parse {text!r}") from None


def _float_list(name: str, text: Any) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(x) for x in text)
    try:
        return tuple(float(p) for p in str(text).split(","))
    except ValueError:
        raise ConfigError(name, f"could not parse {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dssfade", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        S = argparse.SUPPRESS
        sp.add_argument("--config", help="JSON file with default values for any option")
        sp.add_argument("--q", type=int, default=S, help="constellation / field size: 4, 16 or 64 (default 4)")
        sp.add_argument("--r", type=int, default=S, help="repair locality, number of helper nodes (default 2)")
        sp.add_argument("--seed", type=int, default=S, help="master random seed (default 0)")
        sp.add_argument("--out", default=S, help=f"output file (default: <subcommand>.<format> in ${OUTPUT_DIR_ENV} or .)")
        sp.add_argument("--format", default=S, help="csv or json (default: from --out suffix, else csv)")

    sp = sub.add_parser("sweep", help="simulate P_s and P_sub over an E_b/N_0 range")
    common(sp)
    S = argparse.SUPPRESS
    sp.add_argument("--channel", default=S, help="awgn or rayleigh (default awgn)")
    sp.add_argument("--ebn0", default=S, help="E_b/N_0 in dB: start:stop:step, a value, or a comma list")
    sp.add_argument("--trials", type=int, default=S, help="trials per E_b/N_0 point (default 100000)")
    sp.add_argument("--theta-mode", default=S, help="none, fixed, optimize-f1 or optimize-f2 (default none)")
    sp.add_argument("--theta", type=float, default=S, help="rotation in radians for --theta-mode fixed")
    sp.add_argument("--workers", type=int, default=S, help="worker threads (results do not depend on it)")
    sp.add_argument("--grid", type=int, default=S, help="theta grid size for optimize-* modes (default 1024)")

    sp = sub.add_parser("optimize-rotation", help="minimise f1 and/or f2 over the rotation angle")
    common(sp)
    sp.add_argument("--ebn0", default=S, help="E_b/N_0 in dB at which to optimise (range syntax allowed)")
    sp.add_argument("--objective", default=S, help="f1, f2 or both (default both)")
    sp.add_argument("--grid", type=int, default=S, help="theta grid size (default 1024)")

    sp = sub.add_parser("oracle-check", help="compare Monte Carlo P_sub with the exact uniform-error value")
    common(sp)
    sp.add_argument("--ps", default=S, help="comma list of symbol error probabilities (default 0.01,0.1,0.3)")
    sp.add_argument("--trials", type=int, default=S, help="trials per case (default 1000000)")
    return p


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path} is not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("config", f"{path} must contain a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def parse_config(argv: Sequence[str] | None = None, config_file: str | None = None) -> RunConfig:
    """Parse and validate ``argv``; flags override values from the config file."""
    ns = vars(build_parser().parse_args(argv))
    sub = ns.pop("subcommand")
    path = ns.pop("config", None) or config_file
    values: dict[str, Any] = _load_config_file(path) if path else {}
    values.update(ns)
    known = set(RunConfig.__dataclass_fields__) - {"subcommand"}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(unknown[0], "unknown option")
    if sub == "oracle-check":
        values.setdefault("trials", 1_000_000)
    if sub == "optimize-rotation":
        values.setdefault("ebn0", "20")
    return _validate(sub, values)


def _as_int(name: str, v: Any) -> int:
    try:
        iv = int(v)
    except (TypeError, ValueError):
        raise ConfigError(name, f"expected an integer, got {v!r}") from None
    if iv != v and not isinstance(v, str):
        raise ConfigError(name, f"expected an integer, got {v!r}")
    return iv


def _validate(sub: str, v: dict[str, Any]) -> RunConfig:
    out: dict[str, Any] = {"subcommand": sub}
    if "q" in v:
        out["q"] = _as_int("q", v["q"])
    q = out.get("q", 4)
    if q not in SUPPORTED_Q:
        raise ConfigError("q", f"{q} is not supported; choose from {{4, 16, 64}}")
    for name, lo in (("r", 1), ("trials", 1), ("workers", 1), ("grid", 2), ("seed", 0)):
        if name in v:
            out[name] = _as_int(name, v[name])
            if out[name] < lo:
                raise ConfigError(name, f"must be >= {lo}, got {out[name]}")
    if "channel" in v:
        ch = str(v["channel"]).lower()
        if ch not in {k.value for k in ChannelKind}:
            raise ConfigError("channel", f"{v['channel']!r} is not one of awgn, rayleigh")
        out["channel"] = ch
    if "ebn0" in v:
        e = v["ebn0"]
        out["ebn0"] = tuple(float(x) for x in e) if isinstance(e, (list, tuple)) else parse_ebn0(e)
        if any(b <= a for a, b in zip(out["ebn0"], out["ebn0"][1:])):
            raise ConfigError("ebn0", "values must be strictly increasing")
    if "theta_mode" in v:
        if v["theta_mode"] not in {m.value for m in ThetaMode}:
            raise ConfigError("theta_mode", f"{v['theta_mode']!r} is not one of none, fixed, optimize-f1, optimize-f2")
        out["theta_mode"] = v["theta_mode"]
    if "theta" in v:
        try:
            out["theta"] = float(v["theta"])
        except (TypeError, ValueError):
            raise ConfigError("theta", f"expected a number, got {v['theta']!r}") from None
        if not 0.0 <= out["theta"] <= math.pi / 2:
            raise ConfigError("theta", f"{out['theta']} outside [0, pi/2]")
    if "objective" in v:
        if v["objective"] not in ("f1", "f2", "both"):
            raise ConfigError("objective", f"{v['objective']!r} is not one of f1, f2, both")
        out["objective"] = v["objective"]
    if "ps" in v:
        out["ps"] = _float_list("ps", v["ps"])
        if any(not 0.0 <= p <= 1.0 for p in out["ps"]):
            raise ConfigError("ps", "probabilities must lie in [0, 1]")

    fmt = v.get("format")
    if fmt is not None and fmt not in FORMATS:
        raise ConfigError("format", f"{fmt!r} is not one of csv, json")
    if "out" in v:
        path = Path(v["out"])
        fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    else:
        fmt = fmt or "csv"
        path = Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / f"{sub}.{fmt}"
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise ConfigError("out", f"directory {parent} does not exist or is not writable")
    out["out"] = path
    out["format"] = fmt
    return RunConfig(**out)


# Serialisation -------------------------------------------------------------


def fmt_num(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def _json_num(x: Any) -> Any:
    if isinstance(x, float) and not isinstance(x, bool):
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.9g}")
    return x


def sweep_rows(result: SweepResult) -> list[dict[str, Any]]:
    rows = []
    for p in result.points:
        row = {k: getattr(p, k) for k in SWEEP_COLUMNS}
        row.update({k: getattr(p, k) for k in SWEEP_JSON_EXTRA})
        rows.append(row)
    return rows


def rotation_rows(items: Sequence[tuple[float, float, RotationResult]]) -> list[dict[str, Any]]:
    return [
        {
            "ebn0_db": db, "es_over_4n0": snr, "objective": res.objective_kind.value,
            "theta_star_rad": res.theta_star, "objective_value": res.objective_value,
            "grid_theta_rad": res.grid_theta, "grid_value": res.grid_value,
        }
        for db, snr, res in items
    ]


def oracle_rows(checks: Sequence[OracleCheck]) -> list[dict[str, Any]]:
    return [
        {
            "q": c.q, "r": c.r, "ps": c.ps, "trials": c.trials, "psub": c.estimate,
            "psub_stderr": c.stderr, "exact": c.exact, "lower_bound": c.lower,
            "upper_bound": c.upper, "z": c.z, "passed": c.passed,
        }
        for c in checks
    ]


def render_csv(rows: Sequence[dict[str, Any]], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt_num(row[c]) for c in columns])
    return buf.getvalue()


def render_json(rows: Sequence[dict[str, Any]], metadata: dict[str, Any], key: str = "points") -> str:
    doc = {
        "metadata": {k: _json_num(v) for k, v in metadata.items()},
        key: [{k: _json_num(v) for k, v in row.items()} for row in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def sweep_metadata(result: SweepResult) -> dict[str, Any]:
    return {
        "q": result.q, "r": result.r, "channel": result.channel.value, "seed": result.seed,
        "theta_mode": result.theta_mode.value, "version": __version__,
    }


def emit_results(result: Any, fmt: str, path: Path | str, metadata: dict[str, Any] | None = None) -> Path:
    """Write a sweep, rotation list or oracle list as CSV or JSON (LF line endings)."""
    path = Path(path)
    if isinstance(result, SweepResult):
        rows, cols = sweep_rows(result), SWEEP_COLUMNS
        meta = {**sweep_metadata(result), **(metadata or {})}
    elif result and isinstance(result[0], OracleCheck):
        rows, cols = oracle_rows(result), ORACLE_COLUMNS
        meta = {"version": __version__, **(metadata or {})}
    else:
        rows, cols = rotation_rows(result), ROTATION_COLUMNS
        meta = {"version": __version__, **(metadata or {})}
    if fmt == "csv":
        text = render_csv(rows, cols)
    elif fmt == "json":
        text = render_json(rows, meta)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def load_sweep_json(path: Path | str) -> SweepResult:
    """Rebuild a :class:`SweepResult` from :func:`emit_results` JSON output."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    meta = doc["metadata"]
    pts = tuple(
        SweepPoint(
            ebn0_db=p["ebn0_db"], theta_rad=p["theta_rad"], r=meta["r"], trials=p["trials"],
            symbol_errors=p["symbol_errors"], psub_errors=p["psub_errors"],
            multi_error_trials=p["multi_error_trials"], cancelled_trials=p["cancelled_trials"],
        )
        for p in doc["points"]
    )
    return SweepResult(meta["q"], meta["r"], ChannelKind(meta["channel"]), meta["seed"], ThetaMode(meta["theta_mode"]), pts)


# Commands ------------------------------------------------------------------


def run(cfg: RunConfig) -> Path:
    if cfg.subcommand == "sweep":
        plan = SimulationPlan(
            q=cfg.q, r=cfg.r, channel=cfg.channel, ebn0_db=cfg.ebn0, trials=cfg.trials,
            seed=cfg.seed, theta_mode=cfg.theta_mode, theta=cfg.theta, grid=cfg.grid,
        )
        return emit_results(run_sweep(plan, workers=cfg.workers), cfg.format, cfg.out)
    if cfg.subcommand == "optimize-rotation":
        kinds = [Objective.F1, Objective.F2] if cfg.objective == "both" else [Objective(cfg.objective)]
        items = []
        for db in cfg.ebn0:
            snr = es_over_4n0_from_ebn0(db, cfg.q)
            rc = RotationObjectiveConfig(cfg.q, cfg.r, snr, cfg.grid)
            items.extend((db, snr, optimize_rotation(rc, k)) for k in kinds)
        meta = {"q": cfg.q, "r": cfg.r, "grid": cfg.grid}
        return emit_results(items, cfg.format, cfg.out, meta)
    if cfg.subcommand == "oracle-check":
        checks = [
            empirical_psub_matches_oracle(cfg.q, cfg.r, ps, cfg.trials, derive_block_stream(cfg.seed, i, 0))
            for i, ps in enumerate(cfg.ps)
        ]
        for c in checks:
            status = "PASS" if c.passed else "FAIL"
            print(f"{status} q={c.q} r={c.r} ps={c.ps:g}: {c.estimate:.6g} vs exact {c.exact:.6g} (z={c.z:+.2f})",
                  file=sys.stderr)
        return emit_results(checks, cfg.format, cfg.out, {"q": cfg.q, "r": cfg.r, "seed": cfg.seed})
    raise ConfigError("subcommand", f"unknown subcommand {cfg.subcommand!r}")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"dssfade: error: {exc}", file=sys.stderr)
        return 2
    try:
        path = run(cfg)
    except OSError as exc:
        print(f"dssfade: error: cannot write {cfg.out}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
