"""Command-line front end: write the data behind every figure as CSV or JSON.

Subcommands
-----------
wigner   Wigner function of a polar cat, nonpolar cat or coherent state on a grid
squeeze  S(beta) curves for several N plus the (beta_m, S_max) summary
evolve   polar-cat evolution trace in a thermal bath
times    t_dec, t_diss, t_ncl and r for a list of (N, nbar)
sweep    as ``times`` but fanned out over worker processes

Angles are given in degrees. Settings may also come from ``--config FILE``
(JSON object or key=value lines); flags on the command line win.

Exit codes: 0 success, 2 bad configuration, 3 I/O failure, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from spincat import dynamics, io, squeezing, states, wigner
from spincat.errors import ConfigError, DomainError, NumericalError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

COMMANDS = ("wigner", "squeeze", "evolve", "times", "sweep")
STATES = ("polar", "nonpolar", "coherent")


@dataclass
class RunConfig:
    command: str
    n_atoms: list = field(default_factory=lambda: [5])
    nbar: list = field(default_factory=lambda: [0.0])
    state: str = "polar"
    beta_deg: float = 45.0
    alpha_deg: float = 0.0
    beta_min_deg: float = 0.0
    beta_max_deg: float = 90.0
    beta_step_deg: float = 1.0
    n_theta: int | None = None
    n_phi: int | None = None
    oversample: int = 2
    horizon: float | None = None
    horizon_factor: float = 5.0
    n_samples: int = 201
    with_nu: bool = False
    with_ncl: bool = True
    extract_times: bool = False
    output_path: str | None = None
    format: str = "csv"
    precision: int = io.DEFAULT_PRECISION
    workers: int | None = None


CONFIG_KEYS = tuple(f.name for f in dataclasses.fields(RunConfig) if f.name != "command")


# ---------------------------------------------------------------------------
# value parsing


def parse_atoms(value) -> list:
    """'5', '2,5,20' or 'geom:1:1000:7' (log-spaced, rounded, deduplicated)."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        items = [int(value)]
    elif isinstance(value, (list, tuple)):
        items = [_as_int(v, "n_atoms") for v in value]
    else:
        text = str(value).strip()
        if text.startswith("geom:"):
            try:
                lo, hi, count = text[5:].split(":")
                grid = np.geomspace(float(lo), float(hi), int(count))
            except ValueError as exc:
                raise ConfigError(f"bad log-spaced atom list {text!r}: {exc}") from None
            items = sorted({int(round(x)) for x in grid})
        else:
            items = [_as_int(tok, "n_atoms") for tok in text.split(",") if tok.strip()]
    if not items or any(n < 1 for n in items):
        raise ConfigError(f"n_atoms must be positive integers, got {value!r}")
    return items


def parse_floats(value, key) -> list:
    if isinstance(value, (list, tuple)):
        items = [_as_float(v, key) for v in value]
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        items = [float(value)]
    else:
        items = [_as_float(tok, key) for tok in str(value).split(",") if tok.strip()]
    if not items:
        raise ConfigError(f"{key} needs at least one value")
    return items


def _as_int(value, key):
    try:
        f = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None
    if not f.is_integer():
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return int(f)


def _as_float(value, key):
    try:
        f = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None
    if not math.isfinite(f):
        raise ConfigError(f"{key}: expected a finite number, got {value!r}")
    return f


def _as_bool(value, key):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _optional(conv):
    def wrapped(value, key):
        if value is None or str(value).strip().lower() in ("none", ""):
            return None
        return conv(value, key)
    return wrapped


_CONVERTERS = {
    "n_atoms": lambda v, k: parse_atoms(v),
    "nbar": parse_floats,
    "state": lambda v, k: str(v),
    "beta_deg": _as_float,
    "alpha_deg": _as_float,
    "beta_min_deg": _as_float,
    "beta_max_deg": _as_float,
    "beta_step_deg": _as_float,
    "n_theta": _optional(_as_int),
    "n_phi": _optional(_as_int),
    "oversample": _as_int,
    "horizon": _optional(_as_float),
    "horizon_factor": _as_float,
    "n_samples": _as_int,
    "with_nu": _as_bool,
    "with_ncl": _as_bool,
    "extract_times": _as_bool,
    "output_path": lambda v, k: None if v is None else str(v),
    "format": lambda v, k: str(v).lower(),
    "precision": _as_int,
    "workers": _optional(_as_int),
}


def read_config_file(path) -> dict:
    """Settings from a JSON object or from key=value lines ('#' starts a comment)."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        return doc
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def build_config(command, file_values: dict, flag_values: dict) -> RunConfig:
    """Merge defaults, config-file values and flags (in that order)."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    merged = {}
    for source in (file_values, flag_values):
        for key, value in source.items():
            if key == "command":
                continue
            if key not in _CONVERTERS:
                raise ConfigError(f"unknown setting {key!r}")
            merged[key] = _CONVERTERS[key](value, key)
    cfg = RunConfig(command=command, **merged)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig):
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if not 1 <= cfg.precision <= 17:
        raise ConfigError("precision must lie in 1..17")
    if cfg.state not in STATES:
        raise ConfigError(f"state must be one of {', '.join(STATES)}")
    if any(nb < 0 for nb in cfg.nbar):
        raise ConfigError("nbar must be >= 0")
    for key in ("beta_deg", "beta_min_deg", "beta_max_deg"):
        if not 0.0 <= getattr(cfg, key) <= 180.0:
            raise ConfigError(f"{key} must lie in [0, 180]")
    if cfg.beta_min_deg > cfg.beta_max_deg:
        raise ConfigError("beta_min_deg exceeds beta_max_deg")
    if cfg.beta_step_deg <= 0:
        raise ConfigError("beta_step_deg must be positive")
    if cfg.oversample < 1:
        raise ConfigError("oversample must be >= 1")
    for key in ("n_theta", "n_phi"):
        val = getattr(cfg, key)
        if val is not None and val < 1:
            raise ConfigError(f"{key} must be >= 1")
    if (cfg.n_theta is None) != (cfg.n_phi is None):
        raise ConfigError("give both n_theta and n_phi or neither")
    if cfg.horizon is not None and cfg.horizon <= 0:
        raise ConfigError("horizon must be positive")
    if cfg.horizon_factor <= 0:
        raise ConfigError("horizon_factor must be positive")
    if cfg.n_samples < 2:
        raise ConfigError("n_samples must be >= 2")
    if cfg.workers is not None and cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    if cfg.command in ("wigner", "evolve") and len(cfg.n_atoms) != 1:
        raise ConfigError(f"{cfg.command} takes a single atom number")
    if cfg.command == "evolve" and len(cfg.nbar) != 1:
        raise ConfigError("evolve takes a single nbar")


# ---------------------------------------------------------------------------
# commands


def _emit(cfg: RunConfig, header, rows, doc_extra=None, path=None):
    path = cfg.output_path if path is None else path
    if cfg.format == "csv":
        io.write_csv(path, header, rows, cfg.precision)
    else:
        doc = dict(doc_extra or {})
        doc["columns"] = list(header)
        doc["rows"] = [list(r) for r in rows]
        io.write_json(path, doc, cfg.precision)


def cmd_wigner(cfg: RunConfig):
    n = cfg.n_atoms[0]
    beta = math.radians(cfg.beta_deg)
    alpha = math.radians(cfg.alpha_deg)
    if cfg.state == "polar":
        psi = states.polar_cat(n)
    elif cfg.state == "nonpolar":
        psi = states.nonpolar_cat(n, beta)
    else:
        psi = states.coherent_state(n, beta, alpha)
    chi = wigner.characteristic_matrix(states.density_of(psi))
    if cfg.n_theta is not None:
        grid = wigner.sphere_grid(cfg.n_theta, cfg.n_phi)
    else:
        grid = wigner.default_grid(n, cfg.oversample)
    fld = wigner.wigner_field(chi, grid)
    meta = {"n_atoms": n, "state": cfg.state}
    if cfg.state != "polar":
        meta["beta_deg"] = cfg.beta_deg
    if cfg.state == "coherent":
        meta["alpha_deg"] = cfg.alpha_deg
    _emit(cfg, io.FIELD_COLUMNS, io.field_rows(fld), meta)


def _beta_grid(cfg):
    count = int(round((cfg.beta_max_deg - cfg.beta_min_deg) / cfg.beta_step_deg)) + 1
    return np.linspace(cfg.beta_min_deg, cfg.beta_min_deg + (count - 1) * cfg.beta_step_deg, count)


def cmd_squeeze(cfg: RunConfig):
    rows = []
    for n in cfg.n_atoms:
        for b_deg in _beta_grid(cfg):
            try:
                rep = squeezing.squeezing_report(n, math.radians(b_deg))
                rows.append((n, float(b_deg), rep.var_jx, rep.var_jy, rep.s_measure))
            except DomainError:
                # degenerate cat (odd N at beta = 180 deg)
                rows.append((n, float(b_deg), None, None, None))
    summary = []
    for n in cfg.n_atoms:
        if n == 1:
            summary.append((n, None, 0.0))
            continue
        beta_m, s_max = squeezing.max_squeezing(n)
        summary.append((n, math.degrees(beta_m), s_max))
    if cfg.format == "json":
        doc = {"columns": list(io.SQUEEZE_COLUMNS), "rows": [list(r) for r in rows],
               "summary": {"columns": list(io.SUMMARY_COLUMNS), "rows": [list(r) for r in summary]}}
        io.write_json(cfg.output_path, doc, cfg.precision)
        return
    if cfg.output_path in (None, "-"):
        text = io.csv_text(io.SQUEEZE_COLUMNS, rows, cfg.precision)
        text += "\n" + io.csv_text(io.SUMMARY_COLUMNS, summary, cfg.precision)
        sys.stdout.write(text)
        return
    io.write_csv(cfg.output_path, io.SQUEEZE_COLUMNS, rows, cfg.precision)
    io.write_csv(io.sidecar_path(cfg.output_path, "_summary"), io.SUMMARY_COLUMNS, summary,
                 cfg.precision)


def cmd_evolve(cfg: RunConfig):
    n = cfg.n_atoms[0]
    bath = dynamics.BathParams(cfg.nbar[0])
    times = None
    extra = []
    if cfg.horizon is None:
        times = dynamics.characteristic_times(n, bath, with_ncl=cfg.with_ncl)
        horizon = cfg.horizon_factor * times.t_diss
        extra = [t for t in (times.t_dec, times.t_diss, times.t_ncl) if t is not None and t < horizon]
    else:
        horizon = cfg.horizon
    trace = dynamics.evolve_polar_cat(n, bath, horizon, cfg.n_samples, extra_times=extra)
    if cfg.extract_times and times is None:
        tdiss = dynamics.t_diss(trace)
        tncl = dynamics.t_ncl(trace) if cfg.with_ncl else None
        td = dynamics.t_dec(n, bath)
        times = dynamics.CharacteristicTimes(n, bath.nbar, td, tdiss, tncl, tdiss / td)
    if cfg.with_nu:
        trace = dynamics.with_nonclassicality(trace)
    header = io.trace_columns(trace)
    rows = io.trace_rows(trace)
    meta = {"n_atoms": n, "nbar": bath.nbar}
    if times is not None:
        meta["characteristic_times"] = io.times_block(times)
    _emit(cfg, header, rows, meta)


def _times_job(job):
    n, nbar, with_ncl = job
    return dynamics.characteristic_times(n, nbar, with_ncl=with_ncl)


def _jobs(cfg):
    return sorted({(n, nb) for n in cfg.n_atoms for nb in cfg.nbar})


def _emit_times(cfg, results):
    rows = [io.times_row(ct) for ct in sorted(results, key=lambda c: (c.n_atoms, c.nbar))]
    _emit(cfg, io.TIMES_COLUMNS, rows)


def cmd_times(cfg: RunConfig):
    _emit_times(cfg, [_times_job((n, nb, cfg.with_ncl)) for n, nb in _jobs(cfg)])


def worker_count(requested=None) -> int:
    """Workers for ``sweep``: requested (or CPU count), capped by SPINCAT_THREADS."""
    count = requested or os.cpu_count() or 1
    cap = os.environ.get("SPINCAT_THREADS")
    if cap:
        try:
            cap_n = int(cap)
        except ValueError:
            raise ConfigError(f"SPINCAT_THREADS must be an integer, got {cap!r}") from None
        if cap_n < 1:
            raise ConfigError("SPINCAT_THREADS must be >= 1")
        count = min(count, cap_n)
    return max(1, count)


def cmd_sweep(cfg: RunConfig):
    jobs = [(n, nb, cfg.with_ncl) for n, nb in _jobs(cfg)]
    workers = min(worker_count(cfg.workers), max(len(jobs), 1))
    if workers == 1:
        results = [_times_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_times_job, jobs))
    _emit_times(cfg, results)


_RUNNERS = {
    "wigner": cmd_wigner,
    "squeeze": cmd_squeeze,
    "evolve": cmd_evolve,
    "times": cmd_times,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------------------
# argument parsing


def _common(p):
    S = argparse.SUPPRESS
    p.add_argument("--config", default=None, help="JSON object or key=value file of settings")
    p.add_argument("--output", "-o", dest="output_path", default=S,
                   help="output file (default: standard output)")
    p.add_argument("--format", dest="format", choices=("csv", "json"), default=S)
    p.add_argument("--precision", type=int, default=S, help="significant digits (default 17)")


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(
        prog="spincat",
        description="Spin cat states: Wigner functions, squeezing and thermal decoherence data.",
        epilog="All angles are in degrees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wigner", help="Wigner function on a sphere grid")
    _common(p)
    p.add_argument("--state", choices=STATES, default=S)
    p.add_argument("--atoms", dest="n_atoms", default=S, help="number of atoms N")
    p.add_argument("--beta", dest="beta_deg", default=S, help="polar angle in degrees, from the south pole")
    p.add_argument("--alpha", dest="alpha_deg", default=S, help="azimuth in degrees (coherent state)")
    p.add_argument("--n-theta", dest="n_theta", default=S)
    p.add_argument("--n-phi", dest="n_phi", default=S)
    p.add_argument("--oversample", default=S, help="default-grid oversampling factor (default 2)")

    p = sub.add_parser("squeeze", help="squeezing curves S(beta) and their maxima")
    _common(p)
    p.add_argument("--atoms", dest="n_atoms", default=S, help="comma list, or geom:lo:hi:count")
    p.add_argument("--beta-min", dest="beta_min_deg", default=S, help="degrees (default 0)")
    p.add_argument("--beta-max", dest="beta_max_deg", default=S, help="degrees (default 90)")
    p.add_argument("--beta-step", dest="beta_step_deg", default=S, help="degrees (default 1)")

    p = sub.add_parser("evolve", help="polar-cat evolution trace")
    _common(p)
    p.add_argument("--atoms", dest="n_atoms", default=S)
    p.add_argument("--nbar", default=S, help="mean thermal photon number")
    p.add_argument("--horizon", default=S, help="end time in units of 1/gamma (default: factor * t_diss)")
    p.add_argument("--horizon-factor", dest="horizon_factor", default=S)
    p.add_argument("--samples", dest="n_samples", default=S)
    p.add_argument("--nu", dest="with_nu", action=argparse.BooleanOptionalAction, default=S,
                   help="add the non-classicality column")
    p.add_argument("--ncl", dest="with_ncl", action=argparse.BooleanOptionalAction, default=S,
                   help="locate t_ncl (default on)")
    p.add_argument("--extract-times", dest="extract_times", action="store_true", default=S,
                   help="extract t_diss (and t_ncl) from the trace itself")

    for name, text in (("times", "characteristic times for (N, nbar) pairs"),
                       ("sweep", "characteristic times computed in parallel")):
        p = sub.add_parser(name, help=text)
        _common(p)
        p.add_argument("--atoms", dest="n_atoms", default=S, help="comma list, or geom:lo:hi:count")
        p.add_argument("--nbar", default=S, help="comma list")
        p.add_argument("--ncl", dest="with_ncl", action=argparse.BooleanOptionalAction, default=S)
        if name == "sweep":
            p.add_argument("--workers", default=S, help="worker processes (capped by SPINCAT_THREADS)")
    return parser


def run(cfg: RunConfig):
    _RUNNERS[cfg.command](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)
    try:
        file_values = read_config_file(config_path) if config_path else {}
        cfg = build_config(command, file_values, args)
    except ConfigError as exc:
        print(f"spincat: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"spincat: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        run(cfg)
    except (ConfigError, DomainError) as exc:
        print(f"spincat: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"spincat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"spincat: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
