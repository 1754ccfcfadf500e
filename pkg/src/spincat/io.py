"""Plain-text data files: CSV tables and JSON documents.

CSV files use '.' as decimal separator, LF line endings and a header row.
Floats are written with a fixed number of significant digits (17 by
default, enough to round-trip any double). Missing values are written as
``none``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

NONE_TOKEN = "none"
DEFAULT_PRECISION = 17

FIELD_COLUMNS = ("theta", "phi", "weight", "W")
SQUEEZE_COLUMNS = ("N", "beta_deg", "var_jx", "var_jy", "S")
SUMMARY_COLUMNS = ("N", "beta_m_deg", "s_max")
TIMES_COLUMNS = ("N", "nbar", "t_dec", "t_diss", "t_ncl", "r")


def format_value(value, precision: int = DEFAULT_PRECISION) -> str:
    if value is None:
        return NONE_TOKEN
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isnan(x):
        return "nan"
    out = format(x, f".{precision}g")
    return "0" if out == "-0" else out


def parse_value(token: str):
    if token == NONE_TOKEN:
        return None
    try:
        return int(token)
    except ValueError:
        return float(token)


def round_to(value, precision: int = DEFAULT_PRECISION):
    """The float a CSV cell of this precision would hold."""
    if value is None:
        return None
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(format_value(value, precision))


@contextmanager
def _open_text(path, mode):
    if path is None or str(path) == "-":
        if mode == "w":
            yield sys.stdout
        else:
            yield sys.stdin
        return
    with open(path, mode, newline="", encoding="utf-8") as fh:
        yield fh


def csv_text(header, rows, precision: int = DEFAULT_PRECISION) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        writer.writerow([format_value(v, precision) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows, precision: int = DEFAULT_PRECISION):
    text = csv_text(header, rows, precision)
    with _open_text(path, "w") as fh:
        fh.write(text)


def read_csv(path):
    """Return ``(header, rows)`` with numbers parsed and ``none`` as None."""
    with _open_text(path, "r") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[parse_value(tok) for tok in row] for row in reader if row]
    return header, rows


def json_text(doc, precision: int = DEFAULT_PRECISION) -> str:
    return json.dumps(_rounded(doc, precision), indent=2, sort_keys=True) + "\n"


def _rounded(obj, precision):
    if isinstance(obj, dict):
        return {str(k): _rounded(v, precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_rounded(v, precision) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating, int, np.integer)):
        return round_to(obj, precision)
    return obj


def write_json(path, doc, precision: int = DEFAULT_PRECISION):
    text = json_text(doc, precision)
    with _open_text(path, "w") as fh:
        fh.write(text)


def read_json(path):
    with _open_text(path, "r") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# tables for the domain objects


def field_rows(field):
    """(theta, phi, weight, W) rows, theta-major."""
    grid = field.grid
    values = np.asarray(field.values)
    if np.iscomplexobj(values):
        raise ValueError("only real fields can be tabulated")
    weights = grid.weights
    rows = []
    for a, th in enumerate(grid.theta):
        for b, ph in enumerate(grid.phi):
            rows.append((float(th), float(ph), float(weights[a, b]), float(values[a, b])))
    return rows


def trace_columns(trace, with_caption: bool = True):
    n = trace.n_atoms
    cols = ["t"] + [f"rho_{format_value(i - n / 2)}" for i in range(n + 1)]
    cols += ["re_corner", "im_corner", "energy"]
    if with_caption:
        cols.append("caption_energy")
    if trace.nu is not None:
        cols.append("nu")
    return cols


def trace_rows(trace, with_caption: bool = True):
    caption = trace.caption_energy() if with_caption else None
    rows = []
    for k, t in enumerate(trace.times):
        row = [float(t)] + [float(v) for v in trace.diagonals[k]]
        row += [float(trace.corner[k].real), float(trace.corner[k].imag), float(trace.energy[k])]
        if with_caption:
            row.append(float(caption[k]))
        if trace.nu is not None:
            row.append(float(trace.nu[k]))
        rows.append(row)
    return rows


def times_row(ct):
    return [ct.n_atoms, float(ct.nbar), ct.t_dec, ct.t_diss, ct.t_ncl, ct.ratio_r]


def times_block(ct):
    return {"t_dec": ct.t_dec, "t_diss": ct.t_diss, "t_ncl": ct.t_ncl, "r": ct.ratio_r}


def sidecar_path(path, suffix: str) -> Path:
    p = Path(path)
    return p.with_name(f"{p.stem}{suffix}{p.suffix}")
