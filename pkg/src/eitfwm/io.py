"""CSV and JSON file formats.

Floats are written with 17 significant digits so that files round-trip
exactly and identical inputs give byte-identical outputs.
"""

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .fitting import ObservationRow
from .propagation import TimeTrace

TRACE_HEADER = ("time_s", "re", "im")
TRANSFER_HEADER = ("omega_rad_s", "re_T", "im_T", "log_mag", "phase_rad", "intensity_transmission")
SWEEP_HEADER = ("axis", "efficiency", "delay_s", "fwhm_s", "dbp", "fwm_gain", "delay_x_eff")
OBSERVATION_FIELDS = ("control_power", "optical_depth", "efficiency", "delay_s")


def fmt(x):
    """Format a number with 17 significant digits (``nan`` for missing values)."""
    if x is None:
        return "nan"
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _write_rows(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if path is None or str(path) == "-":
        return text
    Path(path).write_text(text, encoding="utf-8")
    return text


def write_trace_csv(path, trace):
    rows = zip(trace.times, trace.samples.real, trace.samples.imag)
    return _write_rows(path, TRACE_HEADER, rows)


def _read_table(path, required):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [name for name in required if name not in header]
            if missing:
                raise ConfigurationError(f"{path}: missing columns {missing}")
            return [row for row in reader], header
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from exc


def _float(row, name, path, line):
    try:
        return float(row[name])
    except (TypeError, ValueError):
        raise ConfigurationError(f"{path}:{line}: bad value {row.get(name)!r} for {name}") from None


def read_trace_csv(path):
    """Read a ``time_s,re,im`` trace; times must be strictly increasing and uniform."""
    rows, _ = _read_table(path, TRACE_HEADER)
    if len(rows) < 8:
        raise ConfigurationError(f"{path}: a trace needs at least 8 rows")
    t = np.array([_float(r, "time_s", path, i + 2) for i, r in enumerate(rows)])
    re = np.array([_float(r, "re", path, i + 2) for i, r in enumerate(rows)])
    im = np.array([_float(r, "im", path, i + 2) for i, r in enumerate(rows)])
    steps = np.diff(t)
    if np.any(steps <= 0):
        raise ConfigurationError(f"{path}: times must be strictly increasing")
    dt = (t[-1] - t[0]) / (len(t) - 1)
    if np.max(np.abs(steps - dt)) > 1e-6 * dt:
        raise ConfigurationError(f"{path}: times must be uniformly spaced")
    return TimeTrace(float(t[0]), float(dt), re + 1j * im)


def write_transfer_csv(path, grid):
    value = np.where(grid.representable, grid.value, np.nan)
    rows = zip(
        grid.omega, value.real, value.imag, grid.log_magnitude, grid.phase,
        grid.intensity_transmission,
    )
    return _write_rows(path, TRANSFER_HEADER, rows)


def write_sweep_csv(path, rows):
    return _write_rows(path, SWEEP_HEADER, rows)


def read_observations_csv(path):
    """Read fit input rows ``control_power,optical_depth,efficiency,delay_s[,weight]``."""
    rows, header = _read_table(path, OBSERVATION_FIELDS)
    has_weight = "weight" in header
    out = []
    for i, r in enumerate(rows):
        line = i + 2
        vals = [_float(r, name, path, line) for name in OBSERVATION_FIELDS]
        weight = _float(r, "weight", path, line) if has_weight and r.get("weight") not in (None, "") else 1.0
        try:
            out.append(ObservationRow(*vals, weight=weight))
        except ConfigurationError as exc:
            raise ConfigurationError(f"{path}:{line}: {exc}") from None
    return out


def write_observations_csv(path, rows):
    table = [(r.control_power, r.optical_depth, r.efficiency, r.delay, r.weight) for r in rows]
    return _write_rows(path, OBSERVATION_FIELDS + ("weight",), table)


def dumps_json(obj, indent=2):
    """JSON text with sorted keys and 17-significant-digit floats; NaN becomes null."""
    return _encode(obj, indent, 0) + "\n"


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or obj is True or obj is False:
        return {None: "null", True: "true", False: "false"}[obj]
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return fmt(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{_encode(str(k), indent, level + 1)}: {_encode(obj[k], indent, level + 1)}"
            for k in sorted(obj)
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def write_json(path, obj):
    text = dumps_json(obj)
    if path is None or str(path) == "-":
        return text
    Path(path).write_text(text, encoding="utf-8")
    return text
