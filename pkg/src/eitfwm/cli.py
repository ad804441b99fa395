"""Command-line front end.

Every run is described by one JSON document.  Physical quantities in it are
strings with a mandatory unit suffix (``"12.8 krad/s"``, ``"2.04 kHz"``,
``"6 us"``); optical depth, ``eta_eff`` and grid counts are plain numbers.
A typical document::

    {
      "isotope": "rb85",
      "medium": {"optical_depth": 550, "gamma_gs": "12.8 krad/s",
                 "omega": "2.7 MHz"},
      "pulse": {"shape": "square", "width": "6 us"},
      "window": "60 us",
      "dt": "50 ns",
      "transfer": {"start": "-20 MHz", "stop": "20 MHz", "count": 2001},
      "sweep": {"field": "omega", "start": "1 MHz", "stop": "5 MHz",
                "count": 9, "scale": "linear"},
      "grid": {"nz": 100, "dt": "1 ns", "window": "60 us"},
      "fit": {"gamma_gs_min": "10 Hz", "gamma_gs_max": "1 MHz"}
    }

Without ``isotope`` the medium must give ``gamma_ge`` and ``delta``
explicitly, and ``eta_eff`` defaults to zero.  ``"input": "trace.csv"``
replaces the synthesized pulse by a measured trace; relative paths resolve
against the directory holding the config file.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure,
4 fit non-convergence.
"""

import argparse
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io as fileio
from .errors import ConfigurationError, EITError
from .fitting import FitConfig, fit_global
from .medium import (
    MediumParams,
    check_literature_x,
    eta_eff,
    eta_mf_table,
    fwm_strength_x,
    get_isotope,
)
from .metrics import efficiency, metrics_report
from .oracle import GridConfig, compare_with_spectral, convergence_report, integrate
from .propagation import PulseSpec, propagate, synthesize
from .transfer import transfer_grid
from .units import parse_frequency, parse_time

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_NOT_CONVERGED = 4

FREQUENCY_FIELDS = ("omega", "gamma_gs", "gamma_ge", "delta")
NUMBER_FIELDS = ("optical_depth", "eta_eff")
SWEEP_FIELDS = FREQUENCY_FIELDS + NUMBER_FIELDS


# ---------------------------------------------------------------------------
# configuration


def load_config(path):
    """Read a JSON run configuration and remember where it came from."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(cfg, dict):
        raise ConfigurationError(f"{path}: the config must be a JSON object")
    cfg["_base"] = str(Path(path).resolve().parent)
    return cfg


def _require(cfg, key, where="config"):
    if key not in cfg:
        raise ConfigurationError(f"{where}: missing required entry {key!r}")
    return cfg[key]


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{name} must be a plain number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigurationError(f"{name} must be finite")
    return float(value)


def _isotope(cfg):
    name = cfg.get("isotope")
    return None if name is None else get_isotope(name)


def _detunings(cfg):
    pair = cfg.get("idler_detunings")
    if pair is None:
        return None
    if not isinstance(pair, list) or len(pair) != 2:
        raise ConfigurationError("idler_detunings must be a list of two frequencies")
    return tuple(parse_frequency(v) for v in pair)


def build_medium(cfg, no_fwm=False):
    """:class:`MediumParams` from the ``medium`` block of ``cfg``."""
    block = _require(cfg, "medium")
    isotope = _isotope(cfg)
    known = set(FREQUENCY_FIELDS) | set(NUMBER_FIELDS)
    unknown = sorted(set(block) - known)
    if unknown:
        raise ConfigurationError(f"medium: unknown entries {unknown}")

    def freq(name, default=None):
        if name in block:
            return parse_frequency(block[name])
        if default is None:
            raise ConfigurationError(f"medium: missing required entry {name!r}")
        return default

    gamma_ge = freq("gamma_ge", isotope.gamma_ge if isotope else None)
    delta = freq("delta", isotope.ground_splitting if isotope else None)
    eta = block.get("eta_eff", "auto")
    if eta == "auto":
        eta = eta_eff(isotope, _detunings(cfg)) if isotope else 0.0
    else:
        eta = _number(eta, "medium.eta_eff")
    params = MediumParams(
        optical_depth=_number(_require(block, "optical_depth", "medium"), "medium.optical_depth"),
        gamma_ge=gamma_ge,
        gamma_gs=freq("gamma_gs"),
        delta=delta,
        omega=freq("omega"),
        eta_eff=eta,
    )
    return params.without_fwm() if no_fwm else params


def build_pulse(cfg):
    block = _require(cfg, "pulse")
    center = block.get("center")
    return PulseSpec(
        shape=_require(block, "shape", "pulse"),
        width=parse_time(_require(block, "width", "pulse")),
        amplitude=_number(block.get("amplitude", 1.0), "pulse.amplitude"),
        separation=parse_time(block["separation"]) if "separation" in block else 0.0,
        center=None if center is None else parse_time(center),
    )


def _resolve(cfg, path):
    p = Path(path)
    if not p.is_absolute():
        p = Path(cfg.get("_base", ".")) / p
    return p


def build_input(cfg):
    """Input trace: a CSV named by ``input`` or the synthesized ``pulse``."""
    if "input" in cfg:
        return fileio.read_trace_csv(_resolve(cfg, cfg["input"]))
    window = parse_time(_require(cfg, "window"))
    dt = parse_time(_require(cfg, "dt"))
    return synthesize(build_pulse(cfg), window, dt)


def build_grid(cfg):
    block = _require(cfg, "grid")
    nz = block.get("nz", 100)
    if isinstance(nz, bool) or not isinstance(nz, int):
        raise ConfigurationError(f"grid.nz must be an integer, got {nz!r}")
    window = parse_time(block["window"]) if "window" in block else parse_time(_require(cfg, "window"))
    return GridConfig(nz=nz, dt=parse_time(_require(block, "dt", "grid")), window=window)


def sweep_axis(cfg):
    """Field name and list of values (internal units) of the sweep axis."""
    block = _require(cfg, "sweep")
    field = _require(block, "field", "sweep")
    if field not in SWEEP_FIELDS:
        raise ConfigurationError(f"sweep.field must be one of {list(SWEEP_FIELDS)}, got {field!r}")
    count = block.get("count", 1)
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise ConfigurationError("sweep.count must be a positive integer")
    scale = block.get("scale", "linear")
    if scale not in ("linear", "log"):
        raise ConfigurationError("sweep.scale must be 'linear' or 'log'")
    conv = parse_frequency if field in FREQUENCY_FIELDS else (lambda v: _number(v, f"sweep.{field}"))
    start = conv(_require(block, "start", "sweep"))
    stop = conv(block.get("stop", block["start"]))
    if count == 1:
        return field, [start]
    if scale == "log":
        if start <= 0 or stop <= 0:
            raise ConfigurationError("a log sweep needs positive start and stop")
        values = np.geomspace(start, stop, count)
    else:
        values = np.linspace(start, stop, count)
    return field, [float(v) for v in values]


def build_fit_config(cfg):
    isotope = _isotope(cfg)
    if isotope is None:
        raise ConfigurationError("fit: an isotope is required")
    block = cfg.get("fit", {})
    medium = cfg.get("medium", {})
    kwargs = {"isotope": isotope}
    if "pulse" in cfg:
        kwargs["pulse"] = build_pulse(cfg)
    if "window" in cfg:
        kwargs["window"] = parse_time(cfg["window"])
    if "dt" in cfg:
        kwargs["dt"] = parse_time(cfg["dt"])
    eta = medium.get("eta_eff", "auto")
    kwargs["eta_eff"] = eta_eff(isotope, _detunings(cfg)) if eta == "auto" else _number(eta, "medium.eta_eff")
    if "delta" in medium:
        kwargs["delta"] = parse_frequency(medium["delta"])
    if "gamma_gs_min" in block or "gamma_gs_max" in block:
        default = FitConfig().gamma_gs_range
        lo = parse_frequency(block["gamma_gs_min"]) if "gamma_gs_min" in block else default[0]
        hi = parse_frequency(block["gamma_gs_max"]) if "gamma_gs_max" in block else default[1]
        if not 0 < lo < hi:
            raise ConfigurationError("fit: need 0 < gamma_gs_min < gamma_gs_max")
        kwargs["gamma_gs_range"] = (lo, hi)
    for key in ("grid_points", "max_iter"):
        if key in block:
            kwargs[key] = int(block[key])
    if "k_span" in block:
        kwargs["k_span"] = _number(block["k_span"], "fit.k_span")
    return FitConfig(**kwargs)


# ---------------------------------------------------------------------------
# subcommands


def _emit(path, text, stream):
    if path is None or str(path) == "-":
        stream.write(text)


def cmd_eta(args, stdout):
    isotope = get_isotope(args.isotope)
    detunings = None
    if args.detunings:
        detunings = tuple(parse_frequency(v) for v in args.detunings)
    table = eta_mf_table(isotope, detunings)
    mean = eta_eff(isotope, detunings)
    f_g = isotope.f_ground[0]
    stdout.write(f"{isotope.name}: eta per Zeeman sublevel of F = {f_g}\n")
    stdout.write("  m_F        eta\n")
    for m_f, value in table:
        stdout.write(f"  {str(Fraction(m_f)):>4}  {value:.6f}\n")
    stdout.write(f"  eta_eff = {mean:.6f}\n")
    report = {
        "isotope": isotope.name,
        "eta_mf": {str(Fraction(m)): v for m, v in table},
        "eta_eff": mean,
    }
    if args.optical_depth is not None:
        params = MediumParams.for_isotope(isotope, args.optical_depth, 0.0, 0.0, eta_eff=mean)
        x = fwm_strength_x(params)
        stdout.write(f"  x(D = {args.optical_depth:g}) = {x:.6f}\n")
        report["optical_depth"] = args.optical_depth
        report["x"] = x
        report["x_literature_ratio"] = check_literature_x(isotope.name, args.optical_depth, x)
    if args.out:
        fileio.write_json(args.out, report)
    return EXIT_OK


def _omega_range(cfg, args):
    block = dict(cfg.get("transfer", {}))
    for key in ("start", "stop"):
        value = getattr(args, key)
        if value is not None:
            block[key] = value
    if args.count is not None:
        block["count"] = args.count
    start = parse_frequency(_require(block, "start", "transfer"))
    stop = parse_frequency(_require(block, "stop", "transfer"))
    count = block.get("count", 1001)
    if isinstance(count, bool) or not isinstance(count, int) or count < 2:
        raise ConfigurationError("transfer.count must be an integer >= 2")
    if not stop > start:
        raise ConfigurationError("transfer: stop must exceed start")
    return np.linspace(start, stop, count)


def cmd_transfer(args, stdout):
    cfg = _config(args)
    params = build_medium(cfg, args.no_fwm)
    grid = transfer_grid(_omega_range(cfg, args), params)
    text = fileio.write_transfer_csv(args.out, grid)
    _emit(args.out, text, stdout)
    return EXIT_OK


def run_propagation(trace, params, trim=False):
    """Propagate ``trace`` and build its metrics report."""
    out = propagate(trace, params)
    report = metrics_report(out, trace, params)
    if trim:
        out = out.trimmed(len(trace))
    return out, report


def cmd_propagate(args, stdout):
    cfg = _config(args)
    params = build_medium(cfg, args.no_fwm)
    trace = build_input(cfg)
    out, report = run_propagation(trace, params, args.trim_window)
    report["samples"] = len(out)
    report["window_s"] = out.duration
    if args.out:
        fileio.write_trace_csv(args.out, out)
    text = fileio.write_json(args.metrics, report)
    _emit(args.metrics, text, stdout)
    return EXIT_OK


def sweep_point(job):
    """One sweep row; failures become NaN metrics plus a message."""
    field, value, base, trace = job
    nan = math.nan
    try:
        params = base.replace(**{field: value})
        out = propagate(trace, params)
        report = metrics_report(out, trace, params)
    except EITError as exc:
        return (value, nan, nan, nan, nan, nan, nan), f"{field} = {value:.17g}: {exc}"
    eff, dly = report["efficiency"], report["delay_s"]
    row = (value, eff, dly, report["fwhm_s"], report["dbp"], report["fwm_gain"], dly * eff)
    return row, None


def run_sweep(field, values, base, trace, jobs=1):
    """Rows in axis order and the list of failure messages."""
    tasks = [(field, v, base, trace) for v in values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(sweep_point, tasks))
    else:
        results = [sweep_point(t) for t in tasks]
    rows = [row for row, _ in results]
    failures = [msg for _, msg in results if msg is not None]
    return rows, failures


def cmd_sweep(args, stdout):
    cfg = _config(args)
    base = build_medium(cfg, args.no_fwm)
    trace = build_input(cfg)
    field, values = sweep_axis(cfg)
    if args.no_fwm and field == "eta_eff":
        raise ConfigurationError("--no-fwm conflicts with a sweep over eta_eff")
    rows, failures = run_sweep(field, values, base, trace, max(1, args.jobs))
    for msg in failures:
        print(f"sweep point failed: {msg}", file=sys.stderr)
    text = fileio.write_sweep_csv(args.out, rows)
    _emit(args.out, text, stdout)
    if len(failures) == len(rows):
        print("every sweep point failed", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_fit(args, stdout):
    cfg = _config(args) if args.config else {}
    rows = fileio.read_observations_csv(args.data)
    if not cfg:
        cfg = {"isotope": "rb85"}
    config = build_fit_config(cfg)
    result = fit_global(rows, config)
    report = result.to_dict()
    report["gamma_gs"] = f"{fileio.fmt(result.gamma_gs)} rad/s"
    report["gamma_gs_hz"] = result.gamma_gs / (2 * math.pi)
    report["rows"] = len(rows)
    text = fileio.write_json(args.out, report)
    _emit(args.out, text, stdout)
    if not result.converged:
        print("fit did not converge; best-so-far parameters reported", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _sibling(path, suffix):
    p = Path(path)
    return p.with_name(f"{p.stem}_{suffix}.csv")


def cmd_oracle(args, stdout):
    cfg = _config(args)
    params = build_medium(cfg, args.no_fwm)
    trace = build_input(cfg)
    grid = build_grid(cfg)
    grid.check(params)
    result = integrate(trace, params, grid)
    levels = cfg.get("oracle", {}).get("convergence_levels", 3)
    if args.no_convergence:
        levels = 0
    report = {
        "relative_l2_error": compare_with_spectral(trace, params, grid, result),
        "grid": {"nz": grid.nz, "dt_s": grid.dt, "window_s": grid.window},
        "idler_max_abs": float(np.abs(result.idler.samples).max()),
        "signal_efficiency": efficiency(result.signal, trace),
        "convergence": None,
    }
    if levels and levels >= 2:
        report["convergence"] = convergence_report(trace, params, grid, levels).to_dict()
    signal_path, idler_path = args.signal, args.idler
    if args.out and signal_path is None:
        signal_path = _sibling(args.out, "signal")
    if args.out and idler_path is None:
        idler_path = _sibling(args.out, "idler")
    if signal_path:
        fileio.write_trace_csv(signal_path, result.signal)
    if idler_path:
        fileio.write_trace_csv(idler_path, result.idler)
    text = fileio.write_json(args.out, report)
    _emit(args.out, text, stdout)
    return EXIT_OK


def _config(args):
    if not args.config:
        raise ConfigurationError(f"{args.command}: --config is required")
    return load_config(args.config)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="JSON run configuration")
    shared.add_argument("--out", help="output file ('-' or omitted: standard output)")
    shared.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
    shared.add_argument("--no-fwm", action="store_true", help="force the 4WM coupling to zero")
    shared.add_argument(
        "--trim-window", action="store_true",
        help="cut the propagated trace back to the input window",
    )

    parser = argparse.ArgumentParser(
        prog="eitfwm", description="EIT slow light with four-wave mixing in a Lambda medium."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eta", parents=[shared], help="per-sublevel eta and eta_eff")
    p.add_argument("isotope", help="rb85 or rb87")
    p.add_argument("--optical-depth", type=float, help="also report x at this optical depth")
    p.add_argument("--detunings", nargs=2, metavar=("LOWER", "UPPER"),
                   help="idler detunings from the two excited levels, with units")
    p.set_defaults(func=cmd_eta)

    p = sub.add_parser("transfer", parents=[shared], help="transfer function on a frequency grid")
    p.add_argument("--start", help="first angular frequency offset, with units")
    p.add_argument("--stop", help="last angular frequency offset, with units")
    p.add_argument("--count", type=int, help="number of grid points")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("propagate", parents=[shared], help="propagate one input pulse")
    p.add_argument("--metrics", help="metrics JSON path (default: standard output)")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("sweep", parents=[shared], help="propagate over a parameter axis")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", parents=[shared], help="global fit of gamma_gs and k")
    p.add_argument("data", help="CSV with control_power,optical_depth,efficiency,delay_s[,weight]")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("oracle", parents=[shared], help="Maxwell-Bloch integrator vs spectral path")
    p.add_argument("--signal", help="signal trace CSV (default: next to --out)")
    p.add_argument("--idler", help="idler trace CSV (default: next to --out)")
    p.add_argument("--no-convergence", action="store_true", help="skip the refinement study")
    p.set_defaults(func=cmd_oracle)
    return parser


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.showwarning = _show_warning
        try:
            return args.func(args, stdout)
        except ConfigurationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except EITError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return exc.exit_code
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
