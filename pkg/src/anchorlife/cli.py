"""Command-line front end: fit, compare, extrapolate, detect, rate.

Every command writes a JSON report (schema_version 1). Numbers are emitted
in shortest round-trip form, so re-parsing reproduces the doubles exactly;
reports are byte-identical across runs except for the timestamp field.
Exit codes: 0 success, 1 usage or I/O problems, 2 numerical failures (the
report still carries the diagnostic where one can be written).

The report directory defaults to $ANCHORLIFE_REPORT_DIR (falling back to
the working directory) unless --out gives an explicit path.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .dataset import (
    BUILTIN_DATASET_NAMES,
    TtfDataset,
    builtin_dataset,
    dataset_to_csv,
    load_dataset,
    load_rates,
    load_series,
)
from .errors import (
    AnchorLifeError,
    BandError,
    DataError,
    DetectionError,
    FitError,
    ModelDomainError,
)
from .fitting import (
    FIFTY_YEARS_HOURS,
    FitConfig,
    FitResult,
    compare_models,
    confidence_band,
    default_config,
    fit,
    safe_load,
)
from .models import ModelKind, asymptote, eval_model, make_params, param_values
from .signal import (
    DetectionConfig,
    detect_failure_intersection,
    detect_failure_pressure,
    rate_sensitivity,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2

SCHEMA_VERSION = 1

_RATE_DEFINITION_NOTE = (
    "percent_per_decade is the capacity ratio across one decade of loading rate "
    "(10**exponent - 1); some published assessments quote 100*exponent instead, "
    "which understates the decade ratio"
)


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; the contract
    reserves 2 for numerical failures, so remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _json_safe(obj):
    """Recursively convert payloads to JSON-encodable values.

    Non-finite floats must not leak into reports (json would emit
    non-standard tokens), so they become "inf"/"-inf"/null markers.
    """
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _json_safe(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        if math.isnan(f):
            return None
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, ModelKind):
        return obj.value
    return obj


def _sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _input_fingerprint(args) -> tuple[TtfDataset, dict]:
    if getattr(args, "builtin", None):
        ds = builtin_dataset(args.builtin)
        digest = hashlib.sha256(dataset_to_csv(ds).encode()).hexdigest()
        return ds, {"builtin": args.builtin, "sha256": digest}
    ds = load_dataset(args.csv)
    return ds, {"path": str(args.csv), "sha256": _sha256_file(args.csv)}


def _report_path(args, default_name: str) -> str:
    if args.out:
        return args.out
    directory = os.environ.get("ANCHORLIFE_REPORT_DIR", ".")
    return os.path.join(directory, default_name)


def _write_report(path: str, payload: dict) -> None:
    payload = dict(payload)
    payload["timestamp"] = datetime.now(timezone.utc).isoformat()
    text = json.dumps(_json_safe(payload), indent=2, sort_keys=True)
    with open(path, "w") as fh:
        fh.write(text + "\n")


def _envelope(command: str, argv, input_field=None) -> dict:
    body = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "argv": list(argv),
        "warnings": [],
    }
    if input_field is not None:
        body["input"] = input_field
    return body


def _parse_assignments(pairs, what: str) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise DataError(f"{what} must look like name=value, got {pair!r}")
        name, _, raw = pair.partition("=")
        try:
            out[name.strip()] = float(raw)
        except ValueError:
            raise DataError(f"cannot parse {what} value {raw!r} for {name!r}") from None
    return out


def _fit_result_payload(result: FitResult) -> dict:
    return {
        "model": result.kind.value,
        "params": param_values(result.params),
        "fixed": dict(result.fixed),
        "free_names": list(result.free_names),
        "residual_domain": result.residual_domain,
        "sse": result.sse,
        "rmse": result.rmse,
        "r_squared": result.r_squared,
        "covariance": None if result.covariance is None else result.covariance.tolist(),
        "n_points": result.n_points,
        "converged": result.converged,
        "iterations": result.iterations,
    }


def _model_kind(name: str) -> ModelKind:
    try:
        return ModelKind(name)
    except ValueError:
        raise DataError(
            f"unknown model {name!r}; choose from: "
            + ", ".join(k.value for k in ModelKind)
        ) from None


def _band_samples(result: FitResult, times, level: float):
    """Band rows for the report; None bounds when no band is available."""
    try:
        band = confidence_band(result, times, level=level)
        return [
            {"t_h": float(tv), "fit": float(eval_model(result.params, float(tv))),
             "lower": float(lo), "upper": float(hi)}
            for tv, (lo, hi) in zip(times, band)
        ], None
    except BandError as exc:
        rows = [
            {"t_h": float(tv), "fit": float(eval_model(result.params, float(tv))),
             "lower": None, "upper": None}
            for tv in times
        ]
        return rows, str(exc)


def _curve_times(dataset: TtfDataset, n_samples: int) -> np.ndarray:
    t_min = min(p.failure_time for p in dataset.uncensored()) / 10.0
    return np.exp(np.linspace(math.log(t_min), math.log(FIFTY_YEARS_HOURS), n_samples))


def _write_curve_csv(path, result, times, level):
    rows, band_note = _band_samples(result, times, level)
    with open(path, "w", newline="") as fh:
        fh.write("t_h,y_fit,y_lower,y_upper\n")
        for row in rows:
            lo = "nan" if row["lower"] is None else repr(row["lower"])
            hi = "nan" if row["upper"] is None else repr(row["upper"])
            fh.write(f"{row['t_h']!r},{row['fit']!r},{lo},{hi}\n")
    return band_note


# --------------------------------------------------------------------------
# subcommands


def _cmd_fit(args, argv) -> int:
    dataset, fingerprint = _input_fingerprint(args)
    payload = _envelope("fit", argv, fingerprint)
    path = _report_path(args, "fit_report.json")
    kind = _model_kind(args.model)
    fixed = _parse_assignments(args.fix or [], "--fix")
    merged = dict(default_config(kind).fixed)
    if args.free_kappa_0:
        merged.pop("kappa_0", None)
    merged.update(fixed)
    config = FitConfig(kind=kind, fixed=merged, residual_domain=args.residual_domain)
    payload["config"] = {
        "fixed": dict(config.fixed),
        "residual_domain": config.domain,
        "max_iterations": config.max_iterations,
        "tolerance": config.tolerance,
    }
    payload["warnings"].extend(dataset.warnings)
    try:
        result = fit(dataset, config)
    except (FitError, ModelDomainError) as exc:
        payload["error"] = str(exc)
        _write_report(path, payload)
        print(f"fit failed: {exc} (report: {path})", file=sys.stderr)
        return EXIT_NUMERIC
    payload["warnings"].extend(result.warnings)
    payload["result"] = _fit_result_payload(result)
    payload["safe_load"] = {
        "service_life_h": FIFTY_YEARS_HOURS,
        "value": safe_load(result, FIFTY_YEARS_HOURS) if result.converged else None,
    }
    band_times = _curve_times(dataset, 25)
    rows, band_note = _band_samples(result, band_times, args.level)
    payload["band"] = {"level": args.level, "samples": rows}
    if band_note:
        payload["warnings"].append(band_note)
    if args.curve_out:
        curve_note = _write_curve_csv(
            args.curve_out, result, _curve_times(dataset, args.curve_samples), args.level
        )
        if curve_note and curve_note not in payload["warnings"]:
            payload["warnings"].append(curve_note)
    _write_report(path, payload)
    pv = ", ".join(f"{k}={v:.6g}" for k, v in param_values(result.params).items())
    print(f"{result.kind.value} fit on {dataset.id}: {pv} (SSE {result.sse:.6g})")
    print(f"report: {path}")
    if not result.converged:
        print("fit did not converge", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _cmd_compare(args, argv) -> int:
    dataset, fingerprint = _input_fingerprint(args)
    payload = _envelope("compare", argv, fingerprint)
    path = _report_path(args, "compare_report.json")
    if args.models.strip().lower() == "all":
        kinds = list(ModelKind)
    else:
        kinds = [_model_kind(text.strip()) for text in args.models.split(",") if text.strip()]
    if not kinds:
        raise DataError("no models requested")
    payload["warnings"].extend(dataset.warnings)
    report = compare_models(dataset, kinds)
    rows = []
    for rank, row in enumerate(report.rows, start=1):
        if row.result is None:
            rows.append({"model": row.kind.value, "error": row.error})
            payload["warnings"].append(f"{row.kind.value}: fit failed: {row.error}")
            continue
        entry = _fit_result_payload(row.result)
        entry.update(
            rank=rank,
            safe_load_50y=row.safe_load_50y,
            asymptote_long_time=row.asymptote_long_time,
        )
        rows.append(entry)
        payload["warnings"].extend(row.result.warnings)
    payload["ranking"] = rows
    _write_report(path, payload)
    print(f"compared {len(kinds)} model(s) on {dataset.id}; report: {path}")
    for row in rows:
        if "error" in row:
            print(f"  {row['model']:14s} FAILED: {row['error']}")
        else:
            print(
                f"  #{row['rank']} {row['model']:14s} SSE={row['sse']:.6g} "
                f"safe50y={row['safe_load_50y']:.4f}"
            )
    return EXIT_OK


def _cmd_extrapolate(args, argv) -> int:
    kind = _model_kind(args.model)
    service_life_h = args.service_life_years * 8760.0
    path = _report_path(args, "extrapolate_report.json")
    if args.params:
        values = _parse_assignments(args.params.split(","), "--params")
        params = make_params(kind, values)
        payload = _envelope("extrapolate", argv, {"params": values})
        value = float(eval_model(params, service_life_h))
        warnings = list(getattr(params, "nonphysical_warnings", lambda: ())())
        payload["warnings"].extend(warnings)
    else:
        if not (args.builtin or args.csv):
            raise DataError("extrapolate needs --params or a dataset (--builtin/--csv)")
        dataset, fingerprint = _input_fingerprint(args)
        payload = _envelope("extrapolate", argv, fingerprint)
        fixed = _parse_assignments(args.fix or [], "--fix")
        config = default_config(kind)
        if fixed:
            merged = dict(config.fixed)
            merged.update(fixed)
            config = FitConfig(kind=kind, fixed=merged)
        payload["warnings"].extend(dataset.warnings)
        try:
            result = fit(dataset, config)
        except (FitError, ModelDomainError) as exc:
            payload["error"] = str(exc)
            _write_report(path, payload)
            print(f"extrapolation failed: {exc} (report: {path})", file=sys.stderr)
            return EXIT_NUMERIC
        payload["warnings"].extend(result.warnings)
        payload["result"] = _fit_result_payload(result)
        params = result.params
        value = safe_load(result, service_life_h)
    payload["safe_load"] = {
        "service_life_years": args.service_life_years,
        "service_life_h": service_life_h,
        "value": value,
        "asymptote_long_time": asymptote(params, "long_time"),
    }
    _write_report(path, payload)
    print(
        f"safe load level at {args.service_life_years:g} years "
        f"({service_life_h:g} h): {value:.6f}"
    )
    print(f"report: {path}")
    return EXIT_OK


def _cmd_detect(args, argv) -> int:
    payload = _envelope(
        "detect", argv, {"path": str(args.series), "sha256": _sha256_file(args.series)}
    )
    path = _report_path(args, "detect_report.json")
    series = load_series(args.series, load_target=args.target, full_load_time=args.full_load_time)
    config = DetectionConfig(
        method="pressure_drop" if args.method == "pressure" else "intersection",
        hysteresis=args.hysteresis,
    )
    payload["config"] = {
        "method": config.method,
        "hysteresis": config.hysteresis,
        "load_target": series.load_target,
        "full_load_time_s": series.full_load_time,
    }
    try:
        if config.method == "pressure_drop":
            t_fail = detect_failure_pressure(series, config)
        else:
            t_fail = detect_failure_intersection(series, config, t_f_hint=args.hint)
    except DetectionError as exc:
        payload["error"] = str(exc)
        _write_report(path, payload)
        print(f"detection failed: {exc} (report: {path})", file=sys.stderr)
        return EXIT_NUMERIC
    censored = t_fail is None
    payload["result"] = {
        "censored": censored,
        "failure_time_s": None if censored else t_fail,
        "failure_time_h": None if censored else t_fail / 3600.0,
    }
    if censored:
        hold = series.times[-1] - series.full_load_time
        payload["result"]["hold_time_s"] = hold
        payload["warnings"].append(
            "no qualifying load drop: test did not fail; hold time is a censored lower bound"
        )
    _write_report(path, payload)
    if censored:
        print("no failure detected (censored record)")
    else:
        print(f"failure at {t_fail:.6g} s after full load application")
    print(f"report: {path}")
    return EXIT_OK


def _cmd_rate(args, argv) -> int:
    payload = _envelope(
        "rate", argv, {"path": str(args.csv), "sha256": _sha256_file(args.csv)}
    )
    path = _report_path(args, "rate_report.json")
    points = load_rates(args.csv)
    sens = rate_sensitivity(points)
    payload["result"] = {
        "n_points": len(points),
        "exponent": sens.exponent,
        "percent_per_decade": sens.percent_per_decade,
    }
    payload["warnings"].append(_RATE_DEFINITION_NOTE)
    _write_report(path, payload)
    print(
        f"rate sensitivity: exponent {sens.exponent:.4f} "
        f"({sens.percent_per_decade:.2%} per decade)"
    )
    print(f"report: {path}")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _add_dataset_args(sub, required=True):
    group = sub.add_mutually_exclusive_group(required=required)
    group.add_argument(
        "--builtin", choices=BUILTIN_DATASET_NAMES, help="bundled literature dataset"
    )
    group.add_argument("--csv", help="failure-data CSV (load_level,failure_time_h[,censored])")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="anchorlife",
        description="Fit, compare and extrapolate sustained-load time-to-failure models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit one model family to a dataset")
    _add_dataset_args(p_fit)
    p_fit.add_argument("--model", required=True, help="model family name")
    p_fit.add_argument(
        "--fix", action="append", metavar="NAME=VALUE", help="pin a parameter (repeatable)"
    )
    p_fit.add_argument(
        "--free-kappa-0",
        action="store_true",
        help="let kappa_0 float instead of pinning it at 1.0",
    )
    p_fit.add_argument(
        "--residual-domain", choices=["linear_y_log_t", "log_y_log_t"], default=None
    )
    p_fit.add_argument("--level", type=float, default=0.95, help="confidence band level")
    p_fit.add_argument("--curve-out", help="write sampled curve + band CSV here")
    p_fit.add_argument("--curve-samples", type=int, default=200)
    p_fit.add_argument("--out", help="report path")
    p_fit.set_defaults(func=_cmd_fit)

    p_cmp = sub.add_parser("compare", help="fit several families and rank them")
    _add_dataset_args(p_cmp)
    p_cmp.add_argument("--models", default="all", help="'all' or comma-separated names")
    p_cmp.add_argument("--out", help="report path")
    p_cmp.set_defaults(func=_cmd_compare)

    p_ext = sub.add_parser("extrapolate", help="safe load level at a service life")
    _add_dataset_args(p_ext, required=False)
    p_ext.add_argument("--model", required=True)
    p_ext.add_argument("--params", help="explicit parameters, e.g. a=-0.05,b=1.0")
    p_ext.add_argument("--fix", action="append", metavar="NAME=VALUE")
    p_ext.add_argument("--service-life-years", type=float, default=50.0)
    p_ext.add_argument("--out", help="report path")
    p_ext.set_defaults(func=_cmd_extrapolate)

    p_det = sub.add_parser("detect", help="extract the failure time from a raw record")
    p_det.add_argument("--series", required=True, help="raw record CSV")
    p_det.add_argument("--method", choices=["pressure", "intersection"], required=True)
    p_det.add_argument("--target", type=float, default=0.0, help="sustained load target")
    p_det.add_argument("--full-load-time", type=float, default=None)
    p_det.add_argument("--hysteresis", type=float, default=0.02)
    p_det.add_argument("--hint", type=float, default=None, help="initial failure-time guess (s)")
    p_det.add_argument("--out", help="report path")
    p_det.set_defaults(func=_cmd_detect)

    p_rate = sub.add_parser("rate", help="loading-rate sensitivity from a rate study CSV")
    p_rate.add_argument("--csv", required=True)
    p_rate.add_argument("--out", help="report path")
    p_rate.set_defaults(func=_cmd_rate)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AnchorLifeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
