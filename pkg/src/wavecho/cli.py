"""Command-line entry point.

Subcommands: ``synthesize`` (flume gauge CSVs + manifest), ``sweep``
(code x sea-state x parameter-grid forecasting runs, report + summary CSVs),
``trace`` (per-sample truth/prediction trace of one run), ``verify``
(oracle/property self-checks).

Configuration is a flat key=value text file; command-line flags take highest
precedence, then WAVECHO_OUT for the output directory, then the file.
"""

import argparse
import os
import sys
from pathlib import Path

from .errors import ConfigurationError, WavechoError
from .flume import FlumeConfig, synthesize_series
from .forecaster import (
    ForecastConfig,
    evaluate,
    run_key,
    derive_seed,
    summarize,
    sweep as run_sweep,
)
from .reservoir import ReservoirParams
from .series import load_gauge_csv, save_gauge_csv
from .topology import parse_code
from .verify import run_checks

DEFAULTS = {
    "seed": 0,
    "out": "runs",
    "jobs": 1,
    "desk_scale": True,
    "codes": "0001,1111",
    "sea_states": "0.5:8,1:8,1:10,1:12,2:10",
    "grid": "0.1,0.3,0.5,0.7,0.9",
    "train_duration": 900.0,
    "eval_duration": 600.0,
    "full_eval_duration": 5400.0,
    "spinup": 600.0,
    "stride": 2,
    "washout": 100,
    "ridge": 1e-6,
    "fft_window": 16,
    "sample_rate": 1.0,
    "horizon": 0,            # 0 = two peak periods
    "online_updates": True,
    "divergence_factor": 50.0,
    "bootstrap": 10000,
    # flume
    "flume_duration": 0.0,   # 0 = train + eval + margin
    "full_flume_duration": 7200.0,
    "cells": 800,
    "length": 4000.0,
    "gauge_x": 3500.0,
    "wavemaker_center": 500.0,
    "sponge_cells": 50,
    "manning_n": 0.025,
    "slope": 0.01,
    "slope_toe_x": 1000.0,
    "depth_offshore": 30.0,
    "depth_nearshore": 5.0,
    "courant": 0.5,
    # trace
    "trace_code": "1111",
    "trace_alpha": 0.5,
    "trace_rho": 0.5,
    "trace_beta": 0.5,
    "trace_hs": 2.0,
    "trace_tp": 10.0,
}


def _coerce(key, text):
    default = DEFAULTS[key]
    if isinstance(default, bool):
        low = text.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigurationError(f"{key} expects a boolean, got {text!r}")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text.strip()


def load_config(path=None) -> dict:
    """Flat key = value file; '#' starts a comment; unknown keys rejected."""
    config = dict(DEFAULTS)
    if path is None:
        return config
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in DEFAULTS:
                raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
            config[key] = _coerce(key, value)
    return config


def parse_sea_states(text):
    states = []
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        try:
            hs, tp = chunk.split(":")
            states.append((float(hs), float(tp)))
        except ValueError as exc:
            raise ConfigurationError(f"bad sea state {chunk!r} (want Hs:Tp)") from exc
    return states


def parse_codes(text):
    codes = [c.strip() for c in text.split(",") if c.strip()]
    for code in codes:
        parse_code(code)
    return codes


def parse_grid(text):
    values = tuple(float(v) for v in text.split(",") if v.strip())
    if not values:
        raise ConfigurationError("empty parameter grid")
    return values


def _effective(config):
    """Resolve desk-scale presets into concrete durations."""
    cfg = dict(config)
    if not cfg["desk_scale"]:
        cfg["eval_duration"] = cfg["full_eval_duration"]
        if cfg["flume_duration"] == 0.0:
            cfg["flume_duration"] = cfg["full_flume_duration"]
    if cfg["flume_duration"] == 0.0:
        cfg["flume_duration"] = cfg["train_duration"] + cfg["eval_duration"] + 60.0
    return cfg


def _flume_config(cfg) -> FlumeConfig:
    return FlumeConfig(
        length=cfg["length"], cells=cfg["cells"],
        wavemaker_center=cfg["wavemaker_center"],
        sponge_cells=cfg["sponge_cells"], gauge_x=cfg["gauge_x"],
        courant=cfg["courant"], manning_n=cfg["manning_n"],
        duration=cfg["flume_duration"], output_rate=cfg["sample_rate"],
        depth_offshore=cfg["depth_offshore"],
        depth_nearshore=cfg["depth_nearshore"],
        slope_toe_x=cfg["slope_toe_x"], slope=cfg["slope"],
    )


def _forecast_config(cfg) -> ForecastConfig:
    return ForecastConfig(
        training_duration=cfg["train_duration"],
        evaluation_duration=cfg["eval_duration"],
        stride=cfg["stride"],
        horizon=cfg["horizon"] or None,
        sample_rate=cfg["sample_rate"],
        washout=cfg["washout"],
        ridge=cfg["ridge"],
        fft_window=cfg["fft_window"],
        online_updates=cfg["online_updates"],
        divergence_factor=cfg["divergence_factor"],
    )


def gauge_path(out: Path, hs: float, tp: float) -> Path:
    return out / f"gauge_hs{hs:g}_tp{tp:g}.csv"


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def cmd_synthesize(cfg, force: bool) -> int:
    states = parse_sea_states(cfg["sea_states"])
    if not states:
        print("error: no sea states configured", file=sys.stderr)
        return 2
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    flume_cfg = _flume_config(cfg)
    failures = []
    rows = []
    for hs, tp in states:
        path = gauge_path(out, hs, tp)
        scenario = f"hs{hs:g}_tp{tp:g}"
        if path.exists() and not force:
            print(f"keep {path}")
        else:
            try:
                series = synthesize_series(hs, tp, flume_cfg, cfg["seed"],
                                           spinup=cfg["spinup"])
                save_gauge_csv(series, path)
                print(f"wrote {path}")
            except WavechoError as exc:
                failures.append((scenario, str(exc)))
                continue
        rows.append((scenario, hs, tp, str(path)))
    manifest = out / "manifest.csv"
    with open(manifest, "w") as fh:
        fh.write("scenario_id,Hs,Tp,path\n")
        for scenario, hs, tp, path in sorted(rows):
            fh.write(f"{scenario},{_fmt(hs)},{_fmt(tp)},{path}\n")
    print(f"wrote {manifest}")
    for scenario, message in failures:
        print(f"error: scenario {scenario}: {message}", file=sys.stderr)
    return 1 if failures else 0


def _load_gauges(cfg):
    out = Path(cfg["out"])
    gauges = []
    for hs, tp in parse_sea_states(cfg["sea_states"]):
        path = gauge_path(out, hs, tp)
        if not path.exists():
            raise ConfigurationError(
                f"missing gauge file {path}; run `wavecho synthesize` first"
            )
        gauges.append(load_gauge_csv(path))
    return gauges


def write_report_csv(reports, path) -> None:
    with open(path, "w") as fh:
        fh.write("code,alpha,rho,beta,Hs,Tp,rms,n_segments,diverged\n")
        for r in reports:
            fh.write(",".join([
                r.code, _fmt(r.alpha), _fmt(r.rho), _fmt(r.beta_max),
                _fmt(r.hs), _fmt(r.tp), _fmt(r.rms), str(r.n_segments),
                str(int(r.diverged)),
            ]) + "\n")


def write_summary_csv(rows, path) -> None:
    with open(path, "w") as fh:
        fh.write("code,Hs,Tp,median_rms,q1,q3,ci_lo,ci_hi,n,n_failed\n")
        for row in rows:
            fh.write(",".join([
                row["code"], _fmt(row["hs"]), _fmt(row["tp"]),
                _fmt(row["median_rms"]), _fmt(row["q1"]), _fmt(row["q3"]),
                _fmt(row["ci_lo"]), _fmt(row["ci_hi"]),
                str(row["n"]), str(row["n_failed"]),
            ]) + "\n")


def cmd_sweep(cfg, jobs: int) -> int:
    try:
        gauges = _load_gauges(cfg)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    codes = parse_codes(cfg["codes"])
    reports = run_sweep(
        gauges, codes, grid=parse_grid(cfg["grid"]),
        config=_forecast_config(cfg), master_seed=cfg["seed"], jobs=jobs,
    )
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    write_report_csv(reports, out / "report.csv")
    write_summary_csv(summarize(reports, n_boot=cfg["bootstrap"], seed=cfg["seed"]),
                      out / "summary.csv")
    print(f"wrote {out / 'report.csv'} ({len(reports)} runs)")
    print(f"wrote {out / 'summary.csv'}")
    failed = [r for r in reports if r.error is not None]
    for r in failed:
        key = run_key(r.code, r.alpha, r.rho, r.beta_max, r.hs, r.tp)
        print(f"error: run {key}: {r.error}", file=sys.stderr)
    return 1 if failed else 0


def cmd_trace(cfg) -> int:
    hs, tp = cfg["trace_hs"], cfg["trace_tp"]
    out = Path(cfg["out"])
    path = gauge_path(out, hs, tp)
    if not path.exists():
        print(f"error: missing gauge file {path}; run `wavecho synthesize` first",
              file=sys.stderr)
        return 1
    series = load_gauge_csv(path)
    params = ReservoirParams(
        alpha=cfg["trace_alpha"], rho=cfg["trace_rho"], beta_max=cfg["trace_beta"],
        dt=1.0 / cfg["sample_rate"],
        seed=derive_seed(cfg["seed"], run_key(cfg["trace_code"], cfg["trace_alpha"],
                                              cfg["trace_rho"], cfg["trace_beta"],
                                              hs, tp)),
    )
    try:
        report = evaluate(series, cfg["trace_code"], params, _forecast_config(cfg))
    except WavechoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    trace_path = out / "trace.csv"
    with open(trace_path, "w") as fh:
        fh.write("t,truth,prediction,phase\n")
        for t, truth, pred, phase in zip(report.display_t, report.display_truth,
                                         report.display_pred, report.display_phase):
            fh.write(f"{_fmt(float(t))},{_fmt(float(truth))},"
                     f"{_fmt(float(pred))},{phase}\n")
    print(f"wrote {trace_path} (rms {report.rms:g} over {report.n_segments} segments)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value configuration file")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--out", help="output directory")
    common.add_argument("--force", action="store_true",
                        help="recompute existing outputs")
    common.add_argument("--jobs", type=int, help="parallel worker count")
    common.add_argument("--desk-scale", action="store_true",
                        help="force desk-scale durations")

    parser = argparse.ArgumentParser(prog="wavecho",
                                     description="shallow-water wave forecasting "
                                                 "with structured echo state networks")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("synthesize", parents=[common],
                   help="generate gauge series for the configured sea states")
    sub.add_parser("sweep", parents=[common],
                   help="run the code x sea-state x parameter sweep")
    sub.add_parser("trace", parents=[common],
                   help="emit the truth/prediction trace of a single run")
    verify_p = sub.add_parser("verify", parents=[common],
                              help="run oracle and property self-checks")
    verify_p.add_argument("--quick", action="store_true",
                          help="reduced iteration counts")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if os.environ.get("WAVECHO_OUT"):
        cfg["out"] = os.environ["WAVECHO_OUT"]
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.out is not None:
        cfg["out"] = args.out
    if args.jobs is not None:
        cfg["jobs"] = args.jobs
    if args.desk_scale:
        cfg["desk_scale"] = True
    try:
        cfg = _effective(cfg)
        if args.command == "synthesize":
            return cmd_synthesize(cfg, args.force)
        if args.command == "sweep":
            return cmd_sweep(cfg, cfg["jobs"])
        if args.command == "trace":
            return cmd_trace(cfg)
        if args.command == "verify":
            return 1 if run_checks(quick=args.quick) else 0
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
