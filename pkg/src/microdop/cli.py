"""Command line interface: simulate, sweep, analyze, validate."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
import yaml

from . import io_formats
from .batch import run_batch, run_single
from .config import ConfigError, build_run_config, load_config, merge_preset
from .dsp import DopplerSpectrum, doppler_spread, impulse_spacing


def _add_common(parser):
    parser.add_argument("--config", "-c", required=True, help="YAML run config")
    parser.add_argument("--output-dir", "-o", default=None,
                        help="override the config's output directory")
    parser.add_argument("--seed", type=int, default=None, help="override seed")
    parser.add_argument("--subsample", type=int, default=None,
                        help="override slow-time subsampling factor")
    parser.add_argument("--format", choices=("binary", "csv", "both"),
                        default=None, help="override export format")
    parser.add_argument("--save-frames", action="store_true",
                        help="also export raw complex frames")


def _load_raw(args) -> dict:
    raw = yaml.safe_load(Path(args.config).read_text())
    if raw is None:
        raise ConfigError([f"{args.config}: empty configuration"])
    if args.seed is not None:
        raw["seed"] = args.seed
        raw.setdefault("scene", {})["seed"] = args.seed
    if args.output_dir is not None:
        raw["output_dir"] = args.output_dir
    if args.subsample is not None:
        raw.setdefault("dsp", {})["subsample"] = args.subsample
    if args.format is not None:
        raw["format"] = args.format
    return raw


def _cmd_simulate(args) -> int:
    raw = _load_raw(args)
    raw.pop("sweep", None)
    cfg = build_run_config(merge_preset(raw))
    record = run_single(cfg, cfg.output_dir, "run0000",
                        save_frames=args.save_frames)
    io_formats.write_manifest(cfg.output_dir / "manifest.json",
                              [record.to_dict()])
    print(json.dumps(record.to_dict(), indent=2))
    return 0


def _cmd_sweep(args) -> int:
    raw = _load_raw(args)
    records, out_dir = run_batch(raw, save_frames=args.save_frames)
    failures = [r for r in records if r.error is not None]
    print(f"{len(records)} runs -> {out_dir} ({len(failures)} failed)")
    for rec in failures:
        print(f"  {rec.run_id}: {rec.error}", file=sys.stderr)
    return 1 if failures else 0


def _cmd_analyze(args) -> int:
    array, axes = io_formats.read_binary(args.payload)
    if array.ndim != 1:
        print("analyze expects a 1-D Doppler spectrum payload", file=sys.stderr)
        return 1
    start, step = axes[0]
    spec = DopplerSpectrum(magnitude=np.abs(array).astype(float),
                           freq_axis=start + step * np.arange(len(array)))
    out = {"doppler_spread_hz": doppler_spread(spec, args.floor_margin_db)}
    try:
        out["impulse_spacing_hz"] = impulse_spacing(spec, args.peak_threshold_db)
    except ValueError as exc:
        out["impulse_spacing_hz"] = None
        out["note"] = str(exc)
    print(json.dumps(out, indent=2))
    return 0


def _cmd_validate(args) -> int:
    from .validate import run_validation
    return 0 if run_validation(verbose=True) else 1


def _cmd_verify(args) -> int:
    problems = io_formats.verify_manifest(args.manifest)
    for p in problems:
        print(p, file=sys.stderr)
    print("manifest OK" if not problems else f"{len(problems)} problems")
    return 1 if problems else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="microdop",
        description="Bistatic OFDM micro-Doppler signature simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a single configuration")
    _add_common(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run a batch over the sweep section")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_an = sub.add_parser("analyze", help="metrics on an existing payload")
    p_an.add_argument("payload", help="binary spectrum payload (.mds)")
    p_an.add_argument("--peak-threshold-db", type=float, default=10.0)
    p_an.add_argument("--floor-margin-db", type=float, default=6.0)
    p_an.set_defaults(func=_cmd_analyze)

    p_val = sub.add_parser("validate", help="run the oracle/invariant suite")
    p_val.set_defaults(func=_cmd_validate)

    p_ver = sub.add_parser("verify-manifest", help="re-hash files in a manifest")
    p_ver.add_argument("manifest")
    p_ver.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
