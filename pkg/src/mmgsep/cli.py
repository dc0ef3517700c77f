"""Command-line surface: synth, decompose, filter, metrics, bench, segment.

File conventions: signals are CSV with header ``time_s,value`` (LF endings,
round-trippable decimal floats, fs inferred from the time column);
manifests, recipes, scores and reports are JSON. Exit codes: 0 success,
2 input/validation error, 3 numerical-invariant breach.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bandpass import separate_bandpass
from .ceemdan import PRNG_NAME, DecompParams, decompose_iceemdan
from .core import CANONICAL_BANDS, SizingError, TimeSeries
from .emd import Decomposition, SiftConfig, extract_imfs
from .gait import inclination_angle, walking_windows
from .metrics import _report
from .selection import FuzzEnParams, MmgSeparation, separate_ceemdan
from .synth import STANDARD_RECIPE, make_trial

RECON_TOL = 1e-8  # relative to max |input|


class InvariantBreach(RuntimeError):
    """A numerical invariant failed on real outputs (exit code 3)."""


# ---------------------------------------------------------------------------
# file formats


def write_signal_csv(path: Path, ts: TimeSeries) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("time_s,value\n")
        fs = ts.fs
        for i, v in enumerate(ts.samples):
            fh.write(f"{i / fs!r},{float(v)!r}\n")


def read_signal_csv(path: Path) -> TimeSeries:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 2 or data.shape[0] < 2:
        raise ValueError(f"{path}: expected two columns time_s,value with >= 2 rows")
    t, v = data[:, 0], data[:, 1]
    dt = np.diff(t)
    if np.any(np.abs(dt - dt.mean()) > 1e-6):
        raise ValueError(f"{path}: time column not uniformly sampled (>1e-6 s jitter)")
    fs = (len(t) - 1) / (t[-1] - t[0])
    return TimeSeries(v, float(np.round(fs, 6)))


def _sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_json(path: Path, obj) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest(
    out_dir: Path, command: str, params: dict, inputs: dict, timing: dict, extra: dict | None = None
) -> None:
    manifest = {
        "command": command,
        "params": params,
        "inputs": {name: _sha256(p) for name, p in inputs.items()},
        "version": __version__,
        "prng": PRNG_NAME,
        "timing_s": timing,
        **(extra or {}),
    }
    write_json(out_dir / "manifest.json", manifest)


# ---------------------------------------------------------------------------
# parameter resolution: CLI flag > config file > built-in default


def _resolve(args: argparse.Namespace, config: dict, name: str, default):
    cli_val = getattr(args, name, None)
    if cli_val is not None:
        return cli_val
    if name in config:
        return config[name]
    return default


def _load_config(args: argparse.Namespace) -> dict:
    if getattr(args, "config", None):
        with open(args.config) as fh:
            return json.load(fh)
    return {}


# ---------------------------------------------------------------------------
# commands


def cmd_synth(args) -> int:
    config = _load_config(args)
    recipe = dict(STANDARD_RECIPE)
    if getattr(args, "recipe", None):
        with open(args.recipe) as fh:
            recipe.update(json.load(fh))
    recipe.update({k: v for k, v in config.items() if k in recipe})
    for key in recipe:
        val = getattr(args, key, None)
        if val is not None:
            recipe[key] = val
    t0 = time.perf_counter()
    trial = make_trial(recipe)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_signal_csv(out / "raw.csv", trial.raw)
    write_signal_csv(out / "truth_motion.csv", trial.truth_motion)
    write_signal_csv(out / "truth_mmg.csv", trial.truth_mmg)
    write_signal_csv(out / "truth_impacts.csv", trial.truth_impacts)
    write_json(out / "recipe.json", trial.recipe)
    write_manifest(
        out, "synth", trial.recipe, {}, {"generate": time.perf_counter() - t0}
    )
    print(f"ok synth out={out} samples={len(trial.raw)} fs={trial.raw.fs:g}")
    return 0


def _decomp_params(args, config) -> tuple[DecompParams, int]:
    sift = SiftConfig(
        sd_threshold=_resolve(args, config, "sd_threshold", 0.2),
        max_sifts=_resolve(args, config, "max_sifts", 100),
        max_imfs=_resolve(args, config, "max_imfs", 12),
    )
    params = DecompParams(
        ensemble_size=_resolve(args, config, "ensemble_size", 100),
        noise_amplitude=_resolve(args, config, "noise_amplitude", 0.2),
        seed=_resolve(args, config, "seed", 0),
        sift=sift,
    )
    return params, _resolve(args, config, "threads", 1)


def _params_dict(params: DecompParams, threads: int, method: str) -> dict:
    return {
        "method": method,
        "ensemble_size": params.ensemble_size,
        "noise_amplitude": params.noise_amplitude,
        "seed": params.seed,
        "sd_threshold": params.sift.sd_threshold,
        "max_sifts": params.sift.max_sifts,
        "max_imfs": params.sift.max_imfs,
        "threads": threads,
    }


def _check_reconstruction(x: TimeSeries, d: Decomposition) -> float:
    err = float(np.max(np.abs(x.samples - d.reconstruct())))
    scale = float(np.max(np.abs(x.samples)))
    if scale > 0 and err > RECON_TOL * scale:
        raise InvariantBreach(
            f"reconstruction error {err:g} exceeds {RECON_TOL:g} * max|x| = {RECON_TOL * scale:g}"
        )
    return err


def cmd_decompose(args) -> int:
    config = _load_config(args)
    x = read_signal_csv(Path(args.input))
    params, threads = _decomp_params(args, config)
    t0 = time.perf_counter()
    if args.method == "emd":
        d = extract_imfs(x, params.sift)
    else:
        d = decompose_iceemdan(x, params, workers=threads)
    elapsed = time.perf_counter() - t0
    err = _check_reconstruction(x, d)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for imf in d.imfs:
        write_signal_csv(out / f"imf_{imf.index:02d}.csv", TimeSeries(imf.samples, x.fs))
    write_signal_csv(out / "residual.csv", TimeSeries(d.residual, x.fs))
    write_manifest(
        out,
        "decompose",
        _params_dict(params, threads, args.method),
        {"input": Path(args.input)},
        {"decompose": elapsed},
        {"reconstruction_error": err, "n_imfs": len(d.imfs)},
    )
    print(f"ok decompose out={out} imfs={len(d.imfs)} recon_err={err:.3g}")
    return 0


def cmd_filter(args) -> int:
    config = _load_config(args)
    raw = read_signal_csv(Path(args.input))
    out = Path(args.out)
    t0 = time.perf_counter()
    if args.method == "band":
        sep = separate_bandpass(raw)
        params_out: dict = {"method": "band", "lo_hz": 5.0, "hi_hz": 100.0, "order": 4}
    else:
        params, threads = _decomp_params(args, config)
        fuzz = FuzzEnParams(
            m=_resolve(args, config, "fuzzen_m", 2),
            r=_resolve(args, config, "fuzzen_r", 0.2),
            n=_resolve(args, config, "fuzzen_n", 2.0),
        )
        theta = _resolve(args, config, "theta", 0.5)
        d = decompose_iceemdan(raw, params, workers=threads)
        _check_reconstruction(raw, d)
        sep = separate_ceemdan(raw, d, fuzz, theta=theta)
        params_out = _params_dict(params, threads, "ceemdan")
        params_out.update(
            {"fuzzen_m": fuzz.m, "fuzzen_r": fuzz.r, "fuzzen_n": fuzz.n, "theta": theta}
        )
    elapsed = time.perf_counter() - t0
    split_err = float(
        np.max(np.abs(raw.samples - (sep.mmg.samples + sep.motion.samples)))
    )
    scale = float(np.max(np.abs(raw.samples)))
    if scale > 0 and split_err > RECON_TOL * scale:
        raise InvariantBreach(f"mmg+motion split error {split_err:g} too large")
    out.mkdir(parents=True, exist_ok=True)
    write_signal_csv(out / "mmg.csv", sep.mmg)
    write_signal_csv(out / "motion.csv", sep.motion)
    if sep.method == "CEEMDAN_FUZZEN":
        write_json(
            out / "scores.json",
            {
                "fuzzen_per_imf": list(sep.scores),
                "selected_range": list(sep.selected),
                "argmax_imf": int(np.argmax(sep.scores)) + 1,
            },
        )
    write_manifest(
        out,
        "filter",
        params_out,
        {"input": Path(args.input)},
        {"filter": elapsed},
        {"split_error": split_err, "separation_method": sep.method},
    )
    print(f"ok filter out={out} method={sep.method} split_err={split_err:.3g}")
    return 0


def cmd_metrics(args) -> int:
    raw = read_signal_csv(Path(args.raw))
    reference = read_signal_csv(Path(args.reference))
    reports = []
    for sep_dir in args.separations:
        sep_dir = Path(sep_dir)
        mmg = read_signal_csv(sep_dir / "mmg.csv")
        motion = read_signal_csv(sep_dir / "motion.csv")
        manifest = json.loads((sep_dir / "manifest.json").read_text())
        sep = MmgSeparation(
            mmg=mmg,
            motion=motion,
            scores=(),
            selected=None,
            method=manifest.get("separation_method", sep_dir.name),
        )
        reports.append((str(sep_dir), sep))
    if len(reports) < 1:
        raise ValueError("need at least one separation directory")
    t0 = time.perf_counter()
    built = [
        _report(raw, reference, sep, {"separation_dir": name}).to_dict()
        for name, sep in reports
    ]
    summary: dict = {}
    if len(built) >= 2:
        by_r2 = sorted(built, key=lambda r: -r["r_squared"])
        a, b = built[0], built[1]
        summary = {
            "r_squared_ranking": [r["method"] for r in by_r2],
            "delta_psd_difference": {
                band: a["delta_psd"][band] - b["delta_psd"][band]
                for band in a["delta_psd"]
            },
            "rms_ratio": a["rms_filtered"] / b["rms_filtered"]
            if b["rms_filtered"]
            else None,
        }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_json(
        out,
        {
            "reports": built,
            "summary": summary,
            "version": __version__,
            "bands": [str(b) for b in CANONICAL_BANDS],
            "timing_s": {"metrics": time.perf_counter() - t0},
        },
    )
    print(f"ok metrics out={out} reports={len(built)}")
    return 0


def cmd_bench(args) -> int:
    if args.samples < 256:
        raise ValueError("--samples must be >= 256")
    thread_counts = [int(t) for t in args.threads.split(",")]
    rng = np.random.Generator(np.random.PCG64(args.seed))
    t = np.arange(args.samples) / 1000.0
    x = TimeSeries(
        np.sin(2 * np.pi * 2 * t) + 0.5 * np.sin(2 * np.pi * 40 * t) + 0.1 * rng.standard_normal(args.samples),
        1000.0,
    )
    params = DecompParams(ensemble_size=args.ensemble, seed=args.seed)
    runs = []
    baseline = None
    reference = None
    for workers in thread_counts:
        t0 = time.perf_counter()
        d = decompose_iceemdan(x, params, workers=workers)
        wall = time.perf_counter() - t0
        err = float(np.max(np.abs(x.samples - d.reconstruct()))) / float(
            np.max(np.abs(x.samples))
        )
        if err > RECON_TOL:
            raise InvariantBreach(f"bench run reconstruction error {err:g}")
        if reference is None:
            reference = d
            identical = True
        else:
            identical = len(d.imfs) == len(reference.imfs) and all(
                np.array_equal(a.samples, b.samples)
                for a, b in zip(d.imfs, reference.imfs)
            ) and np.array_equal(d.residual, reference.residual)
        if baseline is None:
            baseline = wall
        runs.append(
            {
                "threads": workers,
                "wall_s": wall,
                "speedup_vs_first": baseline / wall,
                "reconstruction_error_rel": err,
                "bit_identical_to_first": identical,
            }
        )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_json(
        out,
        {
            "samples": args.samples,
            "ensemble_size": args.ensemble,
            "seed": args.seed,
            "prng": PRNG_NAME,
            "version": __version__,
            "runs": runs,
        },
    )
    print(
        "ok bench out={} runs={} first_wall_s={:.2f}".format(out, len(runs), runs[0]["wall_s"])
    )
    return 0


def cmd_segment(args) -> int:
    acc = read_signal_csv(Path(args.input))
    t0 = time.perf_counter()
    angle = inclination_angle(acc, gravity_cutoff=args.gravity_cutoff)
    windows = walking_windows(angle, args.lo, args.hi, args.min_duration)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_signal_csv(out / "angle_deg.csv", angle)
    write_json(
        out / "windows.json",
        {
            "windows": [
                {
                    "start_sample": w.start,
                    "end_sample": w.end,
                    "start_s": w.start / acc.fs,
                    "end_s": w.end / acc.fs,
                }
                for w in windows
            ],
            "thresholds_deg": [args.lo, args.hi],
            "min_duration_s": args.min_duration,
        },
    )
    write_manifest(
        out,
        "segment",
        {
            "lo": args.lo,
            "hi": args.hi,
            "min_duration": args.min_duration,
            "gravity_cutoff": args.gravity_cutoff,
        },
        {"input": Path(args.input)},
        {"segment": time.perf_counter() - t0},
    )
    print(f"ok segment out={out} windows={len(windows)}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_decomp_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ensemble-size", dest="ensemble_size", type=int)
    p.add_argument("--noise-amplitude", dest="noise_amplitude", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--sd-threshold", dest="sd_threshold", type=float)
    p.add_argument("--max-sifts", dest="max_sifts", type=int)
    p.add_argument("--max-imfs", dest="max_imfs", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--config", help="JSON config file (CLI flags take precedence)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmgsep",
        description="MMG motion-artifact separation toolkit",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("synth", help="generate a labeled synthetic trial")
    p.add_argument("--out", required=True)
    p.add_argument("--recipe", help="JSON recipe file")
    p.add_argument("--config")
    p.add_argument("--fs", type=float)
    p.add_argument("--duration", type=float)
    p.add_argument("--motion-f-lo", dest="motion_f_lo", type=float)
    p.add_argument("--motion-f-hi", dest="motion_f_hi", type=float)
    p.add_argument("--motion-rms", dest="motion_rms", type=float)
    p.add_argument("--mmg-target-mpf", dest="mmg_target_mpf", type=float)
    p.add_argument("--mmg-rms", dest="mmg_rms", type=float)
    p.add_argument("--impact-rate", dest="impact_rate", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("decompose", help="EMD or CEEMDAN decomposition to IMF files")
    p.add_argument("input")
    p.add_argument("--method", choices=["emd", "ceemdan"], default="ceemdan")
    p.add_argument("--out", required=True)
    _add_decomp_args(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("filter", help="separate MMG and motion signals")
    p.add_argument("input")
    p.add_argument("--method", choices=["ceemdan", "band"], default="ceemdan")
    p.add_argument("--out", required=True)
    p.add_argument("--theta", type=float)
    p.add_argument("--fuzzen-m", dest="fuzzen_m", type=int)
    p.add_argument("--fuzzen-r", dest="fuzzen_r", type=float)
    p.add_argument("--fuzzen-n", dest="fuzzen_n", type=float)
    _add_decomp_args(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("metrics", help="compare separations against a reference motion")
    p.add_argument("raw")
    p.add_argument("reference")
    p.add_argument("separations", nargs="+", help="separation output directories")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bench", help="time CEEMDAN across thread counts")
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--ensemble", type=int, default=500)
    p.add_argument("--threads", default="1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("segment", help="walking-window selection from inclination angle")
    p.add_argument("input")
    p.add_argument("--lo", type=float, default=-10.0)
    p.add_argument("--hi", type=float, default=10.0)
    p.add_argument("--min-duration", dest="min_duration", type=float, default=0.5)
    p.add_argument("--gravity-cutoff", dest="gravity_cutoff", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_segment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantBreach as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
