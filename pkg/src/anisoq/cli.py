"""Command-line front end: analyze, score, rank, degrade, denoise, psnr.

Outputs CSV (default) or JSON built fully in memory before emission, so a
failing command never leaves partial output. Exit codes: 0 success, 1 usage,
2 I/O, 3 analysis/calibration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from .denoise import DenoiseSpec, denoise
from .entropy import AnalysisConfig, AnisotropyProfile, analyze
from .image import GrayImage, PgmError, load_pgm, psnr, save_pgm
from .kernels import OrientationSet
from .noise import CalibrationError, NoiseSpec, calibrate, degrade

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_ANALYSIS = 3

THREADS_ENV = "ANISOQ_THREADS"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract reserves 2 for I/O.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{value:.10g}"


def _json_value(value: float):
    return "inf" if math.isinf(value) else value


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int, default=9, help="odd analysis window size (default 9)")
    p.add_argument("--alpha", type=float, default=3.0, help="entropy order (default 3)")
    p.add_argument(
        "--orientations",
        default="0,30,60,90,120,150",
        help="comma-separated orientation angles in degrees",
    )
    p.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"parallel width; never changes output bytes (default ${THREADS_ENV} or 1)",
    )
    p.add_argument(
        "--normalize",
        choices=["levels"],
        default=None,
        help="report the global score divided by the 255 levels",
    )


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["csv", "json"], default="csv", dest="fmt")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> _Parser:
    parser = _Parser(prog="anisoq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="per-level anisotropy profile of one image")
    p.add_argument("input")
    p.add_argument(
        "--per-orientation",
        action="store_true",
        help="also emit per-level mean entropy for every orientation",
    )
    _add_analysis_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("score", help="global anisotropy quality index of one image")
    p.add_argument("input")
    _add_analysis_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("rank", help="order registered images of a scene, best first")
    p.add_argument("inputs", nargs="+")
    _add_analysis_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("degrade", help="add seeded noise, optionally hitting a target PSNR")
    p.add_argument("input")
    p.add_argument("--noise", required=True, choices=["gaussian", "speckle", "impulsive"])
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--param", type=float, help="noise strength parameter")
    group.add_argument("--target-psnr", type=float, help="calibrate strength to this PSNR (dB)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="destination PGM")
    p.add_argument("--format", choices=["csv", "json"], default="csv", dest="fmt")

    p = sub.add_parser("denoise", help="filter an image with a window denoiser")
    p.add_argument("input")
    p.add_argument("--method", required=True, choices=["median", "relaxed-median", "mean"])
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--relax-rank", type=int, default=1)
    p.add_argument("--out", required=True, help="destination PGM")
    p.add_argument("--format", choices=["csv", "json"], default="csv", dest="fmt")

    p = sub.add_parser("psnr", help="full-reference MSE and PSNR of two images")
    p.add_argument("reference")
    p.add_argument("test")
    p.add_argument("--format", choices=["csv", "json"], default="csv", dest="fmt")
    p.add_argument("--out", default=None)

    return parser


def _resolve_threads(parser: _Parser, args) -> int:
    threads = getattr(args, "threads", None)
    if threads is None:
        raw = os.environ.get(THREADS_ENV)
        if raw is None:
            return 1
        try:
            threads = int(raw)
        except ValueError:
            parser.error(f"invalid {THREADS_ENV} value {raw!r}")
    if threads < 1:
        parser.error(f"--threads must be >= 1, got {threads}")
    return threads


def _build_config(parser: _Parser, args) -> AnalysisConfig:
    try:
        angles = tuple(float(tok) for tok in args.orientations.split(","))
        return AnalysisConfig(
            kernel_size=args.d, alpha=args.alpha, orientations=OrientationSet(angles)
        )
    except ValueError as exc:
        parser.error(str(exc))


def _config_echo(config: AnalysisConfig, threads: int, normalize) -> dict:
    return {
        "kernel_size": config.kernel_size,
        "alpha": config.alpha,
        "orientations": list(config.orientations.angles),
        "border_policy": config.border_policy,
        "threads": threads,
        "normalize": normalize,
    }


def _report_json(command: str, config: dict, results: dict) -> str:
    report = {
        "command": command,
        "tool_version": __version__,
        "config": config,
        "results": results,
    }
    return json.dumps(report, indent=2) + "\n"


def _profile_csv(profile: AnisotropyProfile, per_orientation: bool, normalize) -> str:
    lines = ["level,anisotropy"]
    for rec in profile.per_level:
        lines.append(f"{rec.level},{_fmt(rec.anisotropy)}")
    total = profile.global_anisotropy
    if normalize == "levels":
        total = total / 255.0
    lines.append(f"global,{_fmt(total)}")
    if per_orientation:
        lines.append("level,theta_deg,mean_entropy")
        for rec in profile.per_level:
            for theta, mean in rec.directional_means.items():
                lines.append(f"{rec.level},{_fmt(theta)},{_fmt(mean)}")
    return "\n".join(lines) + "\n"


def _profile_results(profile: AnisotropyProfile, per_orientation: bool, normalize) -> dict:
    levels = []
    for rec in profile.per_level:
        row = {"level": rec.level, "anisotropy": rec.anisotropy}
        if per_orientation:
            row["directional_means"] = {
                _fmt(theta): mean for theta, mean in rec.directional_means.items()
            }
        levels.append(row)
    total = profile.global_anisotropy
    if normalize == "levels":
        total = total / 255.0
    return {"levels": levels, "global_anisotropy": total}


def _cmd_analyze(parser, args) -> str:
    config = _build_config(parser, args)
    threads = _resolve_threads(parser, args)
    image = load_pgm(args.input)
    profile = analyze(image, config, threads=threads)
    if args.fmt == "json":
        return _report_json(
            "analyze",
            _config_echo(config, threads, args.normalize),
            _profile_results(profile, args.per_orientation, args.normalize),
        )
    return _profile_csv(profile, args.per_orientation, args.normalize)


def _cmd_score(parser, args) -> str:
    config = _build_config(parser, args)
    threads = _resolve_threads(parser, args)
    image = load_pgm(args.input)
    profile = analyze(image, config, threads=threads)
    total = profile.global_anisotropy
    if args.normalize == "levels":
        total = total / 255.0
    if args.fmt == "json":
        return _report_json(
            "score",
            _config_echo(config, threads, args.normalize),
            {"global_anisotropy": total},
        )
    return f"global,{_fmt(total)}\n"


def _cmd_rank(parser, args) -> str:
    if len(args.inputs) < 2:
        parser.error("rank needs at least two images")
    config = _build_config(parser, args)
    threads = _resolve_threads(parser, args)
    images = [load_pgm(path) for path in args.inputs]
    dims = {(img.width, img.height) for img in images}
    if len(dims) > 1:
        print(
            "warning: images differ in size; ranking assumes registered views "
            "of one scene",
            file=sys.stderr,
        )
    profiles = [analyze(img, config, threads=threads) for img in images]
    order = sorted(range(len(images)), key=lambda i: -profiles[i].global_anisotropy)
    if args.fmt == "json":
        results = {
            "ranking": [
                {
                    "rank": pos + 1,
                    "path": args.inputs[i],
                    "global_anisotropy": profiles[i].global_anisotropy,
                }
                for pos, i in enumerate(order)
            ]
        }
        return _report_json("rank", _config_echo(config, threads, args.normalize), results)
    lines = ["rank,path,global_anisotropy"]
    for pos, i in enumerate(order):
        lines.append(f"{pos + 1},{args.inputs[i]},{_fmt(profiles[i].global_anisotropy)}")
    return "\n".join(lines) + "\n"


def _cmd_degrade(parser, args) -> str:
    if args.seed < 0 or args.seed >= 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    image = load_pgm(args.input)
    if args.target_psnr is not None:
        spec = calibrate(image, args.noise, args.target_psnr, seed=args.seed)
    else:
        spec = NoiseSpec(args.noise, args.param, args.seed)
    degraded = degrade(image, spec)
    save_pgm(degraded, args.out)
    realized = psnr(image, degraded).psnr_db
    if args.fmt == "json":
        results = {
            "kind": spec.kind,
            "param": spec.param,
            "seed": spec.seed,
            "realized_psnr_db": _json_value(realized),
            "out": args.out,
        }
        return _report_json("degrade", {}, results)
    return (
        "kind,param,seed,realized_psnr_db\n"
        f"{spec.kind},{_fmt(spec.param)},{spec.seed},{_fmt(realized)}\n"
    )


def _cmd_denoise(parser, args) -> str:
    image = load_pgm(args.input)
    spec = DenoiseSpec(method=args.method, window=args.window, relax_rank=args.relax_rank)
    save_pgm(denoise(image, spec), args.out)
    if args.fmt == "json":
        results = {
            "method": spec.method,
            "window": spec.window,
            "relax_rank": spec.relax_rank,
            "out": args.out,
        }
        return _report_json("denoise", {}, results)
    return (
        "method,window,relax_rank,out\n"
        f"{spec.method},{spec.window},{spec.relax_rank},{args.out}\n"
    )


def _cmd_psnr(parser, args) -> str:
    reference = load_pgm(args.reference)
    test = load_pgm(args.test)
    score = psnr(reference, test)
    if args.fmt == "json":
        results = {"mse": score.mse, "psnr_db": _json_value(score.psnr_db)}
        return _report_json("psnr", {}, results)
    return f"mse,psnr_db\n{_fmt(score.mse)},{_fmt(score.psnr_db)}\n"


_HANDLERS = {
    "analyze": _cmd_analyze,
    "score": _cmd_score,
    "rank": _cmd_rank,
    "degrade": _cmd_degrade,
    "denoise": _cmd_denoise,
    "psnr": _cmd_psnr,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _HANDLERS[args.command](parser, args)
    except PgmError as exc:
        print(f"anisoq: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"anisoq: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, CalibrationError) as exc:
        print(f"anisoq: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    if args.out is not None and args.command not in ("degrade", "denoise"):
        try:
            with open(args.out, "w", encoding="ascii") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"anisoq: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
