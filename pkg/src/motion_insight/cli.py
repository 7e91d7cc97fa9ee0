"""Command-line entry points: validate, analyze, synth, serve.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O or
bind failure. All commands are deterministic for fixed inputs and flags
(serve excepted, being a long-running process).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analysis import DatasetAnalysis, build_report, write_variables_csv
from .config import DEFAULT_CONFIG, AnalysisConfig, load_config
from .errors import BindError, MotionInsightError, SpecError
from .model import load_dataset, parse_capture, parse_labels, parse_manifest
from .synthgen import SCENARIOS, ScenarioSpec, synthesize

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3

ENV_CONFIG = "MOTION_INSIGHT_CONFIG"


def _add_threshold_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("thresholds (override config file values)")
    group.add_argument("--delta-feet", type=float, dest="delta_feet_m",
                       help="sagittal foot threshold for freezes, meters")
    group.add_argument("--min-freeze", type=float, dest="min_freeze_s",
                       help="minimum freeze duration, seconds")
    group.add_argument("--min-duration", type=float, dest="min_duration_s",
                       help="default min_duration filter threshold, seconds")
    group.add_argument("--trunk-p95", type=float, dest="trunk_p95_deg",
                       help="high_trunk filter threshold, degrees")
    group.add_argument("--arm-ratio-threshold", type=float, dest="arm_ratio",
                       help="imbalanced_arm filter ratio")
    group.add_argument("--weight-dev", type=float, dest="weight_dev",
                       help="imbalanced_weight deviation threshold")
    group.add_argument("--max-points", type=int, dest="max_points",
                       help="display budget for series queries")
    group.add_argument("--scope", choices=("selection", "global"),
                       dest="simplify_scope", help="sigma scope for simplify")
    group.add_argument("--forward-flip", action="store_const", const=True,
                       dest="forward_flip", help="flip the forward axis")
    group.add_argument("--weight-literal", action="store_const", const=True,
                       dest="weight_literal",
                       help="same-side numerator in the weight ratio")


_THRESHOLD_FIELDS = (
    "delta_feet_m", "min_freeze_s", "min_duration_s", "trunk_p95_deg",
    "arm_ratio", "weight_dev", "max_points", "simplify_scope",
    "forward_flip", "weight_literal",
)


def _effective_config(args: argparse.Namespace) -> AnalysisConfig:
    """Precedence: flag > --config file > MOTION_INSIGHT_CONFIG > defaults."""
    config = DEFAULT_CONFIG
    env_path = os.environ.get(ENV_CONFIG)
    if env_path:
        config = load_config(env_path)
    if getattr(args, "config", None):
        config = load_config(args.config)
    overrides = {name: getattr(args, name, None) for name in _THRESHOLD_FIELDS}
    return config.replace(**overrides)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motion-insight",
        description="Analytics for long-horizon clinical motion capture",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="strict-parse capture/label files")
    p_validate.add_argument("--capture", help="capture JSON file")
    p_validate.add_argument("--labels", help="labels JSON file")
    p_validate.add_argument("--manifest", help="manifest JSON file")
    p_validate.add_argument("--lenient", action="store_true",
                            help="drop unknown actions instead of failing")

    p_analyze = sub.add_parser("analyze", help="write the analysis report")
    p_analyze.add_argument("--manifest", required=True)
    p_analyze.add_argument("--config", help="JSON threshold config file")
    p_analyze.add_argument("--out", help="report path (default: stdout)")
    p_analyze.add_argument("--csv", help="also write per-frame variables CSV here")
    _add_threshold_flags(p_analyze)

    p_synth = sub.add_parser("synth", help="generate synthetic datasets")
    p_synth.add_argument("scenario", choices=SCENARIOS)
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--duration", type=float, default=60.0,
                         help="seconds (single-segment scenarios)")
    p_synth.add_argument("--fps", type=float, default=30.0)
    p_synth.add_argument("--freeze-count", type=int, default=1)
    p_synth.add_argument("--freeze-duration", type=float, default=1.5)
    p_synth.add_argument("--arm-ratio", type=float, default=3.0)
    p_synth.add_argument("--weight-bias", type=float, default=0.06)
    p_synth.add_argument("--extra-joints", type=int, default=0)

    p_serve = sub.add_parser("serve", help="run the query API")
    p_serve.add_argument("--manifest", required=True)
    p_serve.add_argument("--config", help="JSON threshold config file")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui", help="directory with the built dashboard bundle")
    _add_threshold_flags(p_serve)

    return parser


def _cmd_validate(args) -> int:
    if not args.manifest and not args.capture:
        print("validate: provide --manifest or --capture [--labels]", file=sys.stderr)
        return EXIT_USAGE
    strict = not args.lenient
    problems = []
    if args.manifest:
        try:
            dataset = load_dataset(Path(args.manifest), strict=strict)
        except MotionInsightError as exc:
            problems.append(f"{type(exc).__name__}: {exc}")
        except OSError as exc:
            print(f"IOError: {exc}", file=sys.stderr)
            return EXIT_IO
        else:
            print(f"ok: dataset {dataset.dataset_id!r}, "
                  f"{len(dataset.segments)} segment(s), {dataset.total_frames} frames")
    else:
        capture = None
        try:
            capture = parse_capture(Path(args.capture).read_bytes())
            print(f"ok: capture with {capture.n_frames} frames, "
                  f"{len(capture.joints)} joints at {capture.fps} fps")
        except MotionInsightError as exc:
            problems.append(f"{type(exc).__name__}: {exc}")
        except OSError as exc:
            print(f"IOError: {exc}", file=sys.stderr)
            return EXIT_IO
        if args.labels:
            if capture is None:
                problems.append("SchemaError: labels not checked, capture failed to parse")
            else:
                try:
                    labels = parse_labels(Path(args.labels).read_bytes(), capture,
                                          strict=strict)
                    print(f"ok: {len(labels)} merged label(s)")
                except MotionInsightError as exc:
                    problems.append(f"{type(exc).__name__}: {exc}")
                except OSError as exc:
                    print(f"IOError: {exc}", file=sys.stderr)
                    return EXIT_IO
    for line in problems:
        print(line, file=sys.stderr)
    return EXIT_VALIDATION if problems else EXIT_OK


def _cmd_analyze(args) -> int:
    config = _effective_config(args)
    dataset = load_dataset(Path(args.manifest), strict=True)
    analysis = DatasetAnalysis(dataset, config)
    report = build_report(analysis)
    text = json.dumps(report, indent=2, allow_nan=False) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            write_variables_csv(analysis, fh)
    return EXIT_OK


def _cmd_synth(args) -> int:
    spec = ScenarioSpec(
        scenario=args.scenario,
        duration_s=args.duration,
        fps=args.fps,
        seed=args.seed,
        freeze_count=args.freeze_count,
        freeze_duration_s=args.freeze_duration,
        arm_ratio=args.arm_ratio,
        weight_bias=args.weight_bias,
        extra_joints=args.extra_joints,
    )
    synthesize(spec, out_dir=args.out)
    out = Path(args.out)
    for name in sorted(p.name for p in out.iterdir()):
        print(out / name)
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .service import serve

    config = _effective_config(args)
    dataset = load_dataset(Path(args.manifest), strict=False)
    analysis = DatasetAnalysis(dataset, config)
    serve(analysis, host=args.host, port=args.port, ui_dir=args.ui)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "serve":
            return _cmd_serve(args)
        parser.error(f"unknown command {args.command!r}")
    except BindError as exc:
        print(f"BindError: {exc}", file=sys.stderr)
        return EXIT_IO
    except SpecError as exc:
        print(f"SpecError: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MotionInsightError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"IOError: {exc}", file=sys.stderr)
        return EXIT_IO
    except KeyboardInterrupt:
        return EXIT_OK
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
