"""Command-line front end.

Subcommands: extract (feature dump), identify (assign identities),
evaluate (score against ground truth), synth (generate a synthetic
scenario). Exit codes: 0 success, 1 usage or configuration error, 2 data
or schema error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import config as config_mod
from .errors import (
    BoxOutOfBounds,
    ContractViolation,
    DiverIdError,
    EmptySession,
    FrameMismatch,
    SchemaError,
)
from .pipeline import (
    doc_to_obj,
    evaluate,
    format_report_table,
    load_detections,
    open_frames,
    render_overlay,
    run_session,
    save_frame,
    scenario_spec,
    synth_scenario,
    write_detections,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _add_config_flags(parser):
    parser.add_argument("--config", metavar="FILE", help="flat key = value configuration file")
    for key, (_, _, default, help_text) in config_mod.SCHEMA.items():
        parser.add_argument(
            f"--{key}",
            dest=key.replace(".", "__"),
            metavar="VALUE",
            default=None,
            help=f"{help_text} (default {default})",
        )


def _build_config(args):
    overrides = {}
    for key in config_mod.SCHEMA:
        value = getattr(args, key.replace(".", "__"), None)
        if value is not None:
            overrides[key] = value
    return config_mod.build_config(args.config, overrides)


def _log_events(events):
    for event in events:
        where = "" if event.frame_index is None else f" [frame {event.frame_index}]"
        print(f"{event.level}{where}: {event.message}", file=sys.stderr)


def _feature_record(vector):
    return {
        "frame_index": vector.frame_index,
        "detection_index": vector.detection_index,
        "features": [float(x) for x in vector.dims],
    }


def cmd_extract(args) -> int:
    cfg = _build_config(args)
    frames = open_frames(args.frames)
    doc, warnings = load_detections(args.detections, strict=not args.lenient)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    result = run_session(frames, doc, cfg, threads=args.threads)
    _log_events(result.log)
    with open(args.out, "w", encoding="utf-8") as fh:
        for vector in result.vectors:
            fh.write(json.dumps(_feature_record(vector)) + "\n")
    print(f"wrote {len(result.vectors)} feature records to {args.out}")
    return EXIT_OK


def cmd_identify(args) -> int:
    cfg = _build_config(args)
    frames = open_frames(args.frames)
    doc, warnings = load_detections(args.detections, strict=not args.lenient)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    names = args.names.split(",") if args.names else None
    result = run_session(frames, doc, cfg, names=names, threads=args.threads)
    _log_events(result.log)
    write_detections(result.assignments, args.out)
    print(f"wrote assignments for {len(result.assignments.frames)} frames to {args.out}")
    if args.overlay:
        overlay_dir = Path(args.overlay)
        overlay_dir.mkdir(parents=True, exist_ok=True)
        for index in sorted(result.assignments.frames):
            frame = frames.load(index)
            save_frame(
                render_overlay(frame, result.assignments, index),
                overlay_dir / f"overlay_{index:06d}.png",
            )
        print(f"wrote overlays to {overlay_dir}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    predicted, _ = load_detections(args.assignments, strict=not args.lenient)
    truth, _ = load_detections(args.truth, strict=not args.lenient)
    report = evaluate(predicted, truth)
    print(format_report_table([report]))
    with open(args.json_out, "w", encoding="utf-8") as fh:
        json.dump(report.as_dict(), fh, indent=2)
        fh.write("\n")
    print(f"wrote report to {args.json_out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = scenario_spec(args.scenario, n_frames=args.frames_count)
    frames, truth = synth_scenario(spec, seed=args.seed)
    out = Path(args.out)
    frames_dir = out / "frames"
    frames_dir.mkdir(parents=True, exist_ok=True)
    for index in frames.indices():
        save_frame(frames.load(index), frames_dir / f"frame_{index:06d}.png")
    write_detections(truth, out / "truth.json")
    print(f"wrote {len(frames.indices())} frames and truth.json to {out}")
    return EXIT_OK


def make_parser() -> _Parser:
    parser = _Parser(prog="diverid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="write the per-detection feature dump (JSON lines)")
    p.add_argument("frames", help="frames directory or manifest file")
    p.add_argument("detections", help="detections JSON file")
    p.add_argument("out", help="output features file (.jsonl)")
    p.add_argument("--lenient", action="store_true", help="warn instead of failing on schema oddities")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_config_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("identify", help="assign identities; write the assignments JSON")
    p.add_argument("frames", help="frames directory or manifest file")
    p.add_argument("detections", help="detections JSON file")
    p.add_argument("out", help="output assignments file")
    p.add_argument("--overlay", metavar="DIR", help="also render overlay frames into DIR")
    p.add_argument("--names", help="comma-separated identity names (default diver-0, ...)")
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_config_flags(p)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("evaluate", help="score assignments against ground truth")
    p.add_argument("assignments", help="assignments JSON file")
    p.add_argument("truth", help="ground-truth JSON file")
    p.add_argument("--json-out", default="report.json", help="report JSON path")
    p.add_argument("--lenient", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic scenario (frames + truth.json)")
    p.add_argument("scenario", type=int, help="scenario id, 1..7")
    p.add_argument("out", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frames-count", type=int, default=300, help="number of frames")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContractViolation as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SchemaError, BoxOutOfBounds, FrameMismatch, EmptySession, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DiverIdError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
