"""Command-line front end.

Subcommands:

    describe  dump the mutual-position matrix of one scene
    compare   similarity or symmetry measure of two scenes
    matrix    all-pairs measure table over many scene files
    validate  check a configuration for soundness
    gen       (hidden) emit a seeded random scene for fixtures

Exit codes: 0 ok, 2 parse/read errors, 3 insufficient object overlap,
4 validation failure.  FMP_CONFIG names a default config file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .comparison import CompareConfig, measure
from .config import ENV_CONFIG, FORMATS, resolve_run_config, validate_run_config
from .errors import (
    AmbiguousLabel,
    DegenerateBox,
    DegenerateReference,
    DuplicateId,
    FmpError,
    InsufficientOverlap,
    ParseError,
)
from .fmp import build_fmp
from .scene_io import parse_scene, save_scene
from .testkit import random_scene

_MODE_FLAGS = {"sim": "similarity", "symx": "sym_x", "symy": "sym_y",
               "symxy": "sym_xy"}

_PARSE_ERRORS = (ParseError, DegenerateBox, DegenerateReference,
                 DuplicateId, AmbiguousLabel)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fmpsim",
        description="Similarity and reflectional symmetry of bounding-box "
                    "scenes from annotation files.",
    )
    parser.add_argument("--config", metavar="PATH", default=None,
                        help=f"config file (default: ${ENV_CONFIG})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="dump one scene's relation matrix")
    p.add_argument("scene", help="annotation file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--top", type=int, default=3,
                   help="descriptors per cell in csv output")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("compare", help="measure two scenes")
    p.add_argument("scene_a")
    p.add_argument("scene_b")
    _compare_flags(p)
    p.add_argument("--format", choices=FORMATS, default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("matrix", help="all-pairs measure table")
    p.add_argument("paths", nargs="+",
                   help="scene files, or one directory of *.json files")
    _compare_flags(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("validate", help="check configuration soundness")
    p.add_argument("config_path", nargs="?", default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gen", help=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--canvas", default="0,0,100,100",
                   help="x0,y0,x1,y1")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    return parser


def _compare_flags(p):
    p.add_argument("--mode", choices=sorted(_MODE_FLAGS), default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--policy", choices=("as_printed", "symmetrized"),
                   default=None)


def _run_config(args):
    flags = {
        "mode": _MODE_FLAGS.get(getattr(args, "mode", None)),
        "threshold": getattr(args, "threshold", None),
        "mm_or_policy": getattr(args, "policy", None),
        "fmt": getattr(args, "format", None),
    }
    return resolve_run_config(config_path=args.config, **flags)


def cmd_describe(args) -> int:
    run = _run_config(args)
    scene = parse_scene(args.scene)
    fmp = build_fmp(scene, partition=run.partition)
    if args.format == "json":
        doc = {
            "ids": list(fmp.ids),
            "cells": [
                {"c": fmp.ids[c], "r": fmp.ids[r],
                 "descriptors": fmp.vector(c, r)}
                for c in range(fmp.n) for r in range(fmp.n)
            ],
        }
        print(json.dumps(doc, indent=2))
    else:
        sys.stdout.write(fmp.dump_csv(top_k=args.top))
    return 0


def _measure_with(run, scene_a, scene_b):
    cfg = CompareConfig(threshold=run.threshold, mode=run.mode,
                        mm_or_policy=run.mm_or_policy)
    return measure(scene_a, scene_b, cfg=cfg, partition=run.partition,
                   mm=run.mm)


def cmd_compare(args) -> int:
    run = _run_config(args)
    report = _measure_with(run, parse_scene(args.scene_a),
                           parse_scene(args.scene_b))
    if run.fmt == "json":
        print(json.dumps(report.to_json_dict(), indent=2))
    elif run.fmt == "csv":
        print("i,j,d,d_prime,s_loc,s_or,s")
        for p in report.pairs:
            print(f"{p.i},{p.j},{p.d or ''},{p.d_prime or ''},"
                  f"{p.s_loc},{p.s_or},{p.s}")
    else:
        print(f"{report.measure:.3f}")
    return 0


def cmd_matrix(args) -> int:
    run = _run_config(args)
    paths = list(args.paths)
    if len(paths) == 1 and Path(paths[0]).is_dir():
        paths = sorted(str(p) for p in Path(paths[0]).glob("*.json"))
    if len(paths) < 2:
        print("matrix needs at least two scene files", file=sys.stderr)
        return 2
    entries = sorted((Path(p).stem, p) for p in paths)

    scenes = {}
    for stem, path in entries:
        try:
            scenes[stem] = parse_scene(path)
        except _PARSE_ERRORS as exc:
            print(f"skipping {path}: {exc}", file=sys.stderr)
            scenes[stem] = None

    stems = [stem for stem, _ in entries]
    computed = 0
    lines = ["," + ",".join(stems)]
    for i, stem_a in enumerate(stems):
        row = [stem_a]
        for j, stem_b in enumerate(stems):
            if j < i:
                row.append("")
                continue
            a, b = scenes[stem_a], scenes[stem_b]
            if a is None or b is None:
                row.append("NA")
                continue
            try:
                report = _measure_with(run, a, b)
            except InsufficientOverlap:
                row.append("NA")
                continue
            row.append(f"{report.measure:.3f}")
            computed += 1
        lines.append(",".join(row))
    print("\n".join(lines))
    return 0 if computed > 0 else 2


def cmd_validate(args) -> int:
    path = args.config_path or args.config
    run = resolve_run_config(config_path=path)
    violations = validate_run_config(run)
    print(json.dumps({"ok": not violations, "violations": violations},
                     indent=2))
    return 4 if violations else 0


def cmd_gen(args) -> int:
    corners = [float(v) for v in args.canvas.split(",")]
    if len(corners) != 4:
        print("--canvas needs x0,y0,x1,y1", file=sys.stderr)
        return 2
    scene = random_scene(args.seed, args.count, canvas=tuple(corners))
    if args.out:
        save_scene(scene, args.out)
    else:
        from .scene_io import scene_to_dict

        print(json.dumps(scene_to_dict(scene), indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InsufficientOverlap as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FmpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
