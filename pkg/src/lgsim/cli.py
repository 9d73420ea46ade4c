"""Command-line entry point.

Subcommands map one-to-one onto run scenarios:

    lgsim budget --config cfg.json [--seed N] [--workers N] [--out DIR] [--format F]
    lgsim lg-run ...
    lgsim verify ...
    lgsim sweep ...

Exit codes: 0 success, 1 validation error, 2 verification failure,
3 I/O error. The LGSIM_OUT_DIR environment variable overrides the
default output directory (but not --out or the config's own setting).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import FORMATS, load_config
from .errors import ValidationError
from .harness import execute, resolve_out_dir, write_report
from .streams import check_seed

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2
EXIT_IO = 3

_SUBCOMMANDS = {
    "budget": "budget",
    "lg-run": "lg_run",
    "verify": "verify",
    "sweep": "sweep",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgsim",
        description="Strong-vs-weak measurement simulator and ensemble budgeter",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command in _SUBCOMMANDS:
        p = sub.add_parser(command, help=f"run the {command} scenario")
        p.add_argument("--config", required=True, help="path to a JSON run config")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--workers", type=int, default=None, help="override the worker count")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--format", default=None, choices=FORMATS, help="report format")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    scenario = _SUBCOMMANDS[args.command]

    try:
        cfg = load_config(args.config)
        if cfg.scenario != scenario:
            raise ValidationError(
                f"config.scenario: is '{cfg.scenario}' but the '{args.command}' "
                "subcommand was invoked"
            )
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.workers is not None:
            overrides["workers"] = args.workers
        if args.format is not None:
            overrides["output"] = dataclasses.replace(cfg.output, format=args.format)
        if overrides:
            cfg = dataclasses.replace(cfg, **overrides)
        check_seed(cfg.seed)
        if cfg.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {cfg.workers}")
        report = execute(cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        out_dir = resolve_out_dir(args.out, cfg)
        written = write_report(report, out_dir, cfg.output.format)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    for path in written:
        print(path)
    if scenario == "verify" and not report["payload"]["passed"]:
        failed = [c["name"] for c in report["payload"]["checks"] if c["status"] == "fail"]
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VERIFICATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
