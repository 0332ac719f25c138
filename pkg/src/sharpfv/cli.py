"""Command line entry point: ``sharpfv <experiment> [--config FILE] [--out DIR] [--seed N]``.

Exit status is 0 on success, 1 when an asserted invariant fails and 2 for
configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError
from .harness import EXPERIMENTS, parse_config, run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharpfv", description="Run a transport experiment.")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", metavar="FILE", help="key = value configuration file")
        p.add_argument("--out", metavar="DIR", help="directory for report.txt and CSV output")
        p.add_argument("--seed", metavar="N", type=int, help="random seed")
        p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                       help="override one configuration key (repeatable)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        text = ""
        if args.config:
            try:
                text = Path(args.config).read_text()
            except OSError as e:
                raise ConfigError(f"cannot read {args.config}: {e.strerror}", key="config") from None
        # --set lines come last so they override the file
        text = "\n".join([text, *args.set])
        cfg = parse_config(text, args.experiment, out_dir=args.out, seed=args.seed)
        report = run_experiment(cfg)
    except ConfigError as e:
        print(f"configuration error [{e.key}]: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(report.summary())
    print(f"wall_clock = {report.wall_clock:.3f} s")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
