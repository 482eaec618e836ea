"""Command-line entry point.

Subcommands mirror the experiment kinds:

    qstego rates    {cc-noiseless,cc-noisy,gaussian,product}    --config PATH
    qstego simulate {cc-noiseless,cc-noisy,cc-es,es-rs,qc-cc,resolvability}
    qstego verify   {gentle,pj-bound,sutherland,random-code}

Common flags: --config PATH (JSON), --seed N (overrides the config seed),
--out DIR (default "."), --csv / --json (default: write both).  Exit code 0
iff every pass/fail flag in the run is true; config errors exit 2 with a
line-anchored diagnostic.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import run_and_write

_GROUPS = {
    "rates": ["cc-noiseless", "cc-noisy", "gaussian", "product"],
    "simulate": ["cc-noiseless", "cc-noisy", "cc-es", "es-rs", "qc-cc", "resolvability"],
    "verify": ["gentle", "pj-bound", "sutherland", "random-code"],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qstego", description=__doc__)
    groups = parser.add_subparsers(dest="group", required=True)
    for group, kinds in _GROUPS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="kind", required=True)
        for kind in kinds:
            kp = sub.add_parser(kind)
            kp.add_argument("--config", required=True, help="JSON experiment config")
            kp.add_argument("--seed", type=int, default=None, help="override config seed")
            kp.add_argument("--out", default=".", help="output directory")
            kp.add_argument("--csv", action="store_true", help="write only the CSV table")
            kp.add_argument("--json", action="store_true", help="write only the JSON summary")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    path = Path(args.config)
    try:
        config = json.loads(path.read_text())
    except OSError as exc:
        print(f"{path}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}", file=sys.stderr)
        return 2
    kind = f"{args.group}/{args.kind}"
    declared = config.get("kind")
    if declared is not None and declared != kind:
        print(f"{path}:1:1: config kind {declared!r} does not match command {kind!r}", file=sys.stderr)
        return 2
    config = dict(config)
    config["kind"] = kind
    write_csv = args.csv or not args.json
    write_json = args.json or not args.csv
    try:
        result, paths = run_and_write(
            config,
            args.out,
            name=path.stem,
            seed=args.seed,
            csv=write_csv,
            summary_json=write_json,
        )
    except (ValueError, KeyError) as exc:
        print(f"{path}: invalid config: {exc}", file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    for flag, ok in result.flags.items():
        print(f"{flag}: {'pass' if ok else 'FAIL'}")
    return 0 if result.all_ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
