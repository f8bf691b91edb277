"""Command-line front end.

    szego run --config FILE [--out DIR] [--verbose]
    szego list-experiments
    szego verify [--out DIR]

``run`` accepts either a path or the name of a shipped config;
``verify`` executes the full acceptance suite and exits nonzero if
any criterion fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from szego import config as cfgmod
from szego import experiments


def _resolve_config(name: str) -> Path:
    path = Path(name)
    if path.exists():
        return path
    candidate = experiments.config_dir() / name
    if candidate.exists():
        return candidate
    candidate = experiments.config_dir() / f"{name}.cfg"
    if candidate.exists():
        return candidate
    raise FileNotFoundError(f"no config file or shipped experiment named {name!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="szego",
        description="Spectral experiments for the cubic Szego equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one configured experiment")
    run_p.add_argument("--config", required=True,
                       help="config file path or shipped config name")
    run_p.add_argument("--out", default=None, help="output directory")
    run_p.add_argument("--verbose", action="store_true")

    sub.add_parser("list-experiments", help="list shipped experiment configs")

    verify_p = sub.add_parser("verify", help="run the full acceptance suite")
    verify_p.add_argument("--out", default="szego-verify",
                          help="output directory (default: szego-verify)")

    args = parser.parse_args(argv)

    if args.command == "list-experiments":
        for path in experiments.shipped_configs():
            params = cfgmod.parse_config(path)
            kind = params.get("kind", "?")
            title = params.get("title", "")
            print(f"{path.stem:<36} kind={kind:<16} {title}")
        return 0

    if args.command == "run":
        try:
            path = _resolve_config(args.config)
        except FileNotFoundError as exc:
            print(exc, file=sys.stderr)
            return 2
        out = Path(args.out) if args.out else Path("runs") / path.stem
        try:
            summary = experiments.run_config(path, out, verbose=args.verbose)
        except cfgmod.ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        state = "PASS" if summary["pass"] else "FAIL"
        print(f"{summary['name']}: {state} (artifacts in {out})")
        return 0 if summary["pass"] else 1

    if args.command == "verify":
        result = experiments.verify(Path(args.out))
        return 0 if result["all_pass"] else 1

    return 2


if __name__ == "__main__":
    sys.exit(main())
