"""Command line front end.

``gradkernel script.gk`` parses and runs one script; ``-`` reads from
stdin.  Exit status: 0 when every check passed, 1 when a verification
command reported a failure, 2 for usage, parse, or semantic errors.
Diagnostics go to stderr as single lines, never tracebacks.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import GradedAlgebraError, ScriptError
from .script import parse, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradkernel",
        description="run graded-algebra scripts",
    )
    parser.add_argument("script", help="script file, or - for stdin")
    parser.add_argument(
        "--order",
        type=int,
        default=4,
        help="truncation order for all series (default 4)",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        dest="as_json",
        help="emit one JSON document instead of plain text",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.order < 1:
        print("error: --order must be at least 1", file=sys.stderr)
        return 2

    if args.script == "-":
        source = sys.stdin.read()
    else:
        try:
            with open(args.script, encoding="utf-8") as handle:
                source = handle.read()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2

    try:
        result = run(parse(source), order=args.order)
    except ScriptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GradedAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.as_json:
        document = {
            "order": args.order,
            "results": [output.data for output in result.outputs],
        }
        print(json.dumps(document, indent=2))
    else:
        for output in result.outputs:
            for line in output.lines:
                print(line)

    return 1 if result.any_check_failed else 0


if __name__ == "__main__":
    sys.exit(main())
