"""Command-line interface.

Exit codes: 0 when every query ran (regardless of established /
not-established outcomes), 1 for usage, parse, or query errors, 2 for an
internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .document import Document, ParseError, QueryDecl, parse
from .report import render_text, report_to_json, run_document

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qreider",
        description="Exact Reider-type positivity checks for adjoint systems on surfaces with boundary.",
    )
    parser.add_argument("--version", action="version", version=f"qreider {__version__}")
    sub = parser.add_subparsers(dest="command")

    check = sub.add_parser("check", help="run the queries of a .surf document")
    check.add_argument("file", help="input document, or '-' for stdin")
    check.add_argument("--json", action="store_true", help="emit the machine-readable report")
    check.add_argument("--depth", type=int, default=24, help="dyadic search depth (default 24)")

    hz = sub.add_parser("hirzebruch", help="verify one part of the ruled-surface claim")
    hz.add_argument("--n", type=int, required=True)
    hz.add_argument("--part", type=int, choices=(1, 2), required=True)
    hz.add_argument("--m", type=int, default=None)
    hz.add_argument("--json", action="store_true")
    hz.add_argument("--depth", type=int, default=24)
    return parser


def _emit(report, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report_to_json(report), indent=2))
    else:
        print(render_text(report), end="")


def _run_check(args) -> int:
    if args.file == "-":
        text = sys.stdin.read()
        source = "<stdin>"
    else:
        path = Path(args.file)
        if not path.exists():
            print(f"error: no such file: {path}", file=sys.stderr)
            return EXIT_USAGE
        text = path.read_text()
        source = str(path)
    try:
        doc = parse(text)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run_document(doc, depth=args.depth, source=source)
    _emit(report, args.json)
    return EXIT_USAGE if report.any_error else EXIT_OK


def _run_hirzebruch(args) -> int:
    argpairs = [("n", str(args.n)), ("part", str(args.part)), ("depth", str(args.depth))]
    if args.m is not None:
        argpairs.insert(2, ("m", str(args.m)))
    doc = Document(queries=(QueryDecl("hirzebruch-claim", tuple(argpairs)),))
    report = run_document(doc, depth=args.depth, source=f"hirzebruch n={args.n} part={args.part}")
    _emit(report, args.json)
    return EXIT_USAGE if report.any_error else EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE
    try:
        if args.command == "check":
            return _run_check(args)
        return _run_hirzebruch(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - report as internal failure
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
