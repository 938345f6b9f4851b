"""Command line entry point.

Exit codes: 0 success, 1 a mathematical failure (nonzero class, Jacobi
failure, failed check), 2 unusable input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from ..atiyah import TruncationUnstable
from . import commands
from .report import RunReport
from .schema import ParseError, load_document

FILE_COMMANDS = {
    "validate": commands.cmd_validate,
    "cohomology": commands.cmd_cohomology,
    "obstruction": commands.cmd_obstruction,
    "classify": commands.cmd_classify,
    "spectral": commands.cmd_spectral,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="algebroid", description="Exact computations with Lie-Rinehart extensions.")
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check the axioms of an algebroid, coupling or extension",
        "cohomology": "cohomology dimensions (trivial coefficients, center, constant Čech data)",
        "obstruction": "the obstruction class of a coupling, locally or over a nerve",
        "classify": "compare extensions through their difference classes",
        "spectral": "pages of the spectral sequence of an extension",
    }
    for name, h in helps.items():
        p = sub.add_parser(name, help=h)
        p.add_argument("file", type=Path)
        p.add_argument("--seed", type=int, default=None, help="run the randomized checks with this seed")
        p.add_argument("--output", type=Path, default=None, help="write the JSON report here instead of stdout")
        if name == "spectral":
            p.add_argument("--pages", type=int, default=3, help="highest page to print")
    p = sub.add_parser("atiyah-p1", help="the Atiyah algebroid of O(n) on the projective line")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--truncation", type=int, default=None, help="weight window [-D, D]; default |n| + 3")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", type=Path, default=None)
    return ap


def _emit(report: RunReport, output: Optional[Path]) -> None:
    text = report.to_json()
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def run(args: argparse.Namespace) -> int:
    try:
        if args.command == "atiyah-p1":
            D = args.truncation if args.truncation is not None else abs(args.degree) + 3
            report = commands.cmd_atiyah_p1(args.degree, D, args.seed)
        else:
            try:
                raw = args.file.read_bytes()
            except OSError as e:
                raise ParseError(e.strerror or str(e), str(args.file)) from None
            doc, digest = load_document(raw)
            kw = {"pages": args.pages} if args.command == "spectral" else {}
            report = FILE_COMMANDS[args.command](doc, digest, args.seed, **kw)
    except ParseError as e:
        print(f"algebroid: parse error at {e.location}: {e.message}", file=sys.stderr)
        return 2
    except TruncationUnstable as e:
        print(f"algebroid: {e}", file=sys.stderr)
        return 2
    _emit(report, args.output)
    return 0 if report.ok else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(build_parser().parse_args(argv))


__all__ = ["build_parser", "main", "run"]
