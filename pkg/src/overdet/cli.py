"""Command line front end: ``overdet analyze FILE``, ``overdet catalog NAME``,
``overdet list-catalog``, ``overdet selftest``."""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from . import __version__, catalog
from .report import AnalysisError, AnalyzeOptions, analyze
from .sysparse import ParseError, parse

EXIT_OK, EXIT_ANALYSIS, EXIT_USAGE = 0, 1, 2


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _default_seed() -> int:
    env = os.environ.get("OVERDET_SEED")
    if env is None:
        return 0
    try:
        return _u64(env)
    except argparse.ArgumentTypeError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--seed", type=_u64, default=None,
                        help="sampling seed (default: $OVERDET_SEED or 0)")
    common.add_argument("--samples", type=_positive, default=1000)
    common.add_argument("--max-res-len", type=_positive, default=None,
                        help="maximum number of resolution maps (default: n)")
    common.add_argument("--query-dim", type=int, action="append", default=[],
                        help="ask whether a submanifold of this dimension is removable")
    common.add_argument("--no-omega", action="store_true")
    common.add_argument("--no-flagcover", action="store_true")

    p = argparse.ArgumentParser(prog="overdet", description=__doc__)
    p.add_argument("--version", action="version", version=f"overdet {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common], help="analyze a system file")
    a.add_argument("file")
    c = sub.add_parser("catalog", parents=[common], help="analyze a built-in system")
    c.add_argument("name")
    sub.add_parser("list-catalog", help="list built-in systems")
    sub.add_parser("selftest", help="run the acceptance checks")
    return p


def _options(args) -> AnalyzeOptions:
    return AnalyzeOptions(
        seed=_default_seed() if args.seed is None else args.seed,
        samples=args.samples,
        max_res_len=args.max_res_len,
        query_dims=list(args.query_dim),
        omega=not args.no_omega,
        flagcover=not args.no_flagcover,
    )


def run_cli(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    if args.command == "list-catalog":
        for name in catalog.names():
            spec = catalog.system(name)
            out.write(f"{name:16s} n={spec.nvars} r={spec.nunknowns} s={spec.neqs}\n")
        return EXIT_OK
    if args.command == "selftest":
        from .acceptance import run_all

        results = run_all(out=out)
        return EXIT_OK if all(r.passed for r in results) else EXIT_ANALYSIS

    try:
        if args.command == "analyze":
            try:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            except (OSError, UnicodeDecodeError) as exc:
                err.write(f"overdet: cannot read {args.file}: {exc}\n")
                return EXIT_ANALYSIS
            spec = parse(text)
        else:
            spec = catalog.system(args.name)
        for k in args.query_dim:
            if not 0 <= k < spec.nvars:
                err.write(f"overdet: --query-dim {k} outside 0..{spec.nvars - 1}\n")
                return EXIT_USAGE
        report = analyze(spec, _options(args))
    except ParseError as exc:
        where = getattr(args, "file", "<catalog>")
        err.write(f"overdet: {where}: parse error: {exc}\n")
        return EXIT_ANALYSIS
    except catalog.UnknownCatalogEntry as exc:
        err.write(f"overdet: {exc.args[0]}\n")
        return EXIT_ANALYSIS
    except AnalysisError as exc:
        err.write(f"overdet: analysis failed: {exc}\n")
        return EXIT_ANALYSIS

    out.write(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
