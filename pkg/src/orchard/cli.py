"""``orchard`` command line: generate / parse / eval / score / stats / fuzz.

Exit codes: 0 success, 1 invalid input or failed check, 2 usage error.
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import __version__
from .errors import OrchardError
from .evaluator import eval_pair
from .fuzz import fuzz
from .generator import DIFFICULTIES, SEED_SCHEME, SplitSpec, build_dataset, paper_splits
from .scorer import score, stats
from .text import canonicalize, parse_line, serialize
from .tree import Family

EPILOG = f"""\
seeds: every split and shard gets its own seed derived from --seed,
  {SEED_SCHEME}.
  A single split or shard can therefore be regenerated in isolation, and
  output is byte-identical for any --jobs.
"""


def _depths(text: str) -> tuple[int, ...]:
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
            values = tuple(range(lo, hi + 1))
        else:
            values = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi or a comma list, got {text!r}") from None
    if not values or min(values) < 2:
        raise argparse.ArgumentTypeError(f"depths must be >= 2, got {text!r}")
    return values


def _unit_interval(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {value}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orchard", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser(
        "generate",
        help="write dataset splits",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    gen.add_argument("--variant", choices=["fl", "mm"], required=True)
    hardness = gen.add_mutually_exclusive_group(required=True)
    hardness.add_argument("--difficulty", choices=list(DIFFICULTIES))
    hardness.add_argument("--copy-prob", type=_unit_interval, metavar="C")
    gen.add_argument("--preset", choices=["paper"], help="train/valid/test_3..test_12 at the published sizes")
    gen.add_argument("--scale", type=float, default=1.0, help="multiply preset sizes (e.g. 0.01)")
    gen.add_argument("--depths", type=_depths, help="lo:hi or comma list, equal proportions")
    gen.add_argument("--count", type=_positive_int)
    gen.add_argument("--split", default="data", help="split name without --preset (default: data)")
    gen.add_argument("--branch-prob", type=_unit_interval, default=0.5)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, required=True)
    gen.add_argument("--jobs", type=_positive_int, default=1)

    prs = sub.add_parser("parse", help="canonicalise or check sequence lines")
    _add_input(prs)
    prs.add_argument("--check", action="store_true", help="only validate; print a summary")

    ev = sub.add_parser("eval", help="print the two root values of each line")
    _add_input(ev)

    sc = sub.add_parser("score", help="per-depth accuracy of predictions")
    sc.add_argument("--refs", type=Path, required=True)
    sc.add_argument("--preds", type=Path, required=True)
    sc.add_argument("--meta", type=Path, required=True)
    sc.add_argument("--report", type=Path, help="also write the table here")

    st = sub.add_parser("stats", help="corpus summary as JSON")
    st.add_argument("--src", type=Path, required=True)
    st.add_argument("--meta", type=Path, required=True)

    fz = sub.add_parser("fuzz", help="differential round-trip/evaluator check")
    fz.add_argument("--n", type=_non_negative_int, default=100_000)
    fz.add_argument("--seed", type=int, default=0)
    return parser


def _add_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--line")
    src.add_argument("--file", type=Path)
    p.add_argument("--lenient", action="store_true", help="accept a bare '[ COPY n ]' second sentence")


def _input_lines(args: argparse.Namespace) -> Iterable[tuple[int, str]]:
    if args.line is not None:
        yield 1, args.line
        return
    with args.file.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                yield lineno, line


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _cmd_generate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.preset:
        if args.depths or args.count:
            parser.error("--depths/--count cannot be combined with --preset")
        if args.scale <= 0:
            parser.error("--scale must be positive")
        splits = paper_splits(args.scale)
    else:
        if not (args.depths and args.count):
            parser.error("without --preset both --depths and --count are required")
        splits = [SplitSpec(args.split, round(args.count * args.scale) or 1, args.depths)]
    copy_prob = DIFFICULTIES[args.difficulty] if args.difficulty else args.copy_prob
    manifest = build_dataset(
        Family(args.variant),
        copy_prob,
        splits,
        args.seed,
        args.out,
        difficulty=args.difficulty,
        branch_prob=args.branch_prob,
        jobs=args.jobs,
    )
    print(json.dumps(manifest, indent=2, sort_keys=True))
    return 0


def _cmd_parse(args: argparse.Namespace) -> int:
    bad = total = 0
    for lineno, line in _input_lines(args):
        total += 1
        try:
            pair = parse_line(canonicalize(line), lenient=args.lenient)
        except OrchardError as exc:
            bad += 1
            _err(f"line {lineno}: {type(exc).__name__}: {exc}")
            continue
        if not args.check:
            print(serialize(pair))
    if args.check:
        print(f"{total - bad}/{total} lines valid")
    return 1 if bad else 0


def _cmd_eval(args: argparse.Namespace) -> int:
    bad = 0
    for lineno, line in _input_lines(args):
        try:
            first, second = eval_pair(parse_line(canonicalize(line), lenient=args.lenient))
        except OrchardError as exc:
            bad += 1
            _err(f"line {lineno}: {type(exc).__name__}: {exc}")
            continue
        print(f"{first} {second}")
    return 1 if bad else 0


def _cmd_score(args: argparse.Namespace) -> int:
    result = score(args.refs, args.preds, args.meta)
    table = result.to_tsv()
    if args.report:
        args.report.write_text(table, encoding="ascii")
    sys.stdout.write(table)
    if result.malformed:
        _err(f"{result.malformed} malformed prediction lines scored as wrong")
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    print(json.dumps(stats(args.src, args.meta), indent=2, sort_keys=True))
    return 0


def _cmd_fuzz(args: argparse.Namespace) -> int:
    report = fuzz(args.n, args.seed)
    if report.violation is not None:
        _err(f"violation after {report.checked} pairs: {report.violation}")
        _err(f"reproducer: {report.reproducer}")
        _err(report.summary())
        return 1
    print(report.summary())
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "generate":
            return _cmd_generate(args, parser)
        if args.command == "parse":
            return _cmd_parse(args)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "score":
            return _cmd_score(args)
        if args.command == "stats":
            return _cmd_stats(args)
        return _cmd_fuzz(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except OrchardError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return 1
    except (OSError, UnicodeDecodeError) as exc:
        _err(f"I/O error: {exc}")
        return 1


def run() -> None:
    sys.exit(main())
