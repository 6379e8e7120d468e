"""Command-line interface.

Emulates a user profile with repeatable ``--diet`` / ``--custom`` flags so
labels can be checked with no service running. Exit codes are a contract:

    0  compliant (or subcommand succeeded)
    1  usage or validation error
    2  no usable text (empty capture or empty transcript)
    3  violations found
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import run_bench
from .capture import CaptureRequest
from .catalog import Catalog, default_seed_path
from .engine import FilterResult, check_label
from .errors import DietCheckError, EmptyTranscript, NoTextFound
from .transcript import normalize_term, occurrence_spans
from .users import UserProfile

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_TEXT = 2
EXIT_VIOLATIONS = 3

_RED = "\x1b[31m"
_RESET = "\x1b[0m"


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the exit-code contract wants 1."""

    def error(self, message: str):  # noqa: D102 - argparse override
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="dietcheck", description="Check ingredient labels against diet rules.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="check one label from a file, stdin, or a fragments file")
    check.add_argument("source", nargs="?", default="-",
                       help="label text file, or '-' for stdin (default)")
    check.add_argument("--fragments", metavar="FILE",
                       help="read OCR fragments instead, one fragment per line")
    check.add_argument("--seed", default=None, help="diet seed file path")
    check.add_argument("--diet", action="append", default=[], metavar="NAME",
                       help="chosen diet (repeatable)")
    check.add_argument("--custom", action="append", default=[], metavar="TEXT",
                       help="personal unwanted ingredient (repeatable)")
    check.add_argument("--format", choices=("human", "structured"), default="human")
    check.add_argument("--no-color", action="store_true", help="never emit ANSI colors")

    seed = sub.add_parser("seed", help="validate the seed file and summarize it")
    seed.add_argument("--seed", default=None, help="diet seed file path")

    diets = sub.add_parser("diets", help="list diets with descriptions")
    diets.add_argument("--seed", default=None, help="diet seed file path")

    bench = sub.add_parser("bench", help="compare naive and automaton filter backends")
    bench.add_argument("--needles", type=int, default=10_000)
    bench.add_argument("--tokens", type=int, default=200)
    bench.add_argument("--diets", type=int, default=8)
    bench.add_argument("--rng-seed", type=int, default=1234)
    bench.add_argument("--repeat", type=int, default=5)
    bench.add_argument("--format", choices=("human", "structured"), default="human")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", default=None, help="TOML config file")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--seed", default=None, help="diet seed file path")
    serve.add_argument("--store", default=None, help="persistence directory")
    serve.add_argument("--ocr-command", default=None, help="external OCR command")
    serve.add_argument("--ui-dir", default=None, help="static web UI directory to mount at /ui")

    return parser


def _seed_path(value: str | None) -> Path:
    return Path(value) if value else default_seed_path()


def _mark(text: str, spans: list[tuple[int, int]], color: bool) -> str:
    out: list[str] = []
    cursor = 0
    for start, end in spans:
        out.append(text[cursor:start])
        if color:
            out.append(f"{_RED}{text[start:end]}{_RESET}")
        else:
            out.append(f"[{text[start:end]}]")
        cursor = end
    out.append(text[cursor:])
    return "".join(out)


def _render_human(result: FilterResult, color: bool) -> str:
    by_index = {violation.token_index: violation for violation in result.violations}
    lines = ["label tokens:"]
    for token in result.tokens:
        violation = by_index.get(token.index)
        if violation is None:
            lines.append(f"  {token.index:>3}  {token.text}")
            continue
        needles = [match.needle for match in violation.matches]
        marked = _mark(token.text, occurrence_spans(token.text, needles), color)
        detail = "; ".join(
            f"{match.needle} ({', '.join(match.diets)})" for match in violation.matches
        )
        lines.append(f"  {token.index:>3}  {marked}  <- {detail}")
    diets = ", ".join(result.violated_diets) if result.violated_diets else "(none)"
    lines.append(f"violated diets: {diets}")
    lines.append(f"verdict: {result.verdict}")
    return "\n".join(lines)


def cmd_check(args: argparse.Namespace) -> int:
    structured = args.format == "structured"
    try:
        catalog = Catalog.from_seed(_seed_path(args.seed))
    except DietCheckError as exc:
        print(f"dietcheck: {exc}", file=sys.stderr)
        return EXIT_USAGE

    chosen: list[str] = []
    for name in args.diet:
        if name not in catalog:
            print(f"dietcheck: warning: no diet named {name!r} in the catalog; skipping",
                  file=sys.stderr)
        if name not in chosen:
            chosen.append(name)
    custom: list[str] = []
    for text in args.custom:
        term = normalize_term(text)
        if not term:
            print("dietcheck: --custom ingredient must be non-empty", file=sys.stderr)
            return EXIT_USAGE
        if "," in term:
            print("dietcheck: --custom ingredient may not contain a comma", file=sys.stderr)
            return EXIT_USAGE
        if term not in custom:
            custom.append(term)
    profile = UserProfile(uid="cli", name="cli", email="cli@local",
                          chosen_diets=chosen, custom_unwanted_ingredients=custom)

    try:
        if args.fragments is not None:
            fragment_lines = Path(args.fragments).read_text(encoding="utf-8").splitlines()
            source = CaptureRequest.from_fragments(fragment_lines)
        elif args.source == "-":
            source = CaptureRequest.from_raw_text(sys.stdin.read())
        else:
            source = CaptureRequest.from_raw_text(
                Path(args.source).read_text(encoding="utf-8")
            )
    except OSError as exc:
        print(f"dietcheck: cannot read label source: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        result = check_label(source, profile, catalog)
    except (NoTextFound, EmptyTranscript) as exc:
        if structured:
            print(json.dumps({"error": {"code": exc.code, "message": str(exc)}},
                             ensure_ascii=False, indent=2))
        else:
            print(f"dietcheck: {exc}", file=sys.stderr)
        return EXIT_NO_TEXT

    if structured:
        print(result.to_json())
    else:
        color = sys.stdout.isatty() and not args.no_color
        print(_render_human(result, color))
    return EXIT_VIOLATIONS if result.violations else EXIT_OK


def cmd_seed(args: argparse.Namespace) -> int:
    path = _seed_path(args.seed)
    try:
        catalog = Catalog.from_seed(path)
    except DietCheckError as exc:
        print(f"dietcheck: seed file rejected: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"loaded {len(catalog)} diets from {path}")
    for name, _description in catalog.list_diets():
        count = len(catalog.get_diet(name).forbidden_ingredients)
        print(f"  {name}: {count} forbidden ingredients")
    return EXIT_OK


def cmd_diets(args: argparse.Namespace) -> int:
    try:
        catalog = Catalog.from_seed(_seed_path(args.seed))
    except DietCheckError as exc:
        print(f"dietcheck: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for name, description in catalog.list_diets():
        count = len(catalog.get_diet(name).forbidden_ingredients)
        print(f"{name} ({count} ingredients): {description}")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    report = run_bench(
        needle_count=args.needles,
        token_count=args.tokens,
        diet_count=args.diets,
        rng_seed=args.rng_seed,
        repeat=args.repeat,
    )
    if args.format == "structured":
        print(json.dumps(report, ensure_ascii=False, indent=2))
    else:
        print(f"rule set: {report['needles']} needles ({report['unique_needles']} unique) "
              f"across {report['rules']} rules; label: {report['tokens']} tokens")
        print(f"matcher build: {report['build_ms']} ms (one-time per rule set)")
        print(f"automaton check: {report['check_ms']} ms")
        print(f"naive scan:      {report['naive_ms']} ms  (x{report['speedup']} slower)")
        print(f"verdict: {report['verdict']} with {report['violation_count']} violating tokens")
        print(f"backends agree: {report['equal']}")
    if not report["equal"]:
        print("dietcheck: backend results diverged", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .api import serve
    from .config import load_config

    try:
        config = load_config(args.config)
        if args.host is not None:
            config.host = args.host
        if args.port is not None:
            config.port = args.port
        if args.seed is not None:
            config.seed_path = Path(args.seed)
        if args.store is not None:
            config.store_path = Path(args.store)
        if args.ocr_command is not None:
            config.ocr_command = args.ocr_command
        if args.ui_dir is not None:
            config.ui_dir = Path(args.ui_dir)
    except DietCheckError as exc:
        print(f"dietcheck: {exc}", file=sys.stderr)
        return EXIT_USAGE
    serve(config)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "check": cmd_check,
        "seed": cmd_seed,
        "diets": cmd_diets,
        "bench": cmd_bench,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
