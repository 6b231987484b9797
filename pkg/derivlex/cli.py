"""Command Line Interface (CLI) for the derivlex Python package."""

import sys
import enum
import math
import json
import logging
import pathlib
import argparse
import dataclasses

from . import __version__
from .ir import read_ir, write_ir
from .bench import ESuite, run_suite, write_csv, parse_sizes, growth_exponent
from .error import SpecError, DerivlexError
from .regexp import size, render
from .engine import LexerTable, TokenizeResult, tokenize_all
from .scoring import EScoreMode
from .frontend import load_spec, compile_spec
from .tests import print_versions
from ._typing import PathType

EX_OK = 0
EX_FAILURE = 1
EX_IOERR = 2
EX_LEXERROR = 3
EX_INTERRUPT = 130

PROG = __package__ + "-cli"
LOGFMT = "%(levelname)s: %(message)s"
DEFAULT_LOGLEVEL = "WARNING"
DEFAULT_SIZES = "1k..16k"
INPUT_ENCODING = "latin-1"


class EOutputFormat(enum.Enum):
    """Output formats of the token stream."""

    TSV = "tsv"
    JSON = "json"


def _autocomplete(parser: argparse.ArgumentParser) -> None:
    try:
        import argcomplete
    except ImportError:
        pass
    else:
        argcomplete.autocomplete(parser)


def _fuel(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid fuel: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"negative fuel: {value}")
    return value


def _sizes(text: str) -> list[int]:
    try:
        return parse_sizes(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def load_table(path: PathType, entry: str | None = None) -> LexerTable:
    """Load a lexer table from a `.vl` specification or an IR file."""
    path = pathlib.Path(path)
    if path.suffix == ".vl":
        return compile_spec(load_spec(path), entry)
    table = read_ir(path)
    if entry is not None:
        if entry not in table:
            raise DerivlexError(f"unknown entry lexer {entry!r}")
        table = dataclasses.replace(table, entry_name=entry)
    return table


def _escape(text: str) -> str:
    return (
        text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")
    )


def format_tokens(
    result: TokenizeResult, fmt: EOutputFormat = EOutputFormat.TSV
) -> list[str]:
    """Format the tokens of `result`, one line per token."""
    lines = []
    for entry in result.tokens:
        kind, payload = entry.token.kind, entry.token.payload
        if fmt is EOutputFormat.JSON:
            record = {
                "kind": kind,
                "payload": payload,
                "start": str(entry.start),
                "end": str(entry.end),
            }
            lines.append(json.dumps(record))
        else:
            payload = "" if payload is None else _escape(payload)
            lines.append(f"{kind}\t{payload}\t{entry.start}\t{entry.end}")
    return lines


def format_error(result: TokenizeResult) -> str:
    """Format the error outcome ending `result`."""
    outcome = result.outcome
    message = outcome.message
    if getattr(outcome, "lexeme", ""):
        message += outcome.lexeme
    return f"ERROR\t{outcome.kind}\t{_escape(message)}\t{outcome.position}"


def info():
    """Provide information about the installation and environment.

    Information provided include: the platform, the library versions
    and the default lexing configuration.
    """
    print_versions()


def gen(spec: PathType, outpath: PathType | None = None):
    """Compile a lexer specification to the IR format.

    The IR file can be executed with the `run` sub-command.
    """
    spec = pathlib.Path(spec)
    if outpath is None:
        outpath = spec.with_suffix(".ir")
    table = compile_spec(load_spec(spec))
    write_ir(table, outpath)

    nrules = sum(len(lexer.actions) for lexer in table.lexers.values())
    print(
        f"{spec}: {len(table.lexers)} lexer(s), {nrules} rule(s) "
        f"written to {outpath}"
    )
    return EX_OK


def run(
    table: PathType,
    path: PathType,
    fuel: int | None = None,
    entry: str | None = None,
    mode: EScoreMode = EScoreMode.FAST,
    fmt: EOutputFormat = EOutputFormat.TSV,
):
    """Tokenize a file and print the token stream.

    The lexer table is read from an IR file or compiled from a `.vl`
    specification.  Each token is printed on a line with its kind,
    payload, start and end positions (line:column).  On lexing errors
    an "ERROR" line is printed on the standard error.
    """
    lexers = load_table(table, entry)
    with open(path, encoding=INPUT_ENCODING, newline="") as fd:
        text = fd.read()

    result = tokenize_all(lexers, text, fuel=fuel, mode=EScoreMode(mode))
    for line in format_tokens(result, EOutputFormat(fmt)):
        print(line)
    if not result.ok:
        sys.stdout.flush()
        print(format_error(result), file=sys.stderr)
        return EX_LEXERROR
    return EX_OK


def dump(table: PathType, entry: str | None = None):
    """Print the compiled lexer table.

    Lexers are listed with their policy and recursion group, rules with
    their index, the canonical rendering of their pattern and their
    action.
    """
    lexers = load_table(table, entry)
    print(f"entry: {lexers.entry}")
    print(f"eof: {lexers.eof if lexers.eof is not None else '-'}")
    print(f"tokens: {' '.join(lexers.tokens)}")
    for lexer in lexers.lexers.values():
        print()
        print(
            f"lexer {lexer.name} "
            f"(policy: {lexer.policy.value}, group: {lexer.group})"
        )
        patterns = {
            rule.action: f"{render(rule.pattern)}  [size {size(rule.pattern)}]"
            for rule in lexer.re_rules
        }
        patterns.update(
            (rule.action, f"$({rule.predicate})") for rule in lexer.fn_rules
        )
        for index, action in enumerate(lexer.actions):
            print(f"  {index:3d}  {patterns[index]}")
            print(f"       {{ {action} }}")
    return EX_OK


def bench(
    suite: ESuite,
    sizes: list[int] | None = None,
    mode: EScoreMode = EScoreMode.FAST,
    fuel: int | None = None,
    csvpath: PathType | None = None,
    no_progress: bool = False,
):
    """Run a benchmark suite and print the results in CSV format.

    Synthetic inputs of the requested sizes are tokenized with the
    lexer of the suite.  For each size the wall-clock time and the
    number of characters read by the scoring functions are reported.
    The growth exponent of the character reads with respect to the
    input size is printed on the standard error.
    """
    if sizes is None:
        sizes = parse_sizes(DEFAULT_SIZES)
    rows = run_suite(
        ESuite(suite),
        sizes,
        EScoreMode(mode),
        fuel=fuel,
        progress=not no_progress,
    )
    if csvpath is None:
        write_csv(rows, sys.stdout)
    else:
        with open(csvpath, "w", newline="") as fd:
            write_csv(rows, fd)

    exponent = growth_exponent(rows)
    text = "n/a" if math.isnan(exponent) else f"{exponent:.2f}"
    sys.stdout.flush()
    print(f"growth exponent: {text}", file=sys.stderr)
    return EX_OK


def _add_logging_control_args(
    parser: argparse.ArgumentParser, default_loglevel: str = DEFAULT_LOGLEVEL
) -> argparse.ArgumentParser:
    """Add command line options for logging control."""
    loglevels = [logging.getLevelName(level) for level in range(10, 60, 10)]

    parser.add_argument(
        "--loglevel",
        default=default_loglevel,
        choices=loglevels,
        help="logging level (default: %(default)s)",
    )
    parser.add_argument(
        "-q",
        "--quiet",
        dest="loglevel",
        action="store_const",
        const="ERROR",
        help=(
            "suppress standard output messages, only errors are printed "
            "to screen (set 'loglevel' to 'ERROR')"
        ),
    )
    parser.add_argument(
        "-v",
        "--verbose",
        dest="loglevel",
        action="store_const",
        const="INFO",
        help="print verbose output messages (set 'loglevel' to 'INFO')",
    )
    parser.add_argument(
        "--debug",
        dest="loglevel",
        action="store_const",
        const="DEBUG",
        help="print debug messages (set 'loglevel' to 'DEBUG')",
    )

    return parser


def _add_fuel_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-fuel",
        "--fuel",
        type=_fuel,
        default=None,
        help=(
            "starting fuel of each lexing step (default: the "
            "DERIVLEX_FUEL environment variable or 1000000)"
        ),
    )


def _add_mode_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--mode",
        choices=[item.value for item in EScoreMode],
        default=EScoreMode.FAST.value,
        help="score computation (default: %(default)s)",
    )


def _get_synopsis(docstring: str | None) -> str:
    return docstring.splitlines()[0] if docstring is not None else ""


def _add_subparser(subparsers, name: str, func) -> argparse.ArgumentParser:
    synopsis = _get_synopsis(func.__doc__)
    doc = func.__doc__

    if subparsers is None:
        parser = argparse.ArgumentParser(prog=name, description=doc)
    else:
        parser = subparsers.add_parser(name, description=doc, help=synopsis)

    parser.set_defaults(func=func)
    return parser


def get_info_parser(subparsers=None) -> argparse.ArgumentParser:
    """Set up the argument parser for the `info` sub-command."""
    return _add_subparser(subparsers, "info", info)


def get_gen_parser(subparsers=None) -> argparse.ArgumentParser:
    """Set up the argument parser for the `gen` sub-command."""
    parser = _add_subparser(subparsers, "gen", gen)

    # command line options
    parser.add_argument(
        "-o",
        "--outpath",
        default=None,
        help=(
            "path of the output IR file (default: the specification path "
            "with the '.ir' suffix)"
        ),
    )

    # positional arguments
    parser.add_argument("spec", help="path of the '.vl' specification")

    return parser


def get_run_parser(subparsers=None) -> argparse.ArgumentParser:
    """Set up the argument parser for the `run` sub-command."""
    parser = _add_subparser(subparsers, "run", run)

    # command line options
    _add_fuel_arg(parser)
    parser.add_argument(
        "--entry",
        default=None,
        help="name of the entry lexer (default: the first lexer)",
    )
    _add_mode_arg(parser)
    parser.add_argument(
        "--format",
        dest="fmt",
        choices=[item.value for item in EOutputFormat],
        default=EOutputFormat.TSV.value,
        help="format of the token stream (default: %(default)s)",
    )

    # positional arguments
    parser.add_argument(
        "table", help="IR file or '.vl' specification of the lexer"
    )
    parser.add_argument("path", help="path of the file to tokenize")

    return parser


def get_dump_parser(subparsers=None) -> argparse.ArgumentParser:
    """Set up the argument parser for the `dump` sub-command."""
    parser = _add_subparser(subparsers, "dump", dump)

    # command line options
    parser.add_argument(
        "--entry",
        default=None,
        help="name of the entry lexer (default: the first lexer)",
    )

    # positional arguments
    parser.add_argument(
        "table", help="IR file or '.vl' specification of the lexer"
    )

    return parser


def get_bench_parser(subparsers=None) -> argparse.ArgumentParser:
    """Set up the argument parser for the `bench` sub-command."""
    parser = _add_subparser(subparsers, "bench", bench)

    # command line options
    parser.add_argument(
        "--sizes",
        type=_sizes,
        default=None,
        help=(
            "comma separated input sizes; the 'k' suffix multiplies by "
            "1000 and 'A..B' denotes a doubling ladder from A to B "
            f"(default: {DEFAULT_SIZES!r})"
        ),
    )
    _add_mode_arg(parser)
    _add_fuel_arg(parser)
    parser.add_argument(
        "--csv",
        dest="csvpath",
        default=None,
        help="write the results to CSVPATH instead of the standard output",
    )
    parser.add_argument(
        "--no-progress",
        action="store_true",
        default=False,
        help="suppress progress bar display",
    )

    # positional arguments
    parser.add_argument(
        "suite",
        choices=[item.value for item in ESuite],
        help="benchmark suite",
    )

    return parser


def get_parser() -> argparse.ArgumentParser:
    """Instantiate the command line argument (sub-)parser."""
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__)
    parser.add_argument(
        "--version", action="version", version="%(prog)s v" + __version__
    )

    # Command line options
    _add_logging_control_args(parser)

    # Sub-command management
    subparsers = parser.add_subparsers(title="sub-commands")
    get_info_parser(subparsers)
    get_gen_parser(subparsers)
    get_run_parser(subparsers)
    get_dump_parser(subparsers)
    get_bench_parser(subparsers)

    _autocomplete(parser)

    return parser


def parse_args(args=None, namespace=None, parser=None):
    """Parse command line arguments."""
    if parser is None:
        parser = get_parser()

    args = parser.parse_args(args, namespace)

    if getattr(args, "func", None) is None:
        parser.error("no sub-command specified.")

    return args


def _get_kwargs(args):
    kwargs = vars(args).copy()
    kwargs.pop("func", None)
    kwargs.pop("loglevel", None)
    return kwargs


def main(*argv):
    """Implement the main CLI interface."""
    # setup logging
    logging.basicConfig(format=LOGFMT, level=DEFAULT_LOGLEVEL)
    logging.captureWarnings(True)
    log = logging.getLogger(__name__)

    # parse cmd line arguments
    args = parse_args(argv if argv else None)

    try:
        # NOTE: use the root logger to set the logging level
        logging.getLogger().setLevel(args.loglevel)

        log.debug("args: %s", args)
        kwargs = _get_kwargs(args)
        status = args.func(**kwargs)
        return EX_OK if status is None else status
    except SpecError as exc:
        path = getattr(args, "spec", None) or getattr(args, "table", "")
        log.error("%s:%s", path, exc)
        return EX_FAILURE
    except DerivlexError as exc:
        log.error("%s", exc)
        return EX_FAILURE
    except FileNotFoundError as exc:
        log.error("file not found: %r", exc.filename)
        return EX_IOERR
    except OSError as exc:
        log.error("%s", exc)
        return EX_IOERR
    except Exception as exc:  # noqa: B902
        log.critical(
            "unexpected exception caught: %r %s", type(exc).__name__, exc
        )
        log.debug("stacktrace:", exc_info=True)
        return EX_FAILURE
    except KeyboardInterrupt:
        log.warning("Keyboard interrupt received: exit the program")
        return EX_INTERRUPT
