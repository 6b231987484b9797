"""Benchmark suites.

A suite pairs one of the bundled lexer specifications with a generator
of synthetic inputs of a requested length.  Running a suite tokenizes
inputs of increasing size and records the wall-clock time and the
number of characters read by the scoring functions; the character
count does not depend on the machine and is used to estimate how the
lexing cost grows with the input size.
"""

import csv
import enum
import time
import logging
import pathlib
import functools
from typing import TextIO
from dataclasses import astuple, dataclass
from collections.abc import Callable, Iterable, Sequence

import numpy as np

from .error import DerivlexError
from .engine import LexerTable, tokenize_all
from .scoring import EScoreMode, CountingText
from .frontend import load_spec, compile_spec

__all__ = [
    "ESuite",
    "SPECS_DIR",
    "CSV_HEADER",
    "BenchRow",
    "get_spec_path",
    "get_suite_table",
    "gen_json_input",
    "gen_xml_input",
    "gen_adversarial_input",
    "parse_sizes",
    "run_suite",
    "growth_exponent",
    "write_csv",
]

_log = logging.getLogger(__name__)

SPECS_DIR = pathlib.Path(__file__).parent / "specs"
CSV_HEADER = ("suite", "size", "mode", "wall_ms", "char_reads")
DEFAULT_SEED = 20240101


class ESuite(enum.Enum):
    """Benchmark suites."""

    JSON = "json"
    XML = "xml"
    ADVERSARIAL = "adversarial"


@dataclass(frozen=True, slots=True)
class BenchRow:
    """Measures of a single benchmark run."""

    suite: str
    size: int
    mode: str
    wall_ms: float
    char_reads: int


def get_spec_path(name: str) -> pathlib.Path:
    """Return the path of the bundled specification `name`.

    Available names are the stems of the ``.vl`` files in
    :data:`SPECS_DIR` (e.g. "minical", "looping", "json").
    """
    path = SPECS_DIR / f"{name}.vl"
    if not path.is_file():
        available = sorted(item.stem for item in SPECS_DIR.glob("*.vl"))
        raise ValueError(
            f"unknown specification {name!r} (available: {available})"
        )
    return path


@functools.lru_cache
def get_suite_table(suite: ESuite) -> LexerTable:
    """Return the compiled lexer table of `suite`."""
    suite = ESuite(suite)
    return compile_spec(load_spec(get_spec_path(suite.value)))


# --- input generators ------------------------------------------------------
def _fill(items: Iterable[str], n: int, opening: str, closing: str) -> str:
    # join as many items as fit in `n` characters, pad with blanks
    if n < len(opening) + len(closing):
        return " " * n
    parts = [opening]
    length = len(opening) + len(closing)
    for item in items:
        if length + len(item) > n:
            break
        parts.append(item)
        length += len(item)
    parts.append(closing)
    return "".join(parts).ljust(n)


_JSON_KEYS = ("country", "code", "year", "value", "growth", "flag", "note")
_NAME_CHARS = np.array(list("abcdefghijklmnopqrstuvwxyz ABCDEFXYZ"))


def _json_string(rng: np.random.Generator) -> str:
    chars = rng.choice(_NAME_CHARS, size=rng.integers(0, 12))
    text = "".join(chars)
    if rng.random() < 0.1:
        text += rng.choice(["\\n", '\\"', "\\u00e9", "\\\\"])
    return f'"{text}"'


def _json_value(rng: np.random.Generator, key: str) -> str:
    match key:
        case "year":
            return str(rng.integers(1960, 2030))
        case "value":
            return f"{rng.uniform(1e6, 1e13):.4e}"
        case "growth":
            return f"{rng.normal(2.0, 3.0):.3f}"
        case "flag":
            return str(rng.choice(["true", "false"]))
        case "note":
            return "null" if rng.random() < 0.7 else _json_string(rng)
        case _:
            return _json_string(rng)


def _json_records(rng: np.random.Generator):
    first = True
    while True:
        fields = [
            f'"{key}": {_json_value(rng, key)}'
            for key in _JSON_KEYS
            if rng.random() < 0.8
        ]
        sep = "" if first else ",\n"
        first = False
        yield sep + "{" + ", ".join(fields) + "}"


def gen_json_input(n: int, seed: int = DEFAULT_SEED) -> str:
    """Generate a JSON document of exactly `n` characters.

    The document is an array of records with integer, float, string,
    boolean and null values.  Keys are drawn from a fixed set, each
    present with probability 0.8; about one string in ten contains an
    escape sequence.  The array is padded with trailing blanks.  The
    output only depends on `n` and `seed`.
    """
    rng = np.random.default_rng(seed)
    return _fill(_json_records(rng), n, "[", "]\n")


def _xml_elements(rng: np.random.Generator):
    tags = ("row", "item", "value", "country", "ns:entry")
    words = ("alpha", "beta", "gamma", "3.14", "x-ray", "Z_1", "data")
    while True:
        tag = str(rng.choice(tags))
        kind = rng.random()
        if kind < 0.1:
            yield f"<!-- {rng.choice(words)} - note -->\n"
        elif kind < 0.2:
            yield f'<{tag} id="{rng.integers(0, 1000)}"/>\n'
        else:
            text = " ".join(rng.choice(words, size=rng.integers(1, 4)))
            attr = f'name="{rng.choice(words)}"'
            yield f"<{tag} {attr}>{text}</{tag}>\n"


def gen_xml_input(n: int, seed: int = DEFAULT_SEED) -> str:
    """Generate an XML document of exactly `n` characters.

    The document has a declaration and a root element containing
    elements with attributes and text, empty elements and comments.
    """
    rng = np.random.default_rng(seed)
    opening = '<?xml version="1.0"?>\n<data>\n'
    return _fill(_xml_elements(rng), n, opening, "</data>\n")


def gen_adversarial_input(n: int) -> str:
    """Return ``"c" * n``.

    Against the bundled adversarial specification every character is a
    single token that all the rules but the catch-all one reject.
    """
    return "c" * n


_GENERATORS: dict[ESuite, Callable[[int], str]] = {
    ESuite.JSON: gen_json_input,
    ESuite.XML: gen_xml_input,
    ESuite.ADVERSARIAL: gen_adversarial_input,
}


# --- running ---------------------------------------------------------------
def _parse_size(text: str) -> int:
    text = text.strip().lower()
    scale = 1
    if text.endswith("k"):
        text, scale = text[:-1], 1000
    value = int(text) * scale
    if value < 0:
        raise ValueError(f"negative size: {value}")
    return value


def parse_sizes(text: str) -> list[int]:
    """Parse a list of sizes.

    Items are separated by commas and may use the ``k`` suffix
    (thousands).  An item ``A..B`` expands to the doubling ladder
    ``A, 2A, 4A, ...`` up to `B`::

        >>> parse_sizes("1k..8k,10")
        [1000, 2000, 4000, 8000, 10]
    """
    sizes = []
    for item in text.split(","):
        if ".." in item:
            lo_text, hi_text = item.split("..", 1)
            lo, hi = _parse_size(lo_text), _parse_size(hi_text)
            if lo == 0:
                raise ValueError(f"invalid ladder {item!r}: it starts at 0")
            size = lo
            while size <= hi:
                sizes.append(size)
                size *= 2
        else:
            sizes.append(_parse_size(item))
    return sizes


have_tqdm: bool
try:
    import tqdm

    have_tqdm = True
except ImportError:
    have_tqdm = False


def run_suite(
    suite: ESuite,
    sizes: Sequence[int],
    mode: EScoreMode = EScoreMode.FAST,
    fuel: int | None = None,
    progress: bool = False,
) -> list[BenchRow]:
    """Tokenize the synthetic inputs of `suite` for each size.

    Return a row per size.  The `char_reads` column only depends on the
    suite, the size and the `mode`.  Raise
    :exc:`derivlex.error.DerivlexError` if an input fails to tokenize.
    """
    suite = ESuite(suite)
    mode = EScoreMode(mode)
    table = get_suite_table(suite)
    generator = _GENERATORS[suite]

    iterable: Iterable[int]
    if progress and have_tqdm and len(sizes) > 1:
        iterable = tqdm.tqdm(sizes, unit="run", desc=suite.value)
    else:
        iterable = sizes

    rows = []
    for size in iterable:
        text = CountingText(generator(size))
        t0 = time.perf_counter()
        result = tokenize_all(table, text, fuel=fuel, mode=mode)
        elapsed = (time.perf_counter() - t0) * 1000
        if not result.ok:
            outcome = result.outcome
            raise DerivlexError(
                f"{suite.value} input of size {size} failed at "
                f"{outcome.position}: {outcome.message}"
            )
        _log.info(
            "%s size=%d mode=%s: %d tokens, %d reads, %.1f ms",
            suite.value,
            size,
            mode.value,
            len(result.tokens),
            text.reads,
            elapsed,
        )
        rows.append(
            BenchRow(suite.value, size, mode.value, elapsed, text.reads)
        )
    return rows


def growth_exponent(rows: Iterable[BenchRow]) -> float:
    """Return the slope of log(char_reads) against log(size).

    Rows with a null size or no reads are ignored.  Return NaN if less
    than two distinct sizes remain.
    """
    points = [
        (row.size, row.char_reads)
        for row in rows
        if row.size > 0 and row.char_reads > 0
    ]
    if len({size for size, _ in points}) < 2:
        return float("nan")
    sizes, reads = np.log(np.asarray(points, dtype=float)).T
    slope, _ = np.polyfit(sizes, reads, 1)
    return float(slope)


def write_csv(rows: Iterable[BenchRow], fd: TextIO) -> None:
    """Write `rows` in CSV format with a header row."""
    writer = csv.writer(fd, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        suite, size, mode, wall_ms, char_reads = astuple(row)
        writer.writerow([suite, size, mode, f"{wall_ms:.3f}", char_reads])
