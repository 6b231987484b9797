"""Prefix scores of a regexp on an input string.

The *l-score* of `r` on `s` is the length of the longest prefix of `s`
matched by `r`; the *s-score* is the length of the shortest one.  When
no prefix matches the score is :data:`NO_MATCH`.

Scores are computed from a start offset into the input so that callers
never need to copy suffixes.  Four computations are available (see
:class:`EScoreMode`); they always agree on the resulting score and only
differ in the amount of work they perform:

:naive:
    plain derivatives, the whole remaining input is read
:simplify:
    derivatives built with smart constructors, the whole remaining
    input is read
:stop-early:
    plain derivatives, the computation stops as soon as the derived
    regexp is the empty language or the empty string
:fast:
    smart constructors plus early stop (the default)
"""

import enum
from typing import Union
from dataclasses import dataclass
from collections.abc import Callable

from .regexp import Empty, Regexp, Epsilon, derive, nullable
from .simplify import simp_derive

__all__ = [
    "EPolicy",
    "EScoreMode",
    "NoMatch",
    "NO_MATCH",
    "Len",
    "Score",
    "LScore",
    "SScore",
    "ScoredSplit",
    "CountingText",
    "prefix",
    "l_score",
    "s_score",
    "l_score_fast",
    "s_score_fast",
    "l_score_split",
    "s_score_split",
    "score",
]


class EPolicy(enum.Enum):
    """Matching policy of a lexer."""

    LONGEST = "longest"
    SHORTEST = "shortest"


class EScoreMode(enum.Enum):
    """Score computation variants."""

    NAIVE = "naive"
    SIMPLIFY = "simplify"
    STOP_EARLY = "stop-early"
    FAST = "fast"

    @property
    def simplifies(self) -> bool:
        """Return True if derivatives are built with smart constructors."""
        return self in (EScoreMode.SIMPLIFY, EScoreMode.FAST)

    @property
    def stops_early(self) -> bool:
        """Return True if trivial regexps end the computation."""
        return self in (EScoreMode.STOP_EARLY, EScoreMode.FAST)


@dataclass(frozen=True, slots=True)
class NoMatch:
    """No prefix of the input is matched."""

    def __str__(self) -> str:
        return "NoMatch"


@dataclass(frozen=True, slots=True)
class Len:
    """A prefix of length `n` is matched."""

    n: int

    def __str__(self) -> str:
        return f"Len {self.n}"


NO_MATCH = NoMatch()

Score = Union[NoMatch, Len]
LScore = Score
SScore = Score


class CountingText(str):
    """String counting the characters read through integer indexing.

    Slicing is not counted: slices are only taken to extract lexemes
    that have already been scored.
    """

    reads: int

    def __new__(cls, value: str = ""):
        self = super().__new__(cls, value)
        self.reads = 0
        return self

    def __getitem__(self, key):
        if isinstance(key, int):
            self.reads += 1
        return super().__getitem__(key)


@dataclass(frozen=True, slots=True)
class ScoredSplit:
    """Score of a regexp on ``text[start:]`` with the implied split.

    ``text[start:end]`` is the matched lexeme and ``text[end:]`` the
    remaining input.  On :data:`NO_MATCH` ``end == start``.
    """

    score: Score
    text: str
    start: int
    end: int

    @property
    def lexeme(self) -> str:
        """Return the matched prefix."""
        return str.__getitem__(self.text, slice(self.start, self.end))

    @property
    def remaining(self) -> str:
        """Return the input following the matched prefix."""
        return str.__getitem__(self.text, slice(self.end, None))

    @property
    def input(self) -> str:
        """Return the scored input (``lexeme + remaining``)."""
        return str.__getitem__(self.text, slice(self.start, None))


def prefix(s: str, m: int) -> str:
    """Return the first ``min(m, len(s))`` characters of `s`."""
    return s[:m]


_Derive = Callable[[Regexp, int], Regexp]


def _longest(
    r: Regexp, s: str, start: int, derive_fn: _Derive, stop_early: bool
) -> int | None:
    # Returns the end offset of the longest matched prefix (tail wins).
    best = None
    end = len(s)
    i = start
    while True:
        if stop_early and type(r) is Empty:
            break
        if nullable(r):
            best = i
        if i == end or (stop_early and type(r) is Epsilon):
            break
        r = derive_fn(r, ord(s[i]))
        i += 1
    return best


def _shortest(
    r: Regexp, s: str, start: int, derive_fn: _Derive, stop_early: bool
) -> int | None:
    # Returns the end offset of the shortest matched prefix.
    end = len(s)
    i = start
    while True:
        if nullable(r):
            return i
        if i == end or (stop_early and type(r) is Empty):
            return None
        r = derive_fn(r, ord(s[i]))
        i += 1


def _split(s: str, start: int, end: int | None) -> ScoredSplit:
    if end is None:
        return ScoredSplit(NO_MATCH, s, start, start)
    return ScoredSplit(Len(end - start), s, start, end)


def l_score_split(
    r: Regexp, s: str, start: int = 0, mode: EScoreMode = EScoreMode.FAST
) -> ScoredSplit:
    """Compute the l-score of `r` on ``s[start:]`` with the given mode."""
    derive_fn = simp_derive if mode.simplifies else derive
    return _split(
        s, start, _longest(r, s, start, derive_fn, mode.stops_early)
    )


def s_score_split(
    r: Regexp, s: str, start: int = 0, mode: EScoreMode = EScoreMode.FAST
) -> ScoredSplit:
    """Compute the s-score of `r` on ``s[start:]`` with the given mode."""
    derive_fn = simp_derive if mode.simplifies else derive
    return _split(
        s, start, _shortest(r, s, start, derive_fn, mode.stops_early)
    )


def l_score(r: Regexp, s: str, start: int = 0) -> LScore:
    """Return the length of the longest prefix of ``s[start:]`` in `r`.

    Reference implementation: on ``a z`` the score is ``n + 1`` if the
    derivative of `r` by ``a`` scores ``n`` on ``z``, else ``0`` if `r`
    is nullable; on the empty string it is ``0`` if `r` is nullable.
    The whole input is read.
    """
    return l_score_split(r, s, start, EScoreMode.NAIVE).score


def s_score(r: Regexp, s: str, start: int = 0) -> SScore:
    """Return the length of the shortest prefix of ``s[start:]`` in `r`.

    Reference implementation: ``0`` if `r` is nullable, otherwise one
    more than the score of the derivative of `r` on the tail.
    """
    return s_score_split(r, s, start, EScoreMode.NAIVE).score


def l_score_fast(r: Regexp, s: str, start: int = 0) -> ScoredSplit:
    """Optimized l-score, returning the lexeme/remaining split."""
    return l_score_split(r, s, start, EScoreMode.FAST)


def s_score_fast(r: Regexp, s: str, start: int = 0) -> ScoredSplit:
    """Optimized s-score, returning the lexeme/remaining split."""
    return s_score_split(r, s, start, EScoreMode.FAST)


def score(
    policy: EPolicy,
    r: Regexp,
    s: str,
    start: int = 0,
    mode: EScoreMode = EScoreMode.FAST,
) -> ScoredSplit:
    """Score `r` on ``s[start:]`` according to the matching `policy`."""
    if policy is EPolicy.LONGEST:
        return l_score_split(r, s, start, mode)
    return s_score_split(r, s, start, mode)
