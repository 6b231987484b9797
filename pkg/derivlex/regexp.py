"""Regular expressions and Brzozowski derivatives.

The regexp algebra works on an alphabet of 8-bit character codes
(0-255), ordered by their numeric value.  Besides the classic
constructors (empty set, empty string, symbol, alternative,
concatenation and Kleene star) the algebra provides the negated symbol,
the wildcard, character ranges and their negation, and the difference of
two regexps.

Matching is performed with derivatives: a string `s` belongs to the
language of `r` iff ``nullable(derive_str(r, s))``.

Regexps have a canonical textual rendering in prefix notation with
hexadecimal symbol codes, e.g.::

    cat(range(61,7a), star(range(61,7a)))

which is used by the IR files and by golden tests.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "Symbol",
    "Regexp",
    "Empty",
    "Epsilon",
    "Sym",
    "NotSym",
    "Wildcard",
    "Range",
    "NotRange",
    "Alt",
    "Cat",
    "Star",
    "Diff",
    "EMPTY",
    "EPSILON",
    "WILDCARD",
    "nullable",
    "derive",
    "derive_str",
    "matches",
    "size",
    "render",
    "parse_rendered",
    "sym",
    "string",
    "char_range",
]

Symbol = int

SYMBOL_MIN = 0
SYMBOL_MAX = 255


def as_symbol(value: str | int) -> Symbol:
    """Return the symbol code of a one-character string (or an int)."""
    if isinstance(value, str) and len(value) != 1:
        raise ValueError(f"not a single character: {value!r}")
    code = ord(value) if isinstance(value, str) else int(value)
    if not SYMBOL_MIN <= code <= SYMBOL_MAX:
        raise ValueError(f"not an 8-bit symbol: {value!r}")
    return code


class Regexp:
    """Base class of the regexp AST."""

    __slots__ = ()

    def __str__(self) -> str:
        """Return the canonical rendering of the regexp."""
        return render(self)


@dataclass(frozen=True, slots=True)
class Empty(Regexp):
    """The empty language."""


@dataclass(frozen=True, slots=True)
class Epsilon(Regexp):
    """The language containing only the empty string."""


@dataclass(frozen=True, slots=True)
class Sym(Regexp):
    """A single symbol."""

    a: Symbol


@dataclass(frozen=True, slots=True)
class NotSym(Regexp):
    """Any single symbol different from `a`."""

    a: Symbol


@dataclass(frozen=True, slots=True)
class Wildcard(Regexp):
    """Any single symbol."""


@dataclass(frozen=True, slots=True)
class Range(Regexp):
    """Any single symbol `c` with ``lo <= c <= hi``.

    ``lo > hi`` is legal and denotes the empty language.
    """

    lo: Symbol
    hi: Symbol


@dataclass(frozen=True, slots=True)
class NotRange(Regexp):
    """Any single symbol outside the ``[lo, hi]`` interval.

    ``lo > hi`` is legal and behaves as the wildcard.
    """

    lo: Symbol
    hi: Symbol


@dataclass(frozen=True, slots=True)
class Alt(Regexp):
    """Alternative: ``e1 + e2``."""

    e1: Regexp
    e2: Regexp


@dataclass(frozen=True, slots=True)
class Cat(Regexp):
    """Concatenation: ``e1 . e2``."""

    e1: Regexp
    e2: Regexp


@dataclass(frozen=True, slots=True)
class Star(Regexp):
    """Kleene star: ``e*``."""

    e: Regexp


@dataclass(frozen=True, slots=True)
class Diff(Regexp):
    """Difference: strings matched by `e1` and not by `e2`."""

    e1: Regexp
    e2: Regexp


EMPTY = Empty()
EPSILON = Epsilon()
WILDCARD = Wildcard()


def nullable(r: Regexp) -> bool:
    """Return True iff the empty string belongs to the language of `r`."""
    match r:
        case Epsilon() | Star():
            return True
        case Empty() | Sym() | NotSym() | Wildcard() | Range() | NotRange():
            return False
        case Alt(e1, e2):
            return nullable(e1) or nullable(e2)
        case Cat(e1, e2):
            return nullable(e1) and nullable(e2)
        case Diff(e1, e2):
            return nullable(e1) and not nullable(e2)
    raise TypeError(f"unexpected regexp: {r!r}")


def derive(r: Regexp, c: Symbol) -> Regexp:
    """Return the derivative of `r` with respect to the symbol `c`.

    This is the textbook derivative: no simplification is applied to the
    resulting expression (see :func:`derivlex.simplify.simp_derive`).
    """
    match r:
        case Empty() | Epsilon():
            return EMPTY
        case Sym(a):
            return EPSILON if a == c else EMPTY
        case NotSym(a):
            return EPSILON if a != c else EMPTY
        case Wildcard():
            return EPSILON
        case Range(lo, hi):
            return EPSILON if lo <= c <= hi else EMPTY
        case NotRange(lo, hi):
            return EMPTY if lo <= c <= hi else EPSILON
        case Alt(e1, e2):
            return Alt(derive(e1, c), derive(e2, c))
        case Cat(e1, e2):
            head = Cat(derive(e1, c), e2)
            if nullable(e1):
                return Alt(head, derive(e2, c))
            return head
        case Star(e):
            return Cat(derive(e, c), r)
        case Diff(e1, e2):
            return Diff(derive(e1, c), derive(e2, c))
    raise TypeError(f"unexpected regexp: {r!r}")


def derive_str(r: Regexp, s: str) -> Regexp:
    """Derive `r` with respect to each character of `s`, left to right."""
    for ch in s:
        r = derive(r, ord(ch))
    return r


def matches(r: Regexp, s: str) -> bool:
    """Return True iff `s` belongs to the language of `r`."""
    return nullable(derive_str(r, s))


def size(r: Regexp) -> int:
    """Return the number of nodes of `r`."""
    count = 0
    stack = [r]
    while stack:
        node = stack.pop()
        count += 1
        match node:
            case Alt(e1, e2) | Cat(e1, e2) | Diff(e1, e2):
                stack.append(e1)
                stack.append(e2)
            case Star(e):
                stack.append(e)
    return count


def render(r: Regexp) -> str:
    """Return the canonical prefix rendering of `r`."""
    match r:
        case Empty():
            return "empty"
        case Epsilon():
            return "eps"
        case Wildcard():
            return "any"
        case Sym(a):
            return f"sym({a:02x})"
        case NotSym(a):
            return f"notsym({a:02x})"
        case Range(lo, hi):
            return f"range({lo:02x},{hi:02x})"
        case NotRange(lo, hi):
            return f"notrange({lo:02x},{hi:02x})"
        case Alt(e1, e2):
            return f"alt({render(e1)}, {render(e2)})"
        case Cat(e1, e2):
            return f"cat({render(e1)}, {render(e2)})"
        case Star(e):
            return f"star({render(e)})"
        case Diff(e1, e2):
            return f"diff({render(e1)}, {render(e2)})"
    raise TypeError(f"unexpected regexp: {r!r}")


_RENDER_TOKEN_RE = re.compile(r"\s*(?:([a-z]+)|([(),]))")
_RENDER_SYMBOL_RE = re.compile(r"\s*([0-9a-f]{2})(?![0-9a-z])")
_NULLARY = {"empty": EMPTY, "eps": EPSILON, "any": WILDCARD}
_UNARY_SYMBOL = {"sym": Sym, "notsym": NotSym}
_BINARY_SYMBOL = {"range": Range, "notrange": NotRange}
_BINARY = {"alt": Alt, "cat": Cat, "diff": Diff}


class _RenderedParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _next(self) -> str:
        mobj = _RENDER_TOKEN_RE.match(self.text, self.pos)
        if mobj is None:
            raise ValueError(
                f"invalid regexp rendering at offset {self.pos}: "
                f"{self.text!r}"
            )
        self.pos = mobj.end()
        return mobj.group(mobj.lastindex or 0)

    def _expect(self, token: str) -> None:
        found = self._next()
        if found != token:
            raise ValueError(
                f"expected {token!r}, found {found!r} at offset {self.pos}"
            )

    def _symbol(self) -> Symbol:
        mobj = _RENDER_SYMBOL_RE.match(self.text, self.pos)
        if mobj is None:
            raise ValueError(
                f"invalid symbol code at offset {self.pos}: {self.text!r}"
            )
        self.pos = mobj.end()
        return int(mobj.group(1), 16)

    def parse(self) -> Regexp:
        name = self._next()
        if name in _NULLARY:
            return _NULLARY[name]
        self._expect("(")
        result: Regexp
        if name in _UNARY_SYMBOL:
            result = _UNARY_SYMBOL[name](self._symbol())
        elif name in _BINARY_SYMBOL:
            lo = self._symbol()
            self._expect(",")
            result = _BINARY_SYMBOL[name](lo, self._symbol())
        elif name == "star":
            result = Star(self.parse())
        elif name in _BINARY:
            e1 = self.parse()
            self._expect(",")
            result = _BINARY[name](e1, self.parse())
        else:
            raise ValueError(f"unknown regexp constructor: {name!r}")
        self._expect(")")
        return result

    def parse_all(self) -> Regexp:
        result = self.parse()
        if self.text[self.pos :].strip():
            raise ValueError(
                f"trailing text after regexp: {self.text[self.pos:]!r}"
            )
        return result


def parse_rendered(text: str) -> Regexp:
    """Parse the canonical rendering produced by :func:`render`."""
    return _RenderedParser(text).parse_all()


def sym(value: str | int) -> Sym:
    """Build the regexp matching a single character."""
    return Sym(as_symbol(value))


def char_range(lo: str | int, hi: str | int) -> Range:
    """Build the regexp matching any character in ``[lo, hi]``."""
    return Range(as_symbol(lo), as_symbol(hi))


def string(text: str) -> Regexp:
    """Build the regexp matching exactly `text` (right-nested concat)."""
    if not text:
        return EPSILON
    result: Regexp = sym(text[-1])
    for ch in reversed(text[:-1]):
        result = Cat(sym(ch), result)
    return result
