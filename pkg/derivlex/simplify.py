"""Smart constructors and the simplifying derivative.

Each smart constructor applies a small set of algebraic identities at
the node being built (no deep normalization) and otherwise falls back
to the plain constructor.  The result is always language-equal to the
plain construction.
"""

from functools import reduce
from collections.abc import Iterable

from .regexp import (
    EMPTY,
    EPSILON,
    Alt,
    Cat,
    Sym,
    Diff,
    Star,
    Empty,
    Range,
    Regexp,
    Symbol,
    NotSym,
    Epsilon,
    NotRange,
    Wildcard,
    nullable,
)

__all__ = [
    "simp_alt",
    "simp_cat",
    "simp_star",
    "simp_diff",
    "simp_derive",
    "simp_derive_str",
    "alt_list",
    "cat_list",
]


def simp_alt(e1: Regexp, e2: Regexp) -> Regexp:
    """Build ``e1 + e2`` dropping empty-language operands."""
    match (e1, e2):
        case (Empty(), _):
            return e2
        case (_, Empty()):
            return e1
    return Alt(e1, e2)


def simp_cat(e1: Regexp, e2: Regexp) -> Regexp:
    """Build ``e1 . e2``.

    Identities, tested in this order::

        r . 0 = 0,  0 . r = 0,  r . eps = r,  eps . r = r,  r* . r* = r*

    The last one only fires when the two stars are structurally equal.
    """
    match (e1, e2):
        case (_, Empty()) | (Empty(), _):
            return EMPTY
        case (_, Epsilon()):
            return e1
        case (Epsilon(), _):
            return e2
        case (Star(), Star()) if e1 == e2:
            return e1
    return Cat(e1, e2)


def simp_star(e: Regexp) -> Regexp:
    """Build ``e*``: ``0* = eps``, ``(r*)* = r*`` and ``eps* = eps``."""
    match e:
        case Empty():
            return EPSILON
        case Star():
            return e
        case Epsilon():
            return EPSILON
    return Star(e)


def simp_diff(e1: Regexp, e2: Regexp) -> Regexp:
    """Build ``e1 - e2``: ``r - 0 = r`` and ``0 - r = 0``."""
    match (e1, e2):
        case (_, Empty()):
            return e1
        case (Empty(), _):
            return EMPTY
    return Diff(e1, e2)


def simp_derive(r: Regexp, c: Symbol) -> Regexp:
    """Derivative of `r` with respect to `c` built with smart constructors.

    The recursion scheme is the one of :func:`derivlex.regexp.derive`.
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
            return simp_alt(simp_derive(e1, c), simp_derive(e2, c))
        case Cat(e1, e2):
            head = simp_cat(simp_derive(e1, c), e2)
            if nullable(e1):
                return simp_alt(head, simp_derive(e2, c))
            return head
        case Star(e):
            return simp_cat(simp_derive(e, c), r)
        case Diff(e1, e2):
            return simp_diff(simp_derive(e1, c), simp_derive(e2, c))
    raise TypeError(f"unexpected regexp: {r!r}")


def simp_derive_str(r: Regexp, s: str) -> Regexp:
    """Derive `r` by each character of `s` with :func:`simp_derive`."""
    for ch in s:
        r = simp_derive(r, ord(ch))
    return r


def alt_list(items: Iterable[Regexp]) -> Regexp:
    """Left fold of `items` with :func:`simp_alt` (empty input gives 0)."""
    return reduce(simp_alt, items, EMPTY)


def cat_list(items: Iterable[Regexp]) -> Regexp:
    """Right-nested :func:`simp_cat` of `items` (empty input gives eps)."""
    result: Regexp = EPSILON
    for item in reversed(list(items)):
        result = simp_cat(item, result)
    return result
