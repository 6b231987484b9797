"""Rule election.

A lexer owns two ordered rule lists: regexp-based rules, scored on the
remaining input, and function-based rules, guarded by a predicate on
the remaining input.  Function-based rules always take priority: the
first one whose predicate holds is selected without consuming any
input.  Otherwise the regexp rule with the best score (maximal for the
longest-match policy, minimal for the shortest-match one) is elected,
the earliest rule winning ties.
"""

from __future__ import annotations

from typing import Union
from dataclasses import dataclass
from collections.abc import Sequence

from .regexp import Regexp
from .lexbuf import Position
from ._utils import quote_string, unquote_string
from .scoring import NoMatch, EPolicy, EScoreMode, ScoredSplit, score

__all__ = [
    "ActionRef",
    "Eof",
    "Always",
    "StartsWith",
    "Predicate",
    "PredicateContext",
    "parse_predicate",
    "RegexpRule",
    "FnRule",
    "NotSelected",
    "NOT_SELECTED",
    "FnChoice",
    "ReChoice",
    "Election",
    "select_fn",
    "elect_longest",
    "elect_shortest",
    "generalizing_elector",
]

ActionRef = int


@dataclass(frozen=True, slots=True)
class PredicateContext:
    """What a function-based rule may inspect.

    The remaining input is ``text[offset:]``.
    """

    text: str
    offset: int = 0
    position: Position = Position()

    @property
    def remaining(self) -> str:
        """Return the remaining input."""
        return self.text[self.offset :]

    @property
    def at_end(self) -> bool:
        """Return True if no input is left."""
        return self.offset >= len(self.text)


@dataclass(frozen=True, slots=True)
class Eof:
    """Holds on empty remaining input."""

    def __call__(self, ctx: PredicateContext) -> bool:
        return ctx.at_end

    def __str__(self) -> str:
        return "eof"


@dataclass(frozen=True, slots=True)
class Always:
    """Always holds."""

    def __call__(self, ctx: PredicateContext) -> bool:
        return True

    def __str__(self) -> str:
        return "always"


@dataclass(frozen=True, slots=True)
class StartsWith:
    """Holds when the remaining input starts with `literal`."""

    literal: str

    def __call__(self, ctx: PredicateContext) -> bool:
        return str.startswith(ctx.text, self.literal, ctx.offset)

    def __str__(self) -> str:
        return f"starts_with {quote_string(self.literal)}"


Predicate = Union[Eof, Always, StartsWith]


def parse_predicate(text: str) -> Predicate:
    """Parse the canonical rendering of a predicate."""
    text = text.strip()
    if text in ("eof", "EOF"):
        return Eof()
    elif text == "always":
        return Always()
    elif text.startswith("starts_with"):
        return StartsWith(unquote_string(text[len("starts_with") :].strip()))
    raise ValueError(f"unknown predicate: {text!r}")


@dataclass(frozen=True, slots=True)
class RegexpRule:
    """A regexp associated with the action it triggers."""

    pattern: Regexp
    action: ActionRef


@dataclass(frozen=True, slots=True)
class FnRule:
    """A predicate associated with the action it triggers."""

    predicate: Predicate
    action: ActionRef


@dataclass(frozen=True, slots=True)
class NotSelected:
    """No rule is selected."""


NOT_SELECTED = NotSelected()


@dataclass(frozen=True, slots=True)
class FnChoice:
    """A function-based rule is selected; nothing is consumed."""

    rule: FnRule


@dataclass(frozen=True, slots=True)
class ReChoice:
    """A regexp rule is selected together with its scored split."""

    rule: RegexpRule
    split: ScoredSplit

    @property
    def n(self) -> int:
        """Return the length of the selected lexeme."""
        return self.split.end - self.split.start

    @property
    def lexeme(self) -> str:
        """Return the selected lexeme."""
        return self.split.lexeme

    @property
    def remaining(self) -> str:
        """Return the input following the selected lexeme."""
        return self.split.remaining


Election = Union[NotSelected, FnChoice, ReChoice]


def select_fn(rules: Sequence[FnRule], ctx: PredicateContext) -> Election:
    """Select the first function-based rule whose predicate holds."""
    for rule in rules:
        if rule.predicate(ctx):
            return FnChoice(rule)
    return NOT_SELECTED


def _elect(
    policy: EPolicy,
    rules: Sequence[RegexpRule],
    s: str,
    start: int,
    mode: EScoreMode,
) -> Election:
    longest = policy is EPolicy.LONGEST
    best: ReChoice | None = None
    for rule in rules:
        split = score(policy, rule.pattern, s, start, mode)
        if isinstance(split.score, NoMatch):
            continue
        if best is None:
            best = ReChoice(rule, split)
        elif longest and split.end > best.split.end:
            best = ReChoice(rule, split)
        elif not longest and split.end < best.split.end:
            best = ReChoice(rule, split)
    return NOT_SELECTED if best is None else best


def elect_longest(
    rules: Sequence[RegexpRule],
    s: str,
    start: int = 0,
    mode: EScoreMode = EScoreMode.FAST,
) -> Election:
    """Elect the rule with the longest match on ``s[start:]``.

    On ties the earliest rule wins.
    """
    return _elect(EPolicy.LONGEST, rules, s, start, mode)


def elect_shortest(
    rules: Sequence[RegexpRule],
    s: str,
    start: int = 0,
    mode: EScoreMode = EScoreMode.FAST,
) -> Election:
    """Elect the rule with the shortest match on ``s[start:]``.

    On ties the earliest rule wins.
    """
    return _elect(EPolicy.SHORTEST, rules, s, start, mode)


def generalizing_elector(
    policy: EPolicy,
    re_rules: Sequence[RegexpRule],
    fn_rules: Sequence[FnRule],
    ctx: PredicateContext,
    mode: EScoreMode = EScoreMode.FAST,
) -> Election:
    """Select a function-based rule if any holds, else elect a regexp rule.

    Regexp rules are scored on ``ctx.text[ctx.offset:]`` with `policy`.
    """
    election = select_fn(fn_rules, ctx)
    if not isinstance(election, NotSelected):
        return election
    return _elect(policy, re_rules, ctx.text, ctx.offset, mode)
