"""Fuel-bounded lexing engine.

A lexer step elects a rule on the remaining input, updates the lexing
buffer and runs the semantic action of the elected rule.  Semantic
actions are programs of a small closed language::

    ret KIND                  return a token without payload
    ret_l KIND                return a token carrying the lexeme
    raise "message"           lexing error
    raise_l "message"         lexing error reporting the lexeme
    LEXER                     continue with another lexer
    sequence [m1; ...; a]     run modifiers, then a producing action

where the modifiers are::

    new_line                  move the end position to the next line
    set KEY "template"        store a string ({lexeme} is expanded)
    append KEY                append the lexeme to a stored string
    incr KEY                  increment a stored counter

Each step receives a *fuel* value: it fails with :class:`NoFuel` when
the fuel is zero, and a call to a lexer of the same recursion group
is performed with one unit of fuel less, so that every step terminates.
Calls to lexers of earlier groups keep the same fuel.
"""

from __future__ import annotations

import os
import re
import logging
from typing import Union, NoReturn
from dataclasses import field, dataclass
from collections.abc import Mapping

from .error import SpecSyntaxError
from .lexbuf import Lexbuf, Position, make_lexbuf, update_lexbuf
from ._utils import quote_string, unquote_string
from .scoring import EPolicy, EScoreMode
from .selection import (
    FnRule,
    FnChoice,
    ReChoice,
    RegexpRule,
    PredicateContext,
    generalizing_elector,
)

__all__ = [
    "DEFAULT_FUEL",
    "get_default_fuel",
    "Storage",
    "Token",
    "Ret",
    "RetL",
    "Raise",
    "RaiseL",
    "NewLine",
    "SetVar",
    "AppendLexeme",
    "Incr",
    "Call",
    "Seq",
    "ActionProgram",
    "ACTION_KEYWORDS",
    "parse_action",
    "validate_action",
    "called_lexers",
    "referenced_kinds",
    "Success",
    "NoFuel",
    "NoRuleMatched",
    "UserError",
    "LexOutcome",
    "CompiledLexer",
    "check_action",
    "LexerTable",
    "exec_action",
    "run_step",
    "TokenEntry",
    "TokenizeResult",
    "tokenize_all",
]

_log = logging.getLogger(__name__)

DEFAULT_FUEL = 1_000_000
FUEL_ENV_VAR = "DERIVLEX_FUEL"

Storage = Mapping[str, Union[str, int]]


def get_default_fuel() -> int:
    """Return the default starting fuel.

    The ``DERIVLEX_FUEL`` environment variable, when set, overrides
    :data:`DEFAULT_FUEL`.
    """
    value = os.environ.get(FUEL_ENV_VAR)
    if value is None or not value.strip():
        return DEFAULT_FUEL
    try:
        fuel = int(value)
    except ValueError:
        raise ValueError(f"{FUEL_ENV_VAR}: invalid fuel {value!r}") from None
    if fuel < 0:
        raise ValueError(f"{FUEL_ENV_VAR}: negative fuel {value!r}")
    return fuel


@dataclass(frozen=True, slots=True)
class Token:
    """A token `kind` with an optional `payload` (the lexeme)."""

    kind: str
    payload: str | None = None

    def __str__(self) -> str:
        if self.payload is None:
            return self.kind
        return f"{self.kind}({self.payload!r})"


# --- actions ---------------------------------------------------------------
@dataclass(frozen=True, slots=True)
class Ret:
    """Return a token of `kind` without payload."""

    kind: str

    def __str__(self) -> str:
        return f"ret {self.kind}"


@dataclass(frozen=True, slots=True)
class RetL:
    """Return a token of `kind` carrying the lexeme."""

    kind: str

    def __str__(self) -> str:
        return f"ret_l {self.kind}"


@dataclass(frozen=True, slots=True)
class Raise:
    """Stop lexing with a user error."""

    message: str

    def __str__(self) -> str:
        return f"raise {quote_string(self.message)}"


@dataclass(frozen=True, slots=True)
class RaiseL:
    """Stop lexing with a user error reporting the lexeme."""

    message: str

    def __str__(self) -> str:
        return f"raise_l {quote_string(self.message)}"


@dataclass(frozen=True, slots=True)
class NewLine:
    """Move the end position to the start of the next line."""

    def __str__(self) -> str:
        return "new_line"


@dataclass(frozen=True, slots=True)
class SetVar:
    """Store `template` in `key`, with `{lexeme}` expanded."""

    key: str
    template: str

    def __str__(self) -> str:
        return f"set {self.key} {quote_string(self.template)}"


@dataclass(frozen=True, slots=True)
class AppendLexeme:
    """Append the lexeme to the string stored in `key`."""

    key: str

    def __str__(self) -> str:
        return f"append {self.key}"


@dataclass(frozen=True, slots=True)
class Incr:
    """Increment the counter stored in `key`."""

    key: str

    def __str__(self) -> str:
        return f"incr {self.key}"


@dataclass(frozen=True, slots=True)
class Call:
    """Run the `lexer` named on the remaining input."""

    lexer: str

    def __str__(self) -> str:
        return self.lexer


@dataclass(frozen=True, slots=True)
class Seq:
    """Run state modifiers, then the final producing action."""

    items: tuple[ActionProgram, ...]

    def __str__(self) -> str:
        return "sequence [" + "; ".join(map(str, self.items)) + "]"


Modifier = Union[NewLine, SetVar, AppendLexeme, Incr]
Producer = Union[Ret, RetL, Raise, RaiseL, Call]
ActionProgram = Union[Modifier, Producer, Seq]

_MODIFIERS = (NewLine, SetVar, AppendLexeme, Incr)
_PRODUCERS = (Ret, RetL, Raise, RaiseL, Call)
ACTION_KEYWORDS = frozenset(
    [
        "sequence",
        "ret",
        "ret_l",
        "raise",
        "raise_l",
        "new_line",
        "set",
        "append",
        "incr",
    ]
)

_ACTION_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    | (?P<int>[0-9]+)
    | (?P<string>"(?:[^"\\]|\\.)*")
    | (?P<punct>[\[\];])
    """,
    re.VERBOSE,
)


class _ActionParser:
    def __init__(self, text: str, line: int | None, column: int | None):
        self.tokens: list[tuple[str, str, int]] = []
        self.index = 0
        self.text = text
        self.line = line
        self.column = column
        pos = 0
        while pos < len(text):
            mobj = _ACTION_TOKEN_RE.match(text, pos)
            if mobj is None:
                self.error(f"unexpected character {text[pos]!r}", pos)
            if mobj.lastgroup != "ws":
                self.tokens.append((mobj.lastgroup, mobj.group(), pos))
            pos = mobj.end()

    def error(self, message: str, pos: int | None = None) -> NoReturn:
        pos = len(self.text) if pos is None else pos
        line, column = self.line, self.column
        head = self.text[:pos]
        if line is not None and "\n" in head:
            line += head.count("\n")
            column = pos - head.rfind("\n")
        elif column is not None:
            column += pos
        raise SpecSyntaxError(message, line, column)

    def peek(self) -> tuple[str, str, int] | None:
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return None

    def next(self, expected: str) -> tuple[str, str, int]:
        token = self.peek()
        if token is None:
            self.error(f"unexpected end of action, expected {expected}")
        self.index += 1
        return token

    def kind(self) -> str:
        tag, value, pos = self.next("token kind")
        if tag not in ("ident", "int"):
            self.error(f"invalid token kind {value!r}", pos)
        return value

    def key(self) -> str:
        tag, value, pos = self.next("storage key")
        if tag != "ident":
            self.error(f"invalid storage key {value!r}", pos)
        return value

    def string(self) -> str:
        tag, value, pos = self.next("string literal")
        if tag != "string":
            self.error(f"string literal expected, found {value!r}", pos)
        try:
            return unquote_string(value)
        except ValueError as exc:
            self.error(str(exc), pos)

    def action(self) -> ActionProgram:
        tag, value, pos = self.next("action")
        if tag != "ident":
            self.error(f"action expected, found {value!r}", pos)
        match value:
            case "ret":
                return Ret(self.kind())
            case "ret_l":
                return RetL(self.kind())
            case "raise":
                return Raise(self.string())
            case "raise_l":
                return RaiseL(self.string())
            case "new_line":
                return NewLine()
            case "set":
                key = self.key()
                return SetVar(key, self.string())
            case "append":
                return AppendLexeme(self.key())
            case "incr":
                return Incr(self.key())
            case "sequence":
                return self.sequence()
        following = self.peek()
        if following is not None and following[0] != "punct":
            self.error(f"unknown action keyword {value!r}", pos)
        return Call(value)

    def sequence(self) -> Seq:
        tag, value, pos = self.next("'['")
        if value != "[":
            self.error(f"'[' expected, found {value!r}", pos)
        items = [self.action()]
        while True:
            tag, value, pos = self.next("';' or ']'")
            if value == "]":
                break
            if value != ";":
                self.error(f"';' or ']' expected, found {value!r}", pos)
            items.append(self.action())
        return Seq(tuple(items))

    def parse(self) -> ActionProgram:
        if not self.tokens:
            self.error("empty action", 0)
        result = self.action()
        token = self.peek()
        if token is not None:
            self.error(f"unexpected {token[1]!r} after action", token[2])
        return result


def parse_action(
    text: str, line: int | None = None, column: int | None = None
) -> ActionProgram:
    """Parse the text of a semantic action.

    `line` and `column` locate the text in its source and are only used
    for diagnostics (:exc:`derivlex.error.SpecSyntaxError`).
    """
    return _ActionParser(text, line, column).parse()


def validate_action(prog: ActionProgram) -> None:
    """Check that `prog` always ends with a producing action.

    Raise :exc:`ValueError` otherwise.
    """
    if isinstance(prog, _PRODUCERS):
        return
    if isinstance(prog, _MODIFIERS):
        raise ValueError(f"{prog} must be followed by a producing action")
    *prefix, last = prog.items
    for item in prefix:
        if not isinstance(item, _MODIFIERS):
            raise ValueError(
                f"only new_line, set, append and incr may precede the last "
                f"action of a sequence, found {item}"
            )
    if not isinstance(last, _PRODUCERS):
        raise ValueError(f"sequence must end with a producing action: {prog}")


def called_lexers(prog: ActionProgram) -> list[str]:
    """Return the names of the lexers called by `prog`."""
    items = prog.items if isinstance(prog, Seq) else (prog,)
    return [item.lexer for item in items if isinstance(item, Call)]


def referenced_kinds(prog: ActionProgram) -> list[str]:
    """Return the token kinds `prog` may return."""
    items = prog.items if isinstance(prog, Seq) else (prog,)
    return [item.kind for item in items if isinstance(item, (Ret, RetL))]


# --- outcomes --------------------------------------------------------------
@dataclass(frozen=True, slots=True)
class Success:
    """A token has been produced."""

    token: Token
    lexbuf: Lexbuf
    storage: Storage = field(default_factory=dict)

    ok = True

    @property
    def kind(self) -> str:
        """Name of the outcome variant."""
        return "Success"

    @property
    def position(self) -> Position:
        """Start position of the token."""
        return self.lexbuf.start_pos

    @property
    def message(self) -> str:
        """Empty: a success carries no message."""
        return ""


@dataclass(frozen=True, slots=True)
class NoFuel:
    """The fuel is exhausted."""

    lexbuf: Lexbuf

    ok = False

    @property
    def kind(self) -> str:
        """Name of the outcome variant."""
        return "NoFuel"

    @property
    def position(self) -> Position:
        """Position where lexing stopped."""
        return self.lexbuf.end_pos

    @property
    def message(self) -> str:
        """Description of the error."""
        return "no fuel left"


@dataclass(frozen=True, slots=True)
class NoRuleMatched:
    """No rule applies to the remaining input."""

    lexbuf: Lexbuf

    ok = False

    @property
    def kind(self) -> str:
        """Name of the outcome variant."""
        return "NoRuleMatched"

    @property
    def position(self) -> Position:
        """Position where lexing stopped."""
        return self.lexbuf.end_pos

    @property
    def message(self) -> str:
        """Description of the error."""
        return "no rule matched"


@dataclass(frozen=True, slots=True)
class UserError:
    """A ``raise`` or ``raise_l`` action has been executed."""

    message: str
    lexeme: str
    position: Position

    ok = False

    @property
    def kind(self) -> str:
        """Name of the outcome variant."""
        return "UserError"


LexOutcome = Union[Success, NoFuel, NoRuleMatched, UserError]


# --- compiled lexers -------------------------------------------------------
@dataclass(frozen=True, slots=True)
class CompiledLexer:
    """A lexer ready to run.

    Rules refer to their action by index into `actions`, the index being
    the position of the rule in the specification.  `group` identifies
    the recursion group of the lexer.
    """

    name: str
    policy: EPolicy
    re_rules: tuple[RegexpRule, ...]
    fn_rules: tuple[FnRule, ...]
    actions: tuple[ActionProgram, ...]
    group: int = 0


@dataclass(frozen=True)
class LexerTable:
    """Compiled lexers of a specification.

    `lexers` preserves the declaration order; `entry` defaults to the
    first declared lexer.  `eof` is the token kind ending a run of
    :func:`tokenize_all`.
    """

    lexers: Mapping[str, CompiledLexer]
    tokens: tuple[str, ...] = ()
    eof: str | None = None
    entry_name: str | None = None

    @property
    def entry(self) -> str:
        """Return the name of the entry lexer."""
        if self.entry_name is not None:
            return self.entry_name
        return next(iter(self.lexers))

    def __getitem__(self, name: str) -> CompiledLexer:
        return self.lexers[name]

    def __contains__(self, name: object) -> bool:
        return name in self.lexers

    def validate(self) -> None:
        """Check the consistency of the table.

        Raise :exc:`ValueError` on undeclared token kinds, dangling
        action references or calls to unknown (or later) lexers.
        """
        if self.eof is not None and self.eof not in self.tokens:
            raise ValueError(f"undeclared end-of-file kind {self.eof!r}")
        if self.entry not in self.lexers:
            raise ValueError(f"unknown entry lexer {self.entry!r}")
        for lexer in self.lexers.values():
            rules: list[RegexpRule | FnRule] = [*lexer.re_rules]
            rules.extend(lexer.fn_rules)
            for rule in rules:
                if not 0 <= rule.action < len(lexer.actions):
                    raise ValueError(
                        f"{lexer.name}: invalid action index {rule.action}"
                    )
            for prog in lexer.actions:
                check_action(prog, lexer, self)


def check_action(
    prog: ActionProgram, caller: CompiledLexer, env: LexerTable
) -> None:
    """Check `prog` as an action of the `caller` lexer of `env`.

    Raise :exc:`ValueError` on failure.
    """
    validate_action(prog)
    for kind in referenced_kinds(prog):
        if kind not in env.tokens:
            raise ValueError(f"undeclared token kind {kind!r}")
    for name in called_lexers(prog):
        if name not in env.lexers:
            raise ValueError(f"call to undefined lexer {name!r}")
        if env.lexers[name].group > caller.group:
            raise ValueError(
                f"call to {name!r} defined after a 'then' boundary"
            )


# --- execution -------------------------------------------------------------
@dataclass(frozen=True, slots=True)
class _TailCall:
    lexer: str
    lexbuf: Lexbuf
    storage: Storage


def _modify(
    item: Modifier, b: Lexbuf, st: Storage
) -> tuple[Lexbuf, Storage]:
    match item:
        case NewLine():
            return b.new_line(), st
        case SetVar(key, template):
            value = template.replace("{lexeme}", b.lexeme)
            return b, {**st, key: value}
        case AppendLexeme(key):
            value = st.get(key, "")
            return b, {**st, key: f"{value}{b.lexeme}"}
        case Incr(key):
            count = st.get(key, 0)
            count = count if isinstance(count, int) else 0
            return b, {**st, key: count + 1}
    raise TypeError(f"unexpected modifier: {item!r}")


def _apply(
    prog: ActionProgram, b: Lexbuf, st: Storage
) -> LexOutcome | _TailCall:
    items = prog.items if isinstance(prog, Seq) else (prog,)
    *prefix, last = items
    for item in prefix:
        b, st = _modify(item, b, st)
    match last:
        case Ret(kind):
            return Success(Token(kind), b, st)
        case RetL(kind):
            return Success(Token(kind, b.lexeme), b, st)
        case Raise(message):
            return UserError(message, "", b.start_pos)
        case RaiseL(message):
            return UserError(message, b.lexeme, b.start_pos)
        case Call(name):
            return _TailCall(name, b, st)
    raise ValueError(f"action does not produce a result: {prog}")


def _callee_fuel(callee: CompiledLexer, fuel: int, caller_group: int) -> int:
    return fuel - 1 if callee.group == caller_group else fuel


def exec_action(
    prog: ActionProgram,
    fuel: int,
    b: Lexbuf,
    st: Storage,
    env: LexerTable,
    caller_group: int,
    mode: EScoreMode = EScoreMode.FAST,
) -> LexOutcome:
    """Run the semantic action `prog` on the updated buffer `b`."""
    result = _apply(prog, b, st)
    if isinstance(result, _TailCall):
        callee = env[result.lexer]
        return run_step(
            callee,
            _callee_fuel(callee, fuel, caller_group),
            result.lexbuf,
            result.storage,
            env,
            mode,
        )
    return result


def run_step(
    lexer: CompiledLexer,
    fuel: int,
    b: Lexbuf,
    st: Storage,
    env: LexerTable,
    mode: EScoreMode = EScoreMode.FAST,
) -> LexOutcome:
    """Run one step of `lexer` on the buffer `b`.

    Calls performed by the semantic actions are always in tail position,
    so they are executed in a loop rather than by recursion.
    """
    while True:
        if fuel == 0:
            return NoFuel(b)
        ctx = PredicateContext(b.text, b.offset, b.end_pos)
        election = generalizing_elector(
            lexer.policy, lexer.re_rules, lexer.fn_rules, ctx, mode
        )
        match election:
            case FnChoice(rule):
                prog = lexer.actions[rule.action]
            case ReChoice(rule, split):
                b = update_lexbuf(b, split.end - split.start)
                prog = lexer.actions[rule.action]
            case _:
                return NoRuleMatched(b)

        result = _apply(prog, b, st)
        if not isinstance(result, _TailCall):
            return result
        callee = env[result.lexer]
        fuel = _callee_fuel(callee, fuel, lexer.group)
        lexer, b, st = callee, result.lexbuf, result.storage


@dataclass(frozen=True, slots=True)
class TokenEntry:
    """A token with its start and end positions."""

    token: Token
    start: Position
    end: Position


@dataclass(frozen=True)
class TokenizeResult:
    """Tokens produced by a run and the outcome that ended it."""

    tokens: list[TokenEntry]
    outcome: LexOutcome

    @property
    def ok(self) -> bool:
        """Return True if the run ended on a token."""
        return self.outcome.ok

    def kinds(self) -> list[str]:
        """Return the kinds of the produced tokens."""
        return [entry.token.kind for entry in self.tokens]


def tokenize_all(
    env: LexerTable,
    text: str,
    fuel: int | None = None,
    storage: Storage | None = None,
    entry: str | None = None,
    mode: EScoreMode = EScoreMode.FAST,
) -> TokenizeResult:
    """Tokenize `text` from the `entry` lexer until end of input.

    The run stops after the end-of-file token of `env`, on the first
    error outcome, or when it cannot progress any more: a second
    consecutive step that consumes nothing ends the run with
    `NoRuleMatched`, whatever its action did to the position or the
    storage.  Every step starts with the full `fuel`.  Without an
    end-of-file token kind, one more step runs on the exhausted input
    so that an `eof` rule can fire; if no rule applies the run ends
    with `NoRuleMatched`.
    """
    if fuel is None:
        fuel = get_default_fuel()
    if entry is None:
        entry = env.entry
    lexer = env[entry]
    b = make_lexbuf(text)
    st: Storage = dict(storage or {})
    tokens: list[TokenEntry] = []
    stalled = 0

    _log.debug(
        "tokenize %d characters from %r (fuel %d)", len(text), entry, fuel
    )

    while True:
        at_end = b.remaining_length == 0
        outcome = run_step(lexer, fuel, b, st, env, mode)
        if not isinstance(outcome, Success):
            break
        is_eof = outcome.token.kind == env.eof
        if at_end and env.eof is not None and not is_eof:
            outcome = NoRuleMatched(b)
            break
        # zero-width steps never progress, whatever they do to storage
        progress = outcome.lexbuf.end_pos.offset != b.end_pos.offset
        stalled = 0 if progress else stalled + 1
        if stalled >= 2:
            outcome = NoRuleMatched(b)
            break
        lexbuf = outcome.lexbuf
        tokens.append(
            TokenEntry(outcome.token, lexbuf.start_pos, lexbuf.end_pos)
        )
        b, st = lexbuf, outcome.storage
        if is_eof or (env.eof is None and at_end):
            break

    _log.debug("%d tokens, terminal outcome %s", len(tokens), outcome.kind)
    return TokenizeResult(tokens, outcome)
