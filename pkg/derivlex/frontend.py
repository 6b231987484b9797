"""Lexer specification files.

A specification (conventionally a ``.vl`` file) is made of four
sections::

    { optional header text, ignored }

    %token ID Number PLUS Eof          (* declared token kinds *)
    %eof Eof                           (* kind ending a run *)

    let ident = ['a'-'z']+             (* named regexps *)

    rule minlexer = parse              (* lexers *)
      | '\n'  { sequence [new_line; minlexer] }
      | ident { ret_l ID }
      | '+'   { ret PLUS }
      | eof   { ret Eof }
      | _     { raise_l "unknown token :" }

    { optional trailer text, ignored }

Comments ``(* ... *)`` nest.  Lexers joined by ``and`` form a recursion
group; ``then`` (or a new ``rule``) starts a new group.  The leading
``|`` of a rule is optional.  A lexer using ``shortest`` instead of
``parse`` selects the shortest match.

Regexps use the following constructs, from the loosest to the
tightest binding:

==================  ==================================================
``re1 | re2``       alternation
``re1 - re2``       difference (left associative)
``re1 re2``         concatenation
``re*`` ``re+``     repetition, one or more, option
``re?``
``'c'``             character constant (escapes ``\\n \\t \\\\ \\' \\"
                    \\xNN``)
``"str"``           string constant
``_``               any character
``[s ...]``         characters or ranges ``'c1'-'c2'``
``[^s ...]``        any character not in the set
``(re)``            grouping
``name``            named regexp defined earlier with ``let``
==================  ==================================================

Besides regexps, a rule pattern may be ``eof`` (or ``EOF``) or a
predicate ``$(eof)``, ``$(always)``, ``$(starts_with "lit")``.
"""

from __future__ import annotations

import re
import bisect
import logging
from typing import Union, NoReturn
from dataclasses import field, dataclass

from .error import SpecCompileError, SpecSyntaxError
from .engine import (
    ACTION_KEYWORDS,
    LexerTable,
    ActionProgram,
    CompiledLexer,
    check_action,
    parse_action,
)
from .regexp import EPSILON, WILDCARD, Sym, Range, Regexp, as_symbol
from ._utils import quote_string, unquote_string
from .scoring import EPolicy
from .simplify import (
    alt_list,
    cat_list,
    simp_alt,
    simp_cat,
    simp_diff,
    simp_star,
)
from .selection import (
    Eof,
    FnRule,
    Predicate,
    RegexpRule,
    parse_predicate,
)
from ._typing import PathType

__all__ = [
    "SChar",
    "SString",
    "SAny",
    "SSet",
    "SAlt",
    "SCat",
    "SDiff",
    "SStar",
    "SPlus",
    "SOpt",
    "SRef",
    "SurfaceRegexp",
    "FnPattern",
    "Pattern",
    "RegexpDef",
    "RuleDef",
    "LexerDef",
    "SpecFile",
    "parse_spec",
    "load_spec",
    "desugar",
    "compile_spec",
    "render_surface",
    "render_spec",
]

_log = logging.getLogger(__name__)

KEYWORDS = frozenset(
    ["rule", "parse", "shortest", "and", "then", "let", "eof", "EOF"]
)


# --- surface syntax --------------------------------------------------------
@dataclass(frozen=True)
class SChar:
    """Character constant."""

    code: int


@dataclass(frozen=True)
class SString:
    """String constant."""

    text: str


@dataclass(frozen=True)
class SAny:
    """Wildcard ``_``."""


@dataclass(frozen=True)
class SSet:
    """Character set; items are ``(c, None)`` or ``(lo, hi)`` ranges."""

    items: tuple[tuple[int, int | None], ...]
    negated: bool = False


@dataclass(frozen=True)
class SAlt:
    """Alternation ``e1 | e2``."""

    e1: SurfaceRegexp
    e2: SurfaceRegexp


@dataclass(frozen=True)
class SCat:
    """Concatenation ``e1 e2``."""

    e1: SurfaceRegexp
    e2: SurfaceRegexp


@dataclass(frozen=True)
class SDiff:
    """Difference ``e1 - e2``."""

    e1: SurfaceRegexp
    e2: SurfaceRegexp


@dataclass(frozen=True)
class SStar:
    """Repetition ``e*``."""

    e: SurfaceRegexp


@dataclass(frozen=True)
class SPlus:
    """One or more ``e+``."""

    e: SurfaceRegexp


@dataclass(frozen=True)
class SOpt:
    """Option ``e?``."""

    e: SurfaceRegexp


@dataclass(frozen=True)
class SRef:
    """Reference to a named regexp."""

    name: str


SurfaceRegexp = Union[
    SChar, SString, SAny, SSet, SAlt, SCat, SDiff, SStar, SPlus, SOpt, SRef
]


@dataclass(frozen=True)
class FnPattern:
    """Function-based pattern (``eof`` or ``$(...)``)."""

    predicate: Predicate


Pattern = Union[SurfaceRegexp, FnPattern]


@dataclass(frozen=True)
class RegexpDef:
    """A ``let`` definition."""

    name: str
    regexp: SurfaceRegexp
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RuleDef:
    """A rule of a lexer: a pattern and its action."""

    pattern: Pattern
    action: ActionProgram
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LexerDef:
    """A lexer block.

    `joined` is the keyword introducing the block: ``rule``, ``and``
    (same recursion group as the previous lexer) or ``then``.
    """

    name: str
    policy: EPolicy
    rules: tuple[RuleDef, ...]
    joined: str = "rule"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SpecFile:
    """Parsed lexer specification."""

    tokens: tuple[str, ...]
    eof: str | None
    definitions: tuple[RegexpDef, ...]
    lexers: tuple[LexerDef, ...]
    header: str | None = field(default=None, compare=False)
    trailer: str | None = field(default=None, compare=False)


# --- scanner ---------------------------------------------------------------
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
    | (?P<comment>\(\*)
    | (?P<block>\{)
    | (?P<pred>\$\()
    | (?P<directive>%[A-Za-z_]+)
    | (?P<char>'(?:\\x[0-9a-fA-F]{2}|\\.|[^'\\\n])')
    | (?P<string>"(?:\\.|[^"\\])*")
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<int>[0-9]+)
    | (?P<punct>[=|\-*+?()\[\]^])
    """,
    re.VERBOSE,
)

_STRING_RE = re.compile(r'"(?:\\.|[^"\\])*"')


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str
    value: str
    line: int
    column: int


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.line_starts = [0]
        self.line_starts.extend(
            mobj.end() for mobj in re.finditer("\n", text)
        )

    def location(self, pos: int) -> tuple[int, int]:
        index = bisect.bisect_right(self.line_starts, pos) - 1
        return index + 1, pos - self.line_starts[index] + 1

    def error(self, message: str, pos: int) -> NoReturn:
        raise SpecSyntaxError(message, *self.location(pos))

    def _skip_comment(self, pos: int) -> int:
        start = pos
        depth = 0
        text = self.text
        while pos < len(text):
            if text.startswith("(*", pos):
                depth += 1
                pos += 2
            elif text.startswith("*)", pos):
                depth -= 1
                pos += 2
                if depth == 0:
                    return pos
            else:
                pos += 1
        self.error("unterminated comment", start)

    def _balanced(self, pos: int, opening: str, closing: str) -> int:
        # `pos` follows the opening delimiter; returns the closing offset
        start = pos - 1
        depth = 1
        text = self.text
        while pos < len(text):
            ch = text[pos]
            if ch == '"':
                mobj = _STRING_RE.match(text, pos)
                if mobj is None:
                    self.error("unterminated string literal", pos)
                pos = mobj.end()
                continue
            if ch == opening:
                depth += 1
            elif ch == closing:
                depth -= 1
                if depth == 0:
                    return pos
            pos += 1
        self.error(f"unbalanced {opening!r}", start)

    def tokens(self) -> list[_Token]:
        result = []
        text = self.text
        pos = 0
        while pos < len(text):
            mobj = _TOKEN_RE.match(text, pos)
            if mobj is None:
                self.error(f"unexpected character {text[pos]!r}", pos)
            kind = mobj.lastgroup
            line, column = self.location(pos)
            if kind == "ws":
                pos = mobj.end()
            elif kind == "comment":
                pos = self._skip_comment(pos)
            elif kind in ("block", "pred"):
                begin = mobj.end()
                if kind == "block":
                    end = self._balanced(begin, "{", "}")
                else:
                    end = self._balanced(begin, "(", ")")
                # blocks report the location of their content
                line, column = self.location(begin)
                result.append(_Token(kind, text[begin:end], line, column))
                pos = end + 1
            else:
                result.append(_Token(kind, mobj.group(), line, column))
                pos = mobj.end()
        end_line, end_column = self.location(len(text))
        result.append(_Token("end", "", end_line, end_column))
        return result


# --- parser ----------------------------------------------------------------
class _Parser:
    def __init__(self, text: str):
        self.tokens = _Scanner(text).tokens()
        self.index = 0

    # helpers
    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        if token.kind != "end":
            self.index += 1
        return token

    def error(self, message: str, token: _Token | None = None) -> NoReturn:
        token = self.peek() if token is None else token
        raise SpecSyntaxError(message, token.line, token.column)

    def describe(self, token: _Token) -> str:
        if token.kind == "end":
            return "end of file"
        if token.kind == "block":
            return "'{...}'"
        return repr(token.value)

    def is_punct(self, value: str, token: _Token | None = None) -> bool:
        token = self.peek() if token is None else token
        return token.kind == "punct" and token.value == value

    def is_keyword(self, value: str, token: _Token | None = None) -> bool:
        token = self.peek() if token is None else token
        return token.kind == "ident" and token.value == value

    def expect_punct(self, value: str) -> _Token:
        token = self.peek()
        if not self.is_punct(value, token):
            self.error(f"expected {value!r}, found {self.describe(token)}")
        return self.advance()

    def expect_name(self, what: str) -> _Token:
        token = self.peek()
        if token.kind != "ident" or token.value in KEYWORDS:
            self.error(f"expected {what}, found {self.describe(token)}")
        return self.advance()

    # literals
    def char_code(self, token: _Token) -> int:
        try:
            value = unquote_string(token.value)
            if len(value) != 1:
                raise ValueError(f"invalid character constant {token.value}")
            return as_symbol(value)
        except ValueError as exc:
            self.error(str(exc), token)

    def string_value(self, token: _Token) -> str:
        try:
            value = unquote_string(token.value)
            for ch in value:
                as_symbol(ch)
        except ValueError as exc:
            self.error(str(exc), token)
        return value

    # regexps
    def starts_atom(self, token: _Token) -> bool:
        if token.kind in ("char", "string"):
            return True
        if token.kind == "punct":
            return token.value in ("[", "(")
        return token.kind == "ident" and token.value not in KEYWORDS

    def regexp(self) -> SurfaceRegexp:
        result = self.difference()
        while self.is_punct("|"):
            self.advance()
            result = SAlt(result, self.difference())
        return result

    def difference(self) -> SurfaceRegexp:
        result = self.concatenation()
        while self.is_punct("-"):
            self.advance()
            result = SDiff(result, self.concatenation())
        return result

    def concatenation(self) -> SurfaceRegexp:
        result = self.postfix()
        while self.starts_atom(self.peek()):
            result = SCat(result, self.postfix())
        return result

    def postfix(self) -> SurfaceRegexp:
        result = self.atom()
        while True:
            if self.is_punct("*"):
                result = SStar(result)
            elif self.is_punct("+"):
                result = SPlus(result)
            elif self.is_punct("?"):
                result = SOpt(result)
            else:
                return result
            self.advance()

    def atom(self) -> SurfaceRegexp:
        token = self.peek()
        if token.kind == "char":
            self.advance()
            return SChar(self.char_code(token))
        if token.kind == "string":
            self.advance()
            return SString(self.string_value(token))
        if token.kind == "ident" and token.value == "_":
            self.advance()
            return SAny()
        if self.is_punct("("):
            self.advance()
            result = self.regexp()
            self.expect_punct(")")
            return result
        if self.is_punct("["):
            return self.charset()
        if token.kind == "ident" and token.value not in KEYWORDS:
            self.advance()
            return SRef(token.value)
        self.error(f"regexp expected, found {self.describe(token)}")

    def charset(self) -> SSet:
        self.expect_punct("[")
        negated = False
        if self.is_punct("^"):
            self.advance()
            negated = True
        items: list[tuple[int, int | None]] = []
        while not self.is_punct("]"):
            token = self.peek()
            if token.kind != "char":
                self.error(
                    f"character constant expected in set, "
                    f"found {self.describe(token)}"
                )
            self.advance()
            lo = self.char_code(token)
            hi = None
            if self.is_punct("-"):
                self.advance()
                token = self.peek()
                if token.kind != "char":
                    self.error(
                        f"range bound expected, found {self.describe(token)}"
                    )
                self.advance()
                hi = self.char_code(token)
            items.append((lo, hi))
        self.advance()
        return SSet(tuple(items), negated)

    # rules and lexers
    def starts_pattern(self, token: _Token) -> bool:
        if token.kind == "pred":
            return True
        if token.kind == "ident" and token.value in ("eof", "EOF"):
            return True
        return self.starts_atom(token)

    def pattern(self) -> Pattern:
        token = self.peek()
        if token.kind == "ident" and token.value in ("eof", "EOF"):
            self.advance()
            return FnPattern(Eof())
        if token.kind == "pred":
            self.advance()
            try:
                return FnPattern(parse_predicate(token.value))
            except ValueError as exc:
                self.error(str(exc), token)
        return self.regexp()

    def rule(self) -> RuleDef:
        start = self.peek()
        pattern = self.pattern()
        token = self.peek()
        if token.kind != "block":
            self.error(
                f"semantic action expected, found {self.describe(token)}"
            )
        self.advance()
        action = parse_action(token.value, token.line, token.column)
        return RuleDef(pattern, action, start.line, start.column)

    def lexer(self, joined: str) -> LexerDef:
        name = self.expect_name("lexer name")
        if name.value in ACTION_KEYWORDS:
            raise SpecCompileError(
                f"{name.value!r} is reserved and cannot name a lexer",
                name.line,
                name.column,
            )
        self.expect_punct("=")
        token = self.advance()
        if self.is_keyword("parse", token):
            policy = EPolicy.LONGEST
        elif self.is_keyword("shortest", token):
            policy = EPolicy.SHORTEST
        else:
            self.error(
                f"'parse' or 'shortest' expected, "
                f"found {self.describe(token)}",
                token,
            )
        rules = []
        while True:
            if self.is_punct("|"):
                self.advance()
                rules.append(self.rule())
            elif self.starts_pattern(self.peek()):
                rules.append(self.rule())
            else:
                break
        if not rules:
            self.error(f"lexer {name.value!r} has no rules")
        return LexerDef(name.value, policy, tuple(rules), joined, name.line)

    def kind_names(self, directive: _Token) -> list[_Token]:
        names = []
        while True:
            token = self.peek()
            if token.kind not in ("ident", "int"):
                break
            if token.line != directive.line:
                break
            names.append(self.advance())
        return names

    def spec(self) -> SpecFile:
        header = None
        if self.peek().kind == "block":
            header = self.advance().value

        tokens: list[str] = []
        eof: _Token | None = None
        definitions: list[RegexpDef] = []
        while True:
            token = self.peek()
            if token.kind == "directive":
                self.advance()
                names = self.kind_names(token)
                if token.value == "%token":
                    for item in names:
                        if item.value in tokens:
                            raise SpecCompileError(
                                f"duplicate token kind {item.value!r}",
                                item.line,
                                item.column,
                            )
                        tokens.append(item.value)
                elif token.value == "%eof":
                    if len(names) != 1:
                        self.error("'%eof' takes exactly one token kind")
                    if eof is not None:
                        self.error("duplicate '%eof' declaration", token)
                    eof = names[0]
                else:
                    self.error(f"unknown directive {token.value!r}", token)
            elif self.is_keyword("let"):
                self.advance()
                name = self.expect_name("regexp name")
                if any(item.name == name.value for item in definitions):
                    raise SpecCompileError(
                        f"duplicate regexp name {name.value!r}",
                        name.line,
                        name.column,
                    )
                self.expect_punct("=")
                definitions.append(
                    RegexpDef(name.value, self.regexp(), name.line)
                )
            else:
                break

        lexers: list[LexerDef] = []
        if not self.is_keyword("rule"):
            self.error(
                f"'rule' expected, found {self.describe(self.peek())}"
            )
        while True:
            token = self.peek()
            if token.kind != "ident" or token.value not in (
                "rule",
                "and",
                "then",
            ):
                break
            self.advance()
            lexer = self.lexer(token.value)
            if any(item.name == lexer.name for item in lexers):
                raise SpecCompileError(
                    f"duplicate lexer name {lexer.name!r}", lexer.line
                )
            lexers.append(lexer)

        trailer = None
        if self.peek().kind == "block":
            trailer = self.advance().value
        token = self.peek()
        if token.kind != "end":
            self.error(f"unexpected {self.describe(token)}")

        if eof is not None and eof.value not in tokens:
            raise SpecCompileError(
                f"'%eof' names undeclared token kind {eof.value!r}",
                eof.line,
                eof.column,
            )

        return SpecFile(
            tuple(tokens),
            None if eof is None else eof.value,
            tuple(definitions),
            tuple(lexers),
            header,
            trailer,
        )


def parse_spec(text: str) -> SpecFile:
    """Parse the text of a lexer specification.

    Raise :exc:`derivlex.error.SpecError` with the line and (1-based)
    column of the problem.
    """
    return _Parser(text).spec()


def load_spec(path: PathType) -> SpecFile:
    """Read and parse the lexer specification stored in `path`."""
    with open(path, encoding="utf-8") as fd:
        return parse_spec(fd.read())


# --- desugaring and compilation --------------------------------------------
def _set_item(lo: int, hi: int | None) -> Regexp:
    return Sym(lo) if hi is None else Range(lo, hi)


def desugar(sr: SurfaceRegexp, env: dict[str, Regexp]) -> Regexp:
    """Translate a surface regexp into a core regexp.

    Named references are looked up (and inlined) from `env`; composite
    nodes are built with the smart constructors.
    """
    match sr:
        case SChar(code):
            return Sym(code)
        case SString(text):
            return cat_list(Sym(ord(ch)) for ch in text)
        case SAny():
            return WILDCARD
        case SSet(items, negated):
            union = alt_list(_set_item(lo, hi) for lo, hi in items)
            return simp_diff(WILDCARD, union) if negated else union
        case SAlt(e1, e2):
            return simp_alt(desugar(e1, env), desugar(e2, env))
        case SCat(e1, e2):
            return simp_cat(desugar(e1, env), desugar(e2, env))
        case SDiff(e1, e2):
            return simp_diff(desugar(e1, env), desugar(e2, env))
        case SStar(e):
            return simp_star(desugar(e, env))
        case SPlus(e):
            body = desugar(e, env)
            return simp_cat(body, simp_star(body))
        case SOpt(e):
            return simp_alt(desugar(e, env), EPSILON)
        case SRef(name):
            try:
                return env[name]
            except KeyError:
                raise SpecCompileError(
                    f"unbound regexp name {name!r}"
                ) from None
    raise TypeError(f"unexpected surface regexp: {sr!r}")


def _located(exc: SpecCompileError, line: int, column: int | None = None):
    if exc.line is not None:
        return exc
    return SpecCompileError(exc.message, line, column)


def compile_spec(sf: SpecFile, entry: str | None = None) -> LexerTable:
    """Compile a parsed specification into a table of lexers.

    The rules of each lexer are partitioned, in order, into regexp rules
    and function rules; both refer to their action by the position of
    the rule in the lexer block.  `entry` defaults to the first lexer.
    """
    env: dict[str, Regexp] = {}
    for definition in sf.definitions:
        try:
            env[definition.name] = desugar(definition.regexp, env)
        except SpecCompileError as exc:
            raise _located(exc, definition.line) from None

    lexers: dict[str, CompiledLexer] = {}
    group = -1
    for lexdef in sf.lexers:
        if lexdef.joined != "and" or group < 0:
            group += 1
        re_rules = []
        fn_rules = []
        for index, rule in enumerate(lexdef.rules):
            if isinstance(rule.pattern, FnPattern):
                fn_rules.append(FnRule(rule.pattern.predicate, index))
                continue
            try:
                pattern = desugar(rule.pattern, env)
            except SpecCompileError as exc:
                raise _located(exc, rule.line, rule.column) from None
            re_rules.append(RegexpRule(pattern, index))
        lexers[lexdef.name] = CompiledLexer(
            lexdef.name,
            lexdef.policy,
            tuple(re_rules),
            tuple(fn_rules),
            tuple(rule.action for rule in lexdef.rules),
            group,
        )

    if entry is not None and entry not in lexers:
        raise SpecCompileError(f"unknown entry lexer {entry!r}")
    table = LexerTable(lexers, sf.tokens, sf.eof, entry)

    for lexdef in sf.lexers:
        for rule in lexdef.rules:
            try:
                check_action(rule.action, lexers[lexdef.name], table)
            except ValueError as exc:
                raise SpecCompileError(
                    f"{lexdef.name}: {exc}", rule.line, rule.column
                ) from None

    _log.info(
        "compiled %d lexer(s) in %d group(s)", len(lexers), group + 1
    )
    return table


# --- rendering -------------------------------------------------------------
_ALT, _DIFF, _CAT, _POSTFIX = range(4)


def _render_char(code: int) -> str:
    return quote_string(chr(code), "'")


def render_surface(sr: SurfaceRegexp, level: int = _ALT) -> str:
    """Render a surface regexp in `.vl` syntax."""

    def wrap(text: str, own: int) -> str:
        return f"({text})" if level > own else text

    match sr:
        case SChar(code):
            return _render_char(code)
        case SString(text):
            return quote_string(text)
        case SAny():
            return "_"
        case SSet(items, negated):
            parts = [
                _render_char(lo)
                if hi is None
                else f"{_render_char(lo)}-{_render_char(hi)}"
                for lo, hi in items
            ]
            return "[" + ("^" if negated else "") + " ".join(parts) + "]"
        case SAlt(e1, e2):
            left, right = render_surface(e1, _ALT), render_surface(e2, _DIFF)
            return wrap(f"{left} | {right}", _ALT)
        case SDiff(e1, e2):
            left, right = render_surface(e1, _DIFF), render_surface(e2, _CAT)
            return wrap(f"{left} - {right}", _DIFF)
        case SCat(e1, e2):
            left = render_surface(e1, _CAT)
            right = render_surface(e2, _POSTFIX)
            return wrap(f"{left} {right}", _CAT)
        case SStar(e):
            return render_surface(e, _POSTFIX) + "*"
        case SPlus(e):
            return render_surface(e, _POSTFIX) + "+"
        case SOpt(e):
            return render_surface(e, _POSTFIX) + "?"
        case SRef(name):
            return name
    raise TypeError(f"unexpected surface regexp: {sr!r}")


def _render_pattern(pattern: Pattern) -> str:
    if isinstance(pattern, FnPattern):
        if isinstance(pattern.predicate, Eof):
            return "eof"
        return f"$({pattern.predicate})"
    return render_surface(pattern)


def render_spec(sf: SpecFile) -> str:
    """Pretty-print a specification in `.vl` syntax."""
    lines = []
    if sf.header is not None:
        lines.extend(["{" + sf.header + "}", ""])
    if sf.tokens:
        lines.append("%token " + " ".join(sf.tokens))
    if sf.eof is not None:
        lines.append(f"%eof {sf.eof}")
    if sf.tokens or sf.eof is not None:
        lines.append("")
    for definition in sf.definitions:
        lines.append(
            f"let {definition.name} = {render_surface(definition.regexp)}"
        )
    if sf.definitions:
        lines.append("")
    for lexdef in sf.lexers:
        keyword = "parse" if lexdef.policy is EPolicy.LONGEST else "shortest"
        lines.append(f"{lexdef.joined} {lexdef.name} = {keyword}")
        for rule in lexdef.rules:
            lines.append(
                f"  | {_render_pattern(rule.pattern)} {{ {rule.action} }}"
            )
        lines.append("")
    if sf.trailer is not None:
        lines.append("{" + sf.trailer + "}")
    return "\n".join(lines).rstrip("\n") + "\n"
