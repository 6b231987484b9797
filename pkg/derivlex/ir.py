"""Serialization of compiled lexer tables.

The IR is a line-oriented text format::

    version 1
    tokens ID Number PLUS Eof
    eof Eof
    lexer minlexer longest 0
    re sym(0a)
    action sequence [new_line; minlexer]
    fn eof
    action ret Eof
    end

The ``version`` line comes first.  ``tokens`` lists the declared token
kinds, the optional ``eof`` and ``entry`` lines name the end-of-file
kind and the entry lexer.  Each lexer block starts with ``lexer NAME
POLICY GROUP`` and lists its rules in specification order: a ``re``
line (canonical regexp rendering) or a ``fn`` line (predicate),
followed by the ``action`` line of the rule.  Empty lines and lines
starting with ``#`` are ignored.
"""

import logging

from .error import IRError, SpecError, IRVersionError
from .engine import LexerTable, CompiledLexer, parse_action
from .regexp import render, parse_rendered
from .scoring import EPolicy
from .selection import FnRule, RegexpRule, parse_predicate
from ._typing import PathType

__all__ = ["IR_VERSION", "save_ir", "load_ir", "write_ir", "read_ir"]

_log = logging.getLogger(__name__)

IR_VERSION = 1


def _dump_lines(table: LexerTable) -> list[str]:
    lines = [f"version {IR_VERSION}", " ".join(["tokens", *table.tokens])]
    if table.eof is not None:
        lines.append(f"eof {table.eof}")
    if table.entry_name is not None:
        lines.append(f"entry {table.entry_name}")
    for lexer in table.lexers.values():
        lines.append(f"lexer {lexer.name} {lexer.policy.value} {lexer.group}")
        rules: dict[int, str] = {}
        for re_rule in lexer.re_rules:
            rules[re_rule.action] = f"re {render(re_rule.pattern)}"
        for fn_rule in lexer.fn_rules:
            rules[fn_rule.action] = f"fn {fn_rule.predicate}"
        for index, action in enumerate(lexer.actions):
            lines.append(rules[index])
            lines.append(f"action {action}")
        lines.append("end")
    return lines


def save_ir(table: LexerTable) -> bytes:
    """Serialize `table` to the IR format."""
    text = "\n".join(_dump_lines(table)) + "\n"
    return text.encode("ascii")


class _IRReader:
    def __init__(self, data: bytes | str):
        if isinstance(data, bytes):
            try:
                data = data.decode("ascii")
            except UnicodeDecodeError as exc:
                raise IRError(f"non ASCII data: {exc}") from None
        self.lines = [
            (lineno, line.strip())
            for lineno, line in enumerate(data.splitlines(), start=1)
            if line.strip() and not line.lstrip().startswith("#")
        ]
        self.index = 0

    def next(self, what: str) -> tuple[int, str, str]:
        if self.index >= len(self.lines):
            last = self.lines[-1][0] if self.lines else None
            raise IRError(f"unexpected end of data, expected {what}", last)
        lineno, line = self.lines[self.index]
        self.index += 1
        keyword, _, rest = line.partition(" ")
        return lineno, keyword, rest.strip()

    def peek_keyword(self) -> str | None:
        if self.index >= len(self.lines):
            return None
        return self.lines[self.index][1].partition(" ")[0]

    def version(self) -> None:
        if not self.lines:
            raise IRVersionError("missing IR version header")
        lineno, keyword, rest = self.next("version")
        if keyword != "version":
            raise IRVersionError("missing IR version header", lineno)
        if rest != str(IR_VERSION):
            raise IRVersionError(f"unsupported IR version {rest!r}", lineno)

    def lexer(self, lineno: int, header: str) -> CompiledLexer:
        fields = header.split()
        if len(fields) != 3:
            raise IRError(f"invalid lexer header: {header!r}", lineno)
        name, policy, group = fields
        try:
            policy_value = EPolicy(policy)
            group_value = int(group)
        except ValueError as exc:
            raise IRError(str(exc), lineno) from None

        re_rules = []
        fn_rules = []
        actions = []
        while True:
            lineno, keyword, rest = self.next("rule or 'end'")
            if keyword == "end":
                break
            index = len(actions)
            try:
                if keyword == "re":
                    re_rules.append(RegexpRule(parse_rendered(rest), index))
                elif keyword == "fn":
                    fn_rules.append(FnRule(parse_predicate(rest), index))
                else:
                    raise IRError(f"unexpected {keyword!r}", lineno)
            except ValueError as exc:
                raise IRError(str(exc), lineno) from None

            lineno, keyword, rest = self.next("action")
            if keyword != "action":
                raise IRError(f"'action' expected, found {keyword!r}", lineno)
            try:
                actions.append(parse_action(rest))
            except SpecError as exc:
                raise IRError(exc.message, lineno) from None

        return CompiledLexer(
            name,
            policy_value,
            tuple(re_rules),
            tuple(fn_rules),
            tuple(actions),
            group_value,
        )

    def table(self) -> LexerTable:
        self.version()
        tokens: tuple[str, ...] = ()
        eof = None
        entry = None
        lexers: dict[str, CompiledLexer] = {}
        while self.peek_keyword() is not None:
            lineno, keyword, rest = self.next("declaration")
            match keyword:
                case "tokens":
                    tokens = tuple(rest.split())
                case "eof":
                    eof = rest
                case "entry":
                    entry = rest
                case "lexer":
                    lexer = self.lexer(lineno, rest)
                    if lexer.name in lexers:
                        raise IRError(
                            f"duplicate lexer {lexer.name!r}", lineno
                        )
                    lexers[lexer.name] = lexer
                case _:
                    raise IRError(f"unexpected {keyword!r}", lineno)
        if not lexers:
            raise IRError("no lexer defined")
        table = LexerTable(lexers, tokens, eof, entry)
        try:
            table.validate()
        except ValueError as exc:
            raise IRError(str(exc)) from None
        return table


def load_ir(data: bytes | str) -> LexerTable:
    """Load a table serialized by :func:`save_ir`.

    Raise :exc:`derivlex.error.IRError` on malformed data and
    :exc:`derivlex.error.IRVersionError` if the version header is missing
    or unsupported.
    """
    table = _IRReader(data).table()
    _log.debug("loaded %d lexer(s) from IR", len(table.lexers))
    return table


def write_ir(table: LexerTable, path: PathType) -> None:
    """Write `table` in IR format to `path`."""
    with open(path, "wb") as fd:
        fd.write(save_ir(table))


def read_ir(path: PathType) -> LexerTable:
    """Read a table in IR format from `path`."""
    with open(path, "rb") as fd:
        return load_ir(fd.read())
