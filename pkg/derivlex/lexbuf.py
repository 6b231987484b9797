"""Lexing buffer and source positions."""

from dataclasses import dataclass, replace

__all__ = ["Position", "Lexbuf", "make_lexbuf", "update_lexbuf"]


@dataclass(frozen=True, slots=True)
class Position:
    """Source position.

    `line` is 1-based, `column` and `offset` are 0-based; `offset` is the
    absolute character index in the input.
    """

    line: int = 1
    column: int = 0
    offset: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"

    def advance(self, n: int) -> "Position":
        """Return the position `n` characters further on the same line."""
        return Position(self.line, self.column + n, self.offset + n)

    def new_line(self) -> "Position":
        """Return the position at the start of the next line."""
        return Position(self.line + 1, 0, self.offset)


@dataclass(frozen=True, slots=True)
class Lexbuf:
    """Lexing buffer.

    The buffer holds the whole input `text`; the remaining input is the
    suffix starting at ``end_pos.offset``, so updating the buffer never
    copies the input.
    """

    text: str
    lexeme: str = ""
    start_pos: Position = Position()
    end_pos: Position = Position()

    @property
    def offset(self) -> int:
        """Return the offset of the first character not yet consumed."""
        return self.end_pos.offset

    @property
    def remaining(self) -> str:
        """Return the input not yet consumed."""
        return self.text[self.end_pos.offset :]

    @property
    def remaining_length(self) -> int:
        """Return the number of characters not yet consumed."""
        return len(self.text) - self.end_pos.offset

    def new_line(self) -> "Lexbuf":
        """Return the buffer with `end_pos` moved to the next line."""
        return replace(self, end_pos=self.end_pos.new_line())


def make_lexbuf(text: str) -> Lexbuf:
    """Return the initial buffer for `text`."""
    return Lexbuf(text)


def update_lexbuf(b: Lexbuf, n: int) -> Lexbuf:
    """Consume the first `n` remaining characters of `b`.

    The new lexeme is the consumed text, the new start position is the
    old end position and the end position moves forward by `n` columns.
    Newlines in the lexeme do not change the line: only
    :meth:`Lexbuf.new_line` does.
    """
    if n < 0 or n > b.remaining_length:
        raise ValueError(
            f"cannot consume {n} characters, {b.remaining_length} remaining"
        )
    offset = b.end_pos.offset
    return Lexbuf(
        b.text,
        str.__getitem__(b.text, slice(offset, offset + n)),
        b.end_pos,
        b.end_pos.advance(n),
    )
