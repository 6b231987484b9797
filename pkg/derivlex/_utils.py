"""Internal utilities."""

from string import hexdigits

_ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", "'": "'", '"': '"'}


def quote_string(text: str, quote: str = '"') -> str:
    """Return `text` as a quoted literal using the `.vl` escapes.

    Printable ASCII characters are kept as is, the quote character and
    the backslash are escaped, other characters use ``\\n``, ``\\t`` or
    ``\\xNN``.
    """
    out = []
    for ch in text:
        code = ord(ch)
        if ch == quote or ch == "\\":
            out.append("\\" + ch)
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif code < 0x20 or code >= 0x7F:
            out.append(f"\\x{code:02x}")
        else:
            out.append(ch)
    return quote + "".join(out) + quote


def decode_escape(text: str, pos: int) -> tuple[str, int]:
    """Decode the escape sequence starting after the backslash at `pos`.

    Return the decoded character and the position following the escape.
    Raise :exc:`ValueError` on invalid sequences.
    """
    esc = text[pos : pos + 1]
    if esc in _ESCAPES:
        return _ESCAPES[esc], pos + 1
    if esc == "x":
        digits = text[pos + 1 : pos + 3]
        if len(digits) == 2 and all(c in hexdigits for c in digits):
            return chr(int(digits, 16)), pos + 3
    raise ValueError(f"invalid escape sequence: '\\{esc}'")


def unquote_string(text: str) -> str:
    """Inverse of :func:`quote_string`."""
    if len(text) < 2 or text[0] not in "'\"" or text[-1] != text[0]:
        raise ValueError(f"invalid string literal: {text!r}")
    body = text[1:-1]
    out = []
    pos = 0
    while pos < len(body):
        ch = body[pos]
        if ch == "\\":
            ch, pos = decode_escape(body, pos + 1)
        else:
            pos += 1
        out.append(ch)
    return "".join(out)
