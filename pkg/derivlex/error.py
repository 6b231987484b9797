"""Error management utilities."""


class DerivlexError(RuntimeError):
    """Base class for errors raised by the derivlex package."""

    pass


class SpecError(DerivlexError):
    """Error in a lexer specification, located by line and column."""

    def __init__(
        self, message: str, line: int | None = None, column: int | None = None
    ):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        """Return the message prefixed by its `line:col` location."""
        if self.line is None:
            return self.message
        return f"{self.line}:{self.column or 0}: {self.message}"


class SpecSyntaxError(SpecError):
    """The specification text cannot be parsed."""

    pass


class SpecCompileError(SpecError):
    """The specification parses but cannot be compiled to lexers."""

    pass


class IRError(DerivlexError):
    """Malformed intermediate representation."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self) -> str:
        """Return the message prefixed by its line number (if any)."""
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class IRVersionError(IRError):
    """Missing or unsupported IR version header."""

    pass
