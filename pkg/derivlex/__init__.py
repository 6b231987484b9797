"""Lexer generator based on Brzozowski derivatives."""

from .regexp import (  # noqa: F401
    Regexp,
    nullable,
    derive,
    matches,
    render,
    parse_rendered,
)
from .simplify import simp_derive  # noqa: F401
from .scoring import (  # noqa: F401
    EPolicy,
    EScoreMode,
    NoMatch,
    Len,
    NO_MATCH,
    l_score,
    s_score,
    score,
)
from .engine import (  # noqa: F401
    DEFAULT_FUEL,
    LexerTable,
    get_default_fuel,
    run_step,
    tokenize_all,
)
from .frontend import parse_spec, load_spec, compile_spec  # noqa: F401
from .ir import save_ir, load_ir, read_ir, write_ir  # noqa: F401
from .error import (  # noqa: F401
    DerivlexError,
    SpecError,
    SpecSyntaxError,
    SpecCompileError,
    IRError,
    IRVersionError,
)
from .tests import test  # noqa: F401
from ._version import __version__  # noqa: F401
