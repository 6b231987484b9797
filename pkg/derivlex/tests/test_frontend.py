import unittest

from hypothesis import given

from derivlex.ir import save_ir
from derivlex.bench import get_spec_path
from derivlex.error import SpecError, SpecCompileError, SpecSyntaxError
from derivlex.regexp import (
    EPSILON,
    WILDCARD,
    Alt,
    Cat,
    Sym,
    Diff,
    Star,
    Range,
    matches,
)
from derivlex.engine import Ret, Seq, Call, NewLine, tokenize_all
from derivlex.scoring import EPolicy
from derivlex.frontend import (
    SAny,
    SRef,
    SSet,
    SChar,
    SPlus,
    SString,
    FnPattern,
    desugar,
    load_spec,
    parse_spec,
    render_spec,
    compile_spec,
    render_surface,
)
from derivlex.selection import Eof, Always, FnRule, StartsWith

from .oracles import surface_matches
from .strategies import short_words, surface_regexps

SPEC_NAMES = ["minical", "looping", "adversarial", "json", "xml"]


def _desugar(text):
    sf = parse_spec(f"let r = {text}\nrule m = parse r {{ m }}")
    return desugar(sf.definitions[0].regexp, {})


class ParseSpecTestCase(unittest.TestCase):
    def test_minical(self):
        sf = load_spec(get_spec_path("minical"))
        self.assertEqual(
            sf.tokens,
            (
                "ID",
                "Number",
                "PLUS",
                "MINUS",
                "TIMES",
                "LPAREN",
                "RPAREN",
                "Eof",
            ),
        )
        self.assertEqual(sf.eof, "Eof")
        self.assertEqual([d.name for d in sf.definitions], ["ident", "numb"])
        self.assertEqual(len(sf.lexers), 1)

        lexdef = sf.lexers[0]
        self.assertEqual(lexdef.name, "minlexer")
        self.assertIs(lexdef.policy, EPolicy.LONGEST)
        self.assertEqual(len(lexdef.rules), 10)
        self.assertEqual(lexdef.rules[0].pattern, SChar(ord("\n")))
        self.assertEqual(
            lexdef.rules[0].action,
            Seq((NewLine(), Call("minlexer"))),
        )
        self.assertEqual(lexdef.rules[1].pattern, SRef("ident"))
        self.assertEqual(lexdef.rules[8].pattern, FnPattern(Eof()))
        self.assertEqual(lexdef.rules[9].pattern, SAny())
        self.assertIn("Token kinds", sf.header)
        self.assertEqual(sf.trailer, "")

    def test_compile_minical(self):
        table = compile_spec(load_spec(get_spec_path("minical")))
        lexer = table["minlexer"]
        self.assertEqual(len(lexer.re_rules), 9)
        self.assertEqual(lexer.fn_rules, (FnRule(Eof(), 8),))
        self.assertEqual(len(lexer.actions), 10)
        self.assertEqual(
            [rule.action for rule in lexer.re_rules],
            [0, 1, 2, 3, 4, 5, 6, 7, 9],
        )
        self.assertEqual(lexer.actions[3], Ret("PLUS"))
        self.assertEqual(table.eof, "Eof")
        self.assertEqual(table.entry, "minlexer")

    def test_all_specs(self):
        for name in SPEC_NAMES:
            with self.subTest(name=name):
                table = compile_spec(load_spec(get_spec_path(name)))
                table.validate()

    def test_optional_bar(self):
        sf = load_spec(get_spec_path("looping"))
        self.assertEqual(sf.tokens, ("0", "1"))
        self.assertEqual(len(sf.lexers[0].rules), 3)
        self.assertEqual(sf.lexers[0].rules[2].pattern, FnPattern(Eof()))

    def test_repeated_token_directive(self):
        sf = parse_spec("%token A\n%token B C\nrule m = parse 'a' { ret C }")
        self.assertEqual(sf.tokens, ("A", "B", "C"))
        self.assertIsNone(sf.eof)

    def test_shortest(self):
        sf = parse_spec(
            "%token A Eof\n%eof Eof\n"
            "rule m = shortest 'a'+ { ret A } | eof { ret Eof }"
        )
        self.assertIs(sf.lexers[0].policy, EPolicy.SHORTEST)
        table = compile_spec(sf)
        result = tokenize_all(table, "aaa", fuel=10)
        self.assertTrue(result.ok)
        self.assertEqual(result.kinds(), ["A", "A", "A", "Eof"])

    def test_predicates(self):
        sf = parse_spec(
            "%token A\n"
            "rule m = parse\n"
            '  | $(starts_with "ab") { ret A }\n'
            "  | $(always) { ret A }\n"
            "  | EOF { ret A }\n"
        )
        patterns = [rule.pattern for rule in sf.lexers[0].rules]
        self.assertEqual(
            patterns,
            [
                FnPattern(StartsWith("ab")),
                FnPattern(Always()),
                FnPattern(Eof()),
            ],
        )

    def test_comments(self):
        sf = parse_spec(
            "(* outer (* nested *) still a comment *)\n"
            "%token A (* kinds *)\n"
            "rule m = parse\n"
            "  (* before a rule *)\n"
            "  | 'a' { ret A } (* after *)\n"
        )
        self.assertEqual(sf.tokens, ("A",))
        self.assertEqual(len(sf.lexers[0].rules), 1)

    def test_strings_in_actions(self):
        sf = parse_spec('%token A\nrule m = parse \'a\' { raise "}{" }')
        self.assertEqual(str(sf.lexers[0].rules[0].action), 'raise "}{"')

    def test_groups(self):
        sf = parse_spec(
            "%token A\n"
            "rule a = parse 'a' { ret A }\n"
            "and b = parse 'a' { a }\n"
            "then c = parse 'a' { b }\n"
            "rule d = parse 'a' { c }\n"
        )
        self.assertEqual(
            [lexdef.joined for lexdef in sf.lexers],
            ["rule", "and", "then", "rule"],
        )
        table = compile_spec(sf)
        self.assertEqual(
            [lexer.group for lexer in table.lexers.values()], [0, 0, 1, 2]
        )
        self.assertEqual(table.entry, "a")
        self.assertEqual(compile_spec(sf, "d").entry, "d")


class SpecErrorTestCase(unittest.TestCase):
    def _check(self, text, exc_type=SpecError, line=None, column=None):
        with self.assertRaises(exc_type) as cm:
            compile_spec(parse_spec(text))
        if line is not None:
            self.assertEqual(cm.exception.line, line)
        if column is not None:
            self.assertEqual(cm.exception.column, column)
        return cm.exception

    def test_bad_action(self):
        text = "%token A\nrule m = parse\n  | 'a' { bogus X }"
        exc = self._check(text, SpecSyntaxError, 3, 11)
        self.assertIn("bogus", str(exc))
        self.assertTrue(str(exc).startswith("3:11: "))

    def test_syntax_errors(self):
        data = [
            "%tokens A\nrule m = parse 'a' { ret A }",
            "%token A\n(* unterminated\nrule m = parse 'a' { ret A }",
            "%token A",
            "%token A\nrule m = parse",
            "%token A\nrule m = lex 'a' { ret A }",
            "%token A\nrule m = parse 'a'",
            "%token A\nrule m = parse 'a' { ret A",
            "%token A\nrule m = parse 'ab' { ret A }",
            "%token A\nrule m = parse ['a' 'b' { ret A }",
            "%token A\nrule m = parse $(bogus) { ret A }",
            "%token A\nrule m = parse 'a' { ret A } }",
            "%token A\n%eof\nrule m = parse 'a' { ret A }",
            "%token A\nrule m = parse 'a' { ret A }\n@",
        ]
        for text in data:
            with self.subTest(text=text):
                self._check(text, SpecSyntaxError)

    def test_unknown_directive_location(self):
        self._check(
            "\n  %tokens A\nrule m = parse 'a' { ret A }",
            SpecSyntaxError,
            2,
            3,
        )

    def test_compile_errors(self):
        data = [
            "%token A A\nrule m = parse 'a' { ret A }",
            "%token A\n%eof B\nrule m = parse 'a' { ret A }",
            "%token A\nlet x = 'a'\nlet x = 'b'\nrule m = parse x { ret A }",
            "%token A\nrule m = parse 'a' { ret A }\nand m = parse 'b' { m }",
            "%token A\nrule ret = parse 'a' { ret A }",
            "%token A\nrule m = parse 'a' { ret B }",
            "%token A\nrule m = parse 'a' { other }",
            "%token A\nrule m = parse 'a' { n }\nthen n = parse 'a' { ret A }",
            "%token A\nrule m = parse 'a' { new_line }",
        ]
        for text in data:
            with self.subTest(text=text):
                self._check(text, SpecCompileError)

    def test_unbound_name_location(self):
        text = "%token A\nrule m = parse\n  | 'a' zz { ret A }"
        exc = self._check(text, SpecCompileError, 3, 5)
        self.assertIn("zz", exc.message)

    def test_unknown_entry(self):
        sf = load_spec(get_spec_path("minical"))
        self.assertRaises(SpecCompileError, compile_spec, sf, "nope")


class DesugarTestCase(unittest.TestCase):
    def test_desugar(self):
        lower = Range(ord("a"), ord("z"))
        data = [
            ("['a'-'z']+", Cat(lower, Star(lower))),
            ('""', EPSILON),
            ('"ab"', Cat(Sym(ord("a")), Sym(ord("b")))),
            ("'a'?", Alt(Sym(ord("a")), EPSILON)),
            ("_", WILDCARD),
            ("[^ 'a']", Diff(WILDCARD, Sym(ord("a")))),
            ("['a' 'c'-'d']", Alt(Sym(ord("a")), Range(ord("c"), ord("d")))),
            ("'\\x41' | '\\n'", Alt(Sym(0x41), Sym(0x0A))),
            ("'a'**", Star(Sym(ord("a")))),
            ("('a' | 'b') 'c'", Cat(Alt(Sym(97), Sym(98)), Sym(99))),
            (
                "'a' 'b' - 'c' | 'd'",
                Alt(Diff(Cat(Sym(97), Sym(98)), Sym(99)), Sym(100)),
            ),
        ]
        for text, expected in data:
            with self.subTest(text=text):
                self.assertEqual(_desugar(text), expected)

    def test_named_references(self):
        sf = parse_spec(
            "let d = ['0'-'9']\nlet dd = d d\nrule m = parse dd { m }"
        )
        table = compile_spec(sf)
        digit = Range(ord("0"), ord("9"))
        self.assertEqual(table["m"].re_rules[0].pattern, Cat(digit, digit))

    def test_unbound_name(self):
        self.assertRaises(SpecCompileError, desugar, SRef("x"), {})

    @given(surface_regexps, short_words)
    def test_desugar_soundness(self, sr, s):
        self.assertEqual(matches(desugar(sr, {}), s), surface_matches(sr, s))

    def test_desugar_env(self):
        env = {"x": Sym(97)}
        self.assertEqual(
            desugar(SPlus(SRef("x")), env), Cat(Sym(97), Star(Sym(97)))
        )
        self.assertEqual(desugar(SString("a"), env), Sym(97))
        self.assertEqual(
            desugar(SSet(((97, None),), True), env), Diff(WILDCARD, Sym(97))
        )


class RenderSpecTestCase(unittest.TestCase):
    def test_render_surface(self):
        data = [
            ("['a'-'z']+", "['a'-'z']+"),
            ("('a' | 'b') 'c'", "('a' | 'b') 'c'"),
            ("'a' | 'b' 'c'*", "'a' | 'b' 'c'*"),
            ("'\\'' \"x\\\"\"", "'\\'' \"x\\\"\""),
            ("[^ '\\n' '\\xff']", "[^'\\n' '\\xff']"),
        ]
        for text, expected in data:
            with self.subTest(text=text):
                sf = parse_spec(f"let r = {text}\nrule m = parse r {{ m }}")
                rendered = render_surface(sf.definitions[0].regexp)
                self.assertEqual(rendered, expected)

    @given(surface_regexps)
    def test_render_surface_reparses(self, sr):
        text = f"let r = {render_surface(sr)}\nrule m = parse r {{ m }}"
        self.assertEqual(parse_spec(text).definitions[0].regexp, sr)

    def test_render_spec(self):
        for name in SPEC_NAMES:
            with self.subTest(name=name):
                sf = load_spec(get_spec_path(name))
                rendered = render_spec(sf)
                self.assertEqual(parse_spec(rendered), sf)
                self.assertEqual(
                    save_ir(compile_spec(parse_spec(rendered))),
                    save_ir(compile_spec(sf)),
                )
                self.assertEqual(render_spec(parse_spec(rendered)), rendered)
