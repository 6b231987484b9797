import io
import os
import re
import sys
import json
import pathlib
import tempfile
import unittest
import subprocess
from unittest import mock
from contextlib import redirect_stderr, redirect_stdout

from derivlex import cli
from derivlex import __package__ as PKG  # noqa: N812
from derivlex import __version__ as VERSION  # noqa: N812
from derivlex.bench import get_spec_path
from derivlex.engine import (
    DEFAULT_FUEL,
    FUEL_ENV_VAR,
    tokenize_all,
    get_default_fuel,
)

DATA_DIR = pathlib.Path(__file__).parent / "data"
MINICAL_SPEC = str(get_spec_path("minical"))
MINICAL_IR = str(DATA_DIR / "minical.ir")
CALC_INPUT = str(DATA_DIR / "calc.txt")


def _make_cmd(*args):
    return [sys.executable, "-m", PKG] + list(args)


def _main(*args):
    with redirect_stdout(io.StringIO()) as sout:
        with redirect_stderr(io.StringIO()) as serr:
            ret = cli.main(*args)
    return ret, sout.getvalue(), serr.getvalue()


class MainTestCase(unittest.TestCase):
    def test_version(self):
        cmd = _make_cmd("--version")
        result = subprocess.run(cmd, stdout=subprocess.PIPE, encoding="utf-8")
        self.assertEqual(result.returncode, 0)
        self.assertIn(VERSION, result.stdout)

    def test_help(self):
        cmd = _make_cmd("--help")
        result = subprocess.run(cmd, stdout=subprocess.PIPE, encoding="utf-8")
        self.assertEqual(result.returncode, 0)
        usage = result.stdout.splitlines()[0]
        self.assertIn("usage:", usage)
        self.assertIn(cli.PROG, usage)

    def test_subcommand_help(self):
        for name in ("info", "gen", "run", "dump", "bench"):
            with self.subTest(name=name):
                cmd = _make_cmd(name, "-h")
                result = subprocess.run(
                    cmd, stdout=subprocess.PIPE, encoding="utf-8"
                )
                self.assertEqual(result.returncode, 0)
                usage = result.stdout.splitlines()[0]
                self.assertIn("usage:", usage)
                self.assertIn(cli.PROG, usage)
                self.assertIn(name, usage)

    def test_no_subcommand(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as cm:
                cli.main("--loglevel", "INFO")
        self.assertEqual(cm.exception.code, 2)

    def test_exit_code(self):
        cmd = _make_cmd("run", "--fuel", "0", MINICAL_SPEC, CALC_INPUT)
        result = subprocess.run(
            cmd,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            encoding="utf-8",
        )
        self.assertEqual(result.returncode, cli.EX_LEXERROR)
        self.assertEqual(result.stdout, "")
        self.assertIn("ERROR\tNoFuel\t", result.stderr)


class InfoSubCommandTestCase(unittest.TestCase):
    VERSION_RE = re.compile(
        rf"^derivlex version:\s+{re.escape(VERSION)}$", re.MULTILINE
    )

    def test_default(self):
        ret, output, _ = _main("info")
        self.assertEqual(ret, cli.EX_OK)
        self.assertRegex(output, self.VERSION_RE)
        self.assertIn("Default fuel:", output)


class GenSubCommandTestCase(unittest.TestCase):
    def test_gen(self):
        golden = pathlib.Path(MINICAL_IR).read_bytes()
        with tempfile.TemporaryDirectory() as tmpdir:
            outpath = pathlib.Path(tmpdir) / "out.ir"
            ret, output, _ = _main("gen", "-o", str(outpath), MINICAL_SPEC)
            self.assertEqual(ret, cli.EX_OK)
            self.assertIn("1 lexer(s), 10 rule(s)", output)
            self.assertEqual(outpath.read_bytes(), golden)

            # byte-stable
            ret, _, _ = _main("gen", "-o", str(outpath), MINICAL_SPEC)
            self.assertEqual(ret, cli.EX_OK)
            self.assertEqual(outpath.read_bytes(), golden)

    def test_default_outpath(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            spec = pathlib.Path(tmpdir) / "calc.vl"
            spec.write_text(pathlib.Path(MINICAL_SPEC).read_text())
            ret, _, _ = _main("gen", str(spec))
            self.assertEqual(ret, cli.EX_OK)
            self.assertTrue(spec.with_suffix(".ir").is_file())

    def test_missing_file(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            spec = str(pathlib.Path(tmpdir) / "missing.vl")
            with self.assertLogs("derivlex.cli", "ERROR") as cm:
                ret, _, _ = _main("gen", spec)
        self.assertEqual(ret, cli.EX_IOERR)
        self.assertIn("missing.vl", cm.output[0])

    def test_bad_spec(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            spec = pathlib.Path(tmpdir) / "bad.vl"
            spec.write_text("%token A\nrule m = parse\n  | 'a' { bogus X }\n")
            with self.assertLogs("derivlex.cli", "ERROR") as cm:
                ret, _, _ = _main("gen", str(spec))
            self.assertFalse(spec.with_suffix(".ir").exists())
        self.assertEqual(ret, cli.EX_FAILURE)
        self.assertIn("bad.vl:3:11:", cm.output[0])


class RunSubCommandTestCase(unittest.TestCase):
    def setUp(self):
        self.expected = (DATA_DIR / "minical.tokens").read_text()
        self.tmpdir = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmpdir.cleanup)

    def _input(self, text):
        path = pathlib.Path(self.tmpdir.name) / "input.txt"
        path.write_text(text, encoding="latin-1", newline="")
        return str(path)

    def test_run_spec(self):
        ret, output, errors = _main("run", MINICAL_SPEC, CALC_INPUT)
        self.assertEqual(ret, cli.EX_OK)
        self.assertEqual(output, self.expected)
        self.assertEqual(errors, "")

    def test_run_ir(self):
        ret, output, _ = _main("run", MINICAL_IR, CALC_INPUT)
        self.assertEqual(ret, cli.EX_OK)
        self.assertEqual(output, self.expected)

    def test_modes(self):
        for mode in ("naive", "simplify", "stop-early", "fast"):
            with self.subTest(mode=mode):
                args = ("run", "--mode", mode, MINICAL_SPEC, CALC_INPUT)
                ret, output, _ = _main(*args)
                self.assertEqual(ret, cli.EX_OK)
                self.assertEqual(output, self.expected)

    def test_no_fuel(self):
        ret, output, errors = _main(
            "run", "-fuel", "0", MINICAL_SPEC, CALC_INPUT
        )
        self.assertEqual(ret, cli.EX_LEXERROR)
        self.assertEqual(output, "")
        self.assertEqual(errors, "ERROR\tNoFuel\tno fuel left\t1:0\n")

    def test_looping(self):
        spec = str(get_spec_path("looping"))
        ret, output, errors = _main(
            "run", "--fuel", "1000", spec, self._input("c")
        )
        self.assertEqual(ret, cli.EX_LEXERROR)
        self.assertEqual(output, "")
        self.assertTrue(errors.startswith("ERROR\tNoFuel\t"))

        ret, output, _ = _main("run", spec, self._input("baab"))
        self.assertEqual(ret, cli.EX_OK)
        self.assertEqual(output, "0\t\t1:0\t1:4\n1\t\t1:0\t1:4\n")

    def test_user_error(self):
        ret, output, errors = _main("run", MINICAL_SPEC, self._input("1 2"))
        self.assertEqual(ret, cli.EX_LEXERROR)
        self.assertEqual(output, "Number\t1\t1:0\t1:1\n")
        self.assertEqual(errors, "ERROR\tUserError\tunknown token : \t1:1\n")

    def test_new_lines(self):
        ret, output, _ = _main("run", MINICAL_SPEC, self._input("a\n\nb"))
        self.assertEqual(ret, cli.EX_OK)
        self.assertEqual(
            output, "ID\ta\t1:0\t1:1\nID\tb\t3:0\t3:1\nEof\t\t3:0\t3:1\n"
        )

    def test_json_format(self):
        ret, output, _ = _main(
            "run", "--format", "json", MINICAL_SPEC, CALC_INPUT
        )
        self.assertEqual(ret, cli.EX_OK)
        records = [json.loads(line) for line in output.splitlines()]
        self.assertEqual(len(records), 8)
        self.assertEqual(
            records[0],
            {"kind": "ID", "payload": "x", "start": "1:0", "end": "1:1"},
        )
        self.assertIsNone(records[1]["payload"])

    def test_escaped_payload(self):
        spec = pathlib.Path(self.tmpdir.name) / "words.vl"
        spec.write_text(
            "%token W Eof\n%eof Eof\n"
            "rule m = parse [^ ' ']+ { ret_l W }\n"
            "  | ' ' { m }\n"
            "  | eof { ret Eof }\n"
        )
        ret, output, _ = _main("run", str(spec), self._input("a\tb\\"))
        self.assertEqual(ret, cli.EX_OK)
        self.assertEqual(
            output, "W\ta\\tb\\\\\t1:0\t1:4\nEof\t\t1:0\t1:4\n"
        )

    def test_missing_eof_rule(self):
        spec = pathlib.Path(self.tmpdir.name) / "words.vl"
        spec.write_text("%token W\nrule m = parse ['a'-'z']+ { ret_l W }\n")
        ret, output, errors = _main("run", str(spec), self._input("ab"))
        self.assertEqual(ret, cli.EX_LEXERROR)
        self.assertEqual(output, "W\tab\t1:0\t1:2\n")
        self.assertTrue(errors.startswith("ERROR\tNoRuleMatched\t"))

    def test_default_fuel(self):
        env = {
            key: value
            for key, value in os.environ.items()
            if key != FUEL_ENV_VAR
        }
        with mock.patch.dict(os.environ, env, clear=True):
            with mock.patch.object(
                cli, "tokenize_all", wraps=tokenize_all
            ) as tokenize:
                ret, output, _ = _main("run", MINICAL_SPEC, CALC_INPUT)
                self.assertEqual(get_default_fuel(), DEFAULT_FUEL)
        self.assertEqual(ret, cli.EX_OK)
        self.assertEqual(output, self.expected)
        self.assertIsNone(tokenize.call_args.kwargs["fuel"])
        self.assertEqual(DEFAULT_FUEL, 1_000_000)

        with mock.patch.object(
            cli, "tokenize_all", wraps=tokenize_all
        ) as tokenize:
            _main("run", "-fuel", "5", MINICAL_SPEC, CALC_INPUT)
        self.assertEqual(tokenize.call_args.kwargs["fuel"], 5)

    def test_unknown_entry(self):
        for table in (MINICAL_SPEC, MINICAL_IR):
            with self.subTest(table=table):
                with self.assertLogs("derivlex.cli", "ERROR"):
                    ret, _, _ = _main(
                        "run", "--entry", "nope", table, CALC_INPUT
                    )
                self.assertEqual(ret, cli.EX_FAILURE)

    def test_missing_input(self):
        with self.assertLogs("derivlex.cli", "ERROR"):
            ret, _, _ = _main(
                "run", MINICAL_SPEC, str(DATA_DIR / "missing.txt")
            )
        self.assertEqual(ret, cli.EX_IOERR)

    def test_bad_ir(self):
        path = pathlib.Path(self.tmpdir.name) / "bad.ir"
        path.write_text("tokens A\n")
        with self.assertLogs("derivlex.cli", "ERROR") as cm:
            ret, _, _ = _main("run", str(path), CALC_INPUT)
        self.assertEqual(ret, cli.EX_FAILURE)
        self.assertIn("version", cm.output[0])

    def test_invalid_fuel(self):
        for value in ("-1", "abc"):
            with self.subTest(value=value):
                with redirect_stderr(io.StringIO()):
                    with self.assertRaises(SystemExit):
                        cli.main(
                            "run", "--fuel", value, MINICAL_SPEC, CALC_INPUT
                        )


class DumpSubCommandTestCase(unittest.TestCase):
    def test_dump(self):
        for table in (MINICAL_SPEC, MINICAL_IR):
            with self.subTest(table=table):
                ret, output, _ = _main("dump", table)
                self.assertEqual(ret, cli.EX_OK)
                lines = output.splitlines()
                self.assertEqual(lines[0], "entry: minlexer")
                self.assertEqual(lines[1], "eof: Eof")
                self.assertIn(
                    "lexer minlexer (policy: longest, group: 0)", lines
                )
                self.assertIn(
                    "cat(range(61,7a), star(range(61,7a)))  [size 4]", output
                )
                self.assertIn("$(eof)", output)
                self.assertIn("{ ret_l ID }", output)


class BenchSubCommandTestCase(unittest.TestCase):
    def test_bench(self):
        ret, output, errors = _main(
            "bench", "--sizes", "10,20", "--no-progress", "adversarial"
        )
        self.assertEqual(ret, cli.EX_OK)
        lines = output.splitlines()
        self.assertEqual(lines[0], "suite,size,mode,wall_ms,char_reads")
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[1].startswith("adversarial,10,fast,"))
        self.assertTrue(lines[1].endswith(",30"))
        self.assertIn("growth exponent: 1.00", errors)

    def test_single_size(self):
        ret, output, errors = _main(
            "bench", "--sizes", "0", "--no-progress", "adversarial"
        )
        self.assertEqual(ret, cli.EX_OK)
        self.assertEqual(len(output.splitlines()), 2)
        self.assertIn("growth exponent: n/a", errors)

    def test_csv_file(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            csvpath = pathlib.Path(tmpdir) / "results.csv"
            ret, output, _ = _main(
                "bench",
                "--sizes",
                "10",
                "--mode",
                "naive",
                "--csv",
                str(csvpath),
                "--no-progress",
                "adversarial",
            )
            self.assertEqual(ret, cli.EX_OK)
            self.assertEqual(output, "")
            lines = csvpath.read_text().splitlines()
        self.assertEqual(lines[1].split(",")[2], "naive")
        self.assertEqual(lines[1].split(",")[4], "165")

    def test_invalid_sizes(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                cli.main("bench", "--sizes", "0..8", "adversarial")
