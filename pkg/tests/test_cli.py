from __future__ import annotations

import io
import subprocess
import sys
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from mbasym import asymptotics as asy
from mbasym import cli
from mbasym.series import Params, direct_sum


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def field(text, key):
    for line in text.splitlines():
        if line.startswith(key + ":"):
            return line.split(":", 1)[1].strip()
    raise KeyError(key)


class TestParseNumber:
    @pytest.mark.parametrize("text, want", [
        ("3", Fraction(3)), ("-9/4", Fraction(-9, 4)), ("0.5", Fraction(1, 2)),
        ("1e-3", Fraction(1, 1000)), ("0.333333...", Fraction(1, 3)), ("0.333333…", Fraction(1, 3)),
    ])
    def test_values(self, text, want):
        assert cli.parse_number(text) == want

    def test_plain_decimal_is_exact(self):
        assert cli.parse_number("0.333333") == Fraction(333333, 10 ** 6)

    def test_garbage(self):
        with pytest.raises(Exception):
            cli.parse_number("abc")


class TestEval:
    def test_thm3_matches_library(self):
        code, text = run("eval", "--a", "8", "--b", "1", "--mu", "4", "--nu", "0", "--gamma", "0",
                         "--method", "thm3")
        assert code == cli.EXIT_OK
        assert field(text, "regime") == "exp-small" and field(text, "J") == "2"
        with mp.workdps(cli.EVAL_DIGITS):
            rep = asy.theorem3_expsmall(Params(8, 1, 0, 0, 4), 2)
            assert mpf(field(text, "remainder")) == pytest.approx(rep.value, rel=1e-40)

    def test_direct_to_tolerance(self):
        code, text = run("eval", "--a", "2", "--b", "0.5", "--mu", "3", "--nu", "0.333333...",
                         "--gamma", "0.5", "--method", "direct", "--tol", "1e-25")
        assert code == cli.EXIT_OK
        with mp.workdps(60):
            ref = direct_sum(Params(2, Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), 3), tol=mpf("1e-35")).value
            assert abs(mpf(field(text, "value")) - ref) <= mpf("1e-25")
        assert mpf(field(text, "err_est")) <= mpf("1e-25")

    def test_auto_picks_regime(self):
        _, text = run("eval", "--a", "4", "--b", "1", "--mu", "5/2", "--nu", "0", "--gamma", "-1")
        assert field(text, "method") == "thm2" and field(text, "regime") == "double-pole"

    def test_verbose_lists_terms(self):
        _, text = run("eval", "--a", "6", "--b", "1", "--mu", "3", "--nu", "1/3", "--gamma", "1/2",
                      "--method", "thm1", "--K", "4", "--verbose")
        assert field(text, "k_used") == "4"
        assert [l.split(":")[0] for l in text.splitlines() if l.startswith("term")] == \
            [f"term {k}" for k in range(5)]

    def test_alternating_and_y(self):
        code, text = run("eval", "--a", "6", "--b", "1", "--mu", "3", "--nu", "1/3", "--gamma", "1/2",
                         "--kind", "alt")
        assert code == 0 and field(text, "kind") == "alt"
        code, _ = run("eval", "--a", "6", "--b", "1", "--mu", "3", "--nu", "1/3", "--gamma", "1/2",
                      "--kind", "y")
        assert code == 0

    def test_params_violation_exit_2(self, capsys):
        code, text = run("eval", "--a", "4", "--b", "1", "--mu", "0", "--nu", "0", "--gamma", "1")
        assert code == cli.EXIT_USAGE and text == ""
        assert "invalid parameters" in capsys.readouterr().err

    def test_regime_error_exit_3(self):
        code, text = run("eval", "--a", "4", "--b", "1", "--mu", "3", "--nu", "0", "--gamma", "-1",
                         "--method", "thm1")
        assert code == cli.EXIT_REGIME and text == ""

    def test_integer_order_y_exit_3(self):
        code, _ = run("eval", "--a", "4", "--b", "1", "--mu", "3", "--nu", "1", "--gamma", "0",
                      "--kind", "y")
        assert code == cli.EXIT_REGIME

    def test_missing_b_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            run("eval", "--a", "8", "--mu", "4", "--nu", "0", "--gamma", "0")
        assert exc.value.code == 2

    def test_digits_flag_and_env(self, monkeypatch):
        argv = ("eval", "--a", "8", "--b", "1", "--mu", "4", "--nu", "0", "--gamma", "0", "--method", "thm3")
        _, long_ = run(*argv, "--digits", "30")
        assert len(field(long_, "value").split("e")[0].replace("-", "").replace(".", "")) == 30
        monkeypatch.setenv("MBASYM_DIGITS", "20")
        _, env = run(*argv)
        assert len(field(env, "value").split("e")[0].replace("-", "").replace(".", "")) == 20

    def test_too_few_digits(self, monkeypatch, capsys):
        argv = ("eval", "--a", "8", "--b", "1", "--mu", "4", "--nu", "0", "--gamma", "0")
        with pytest.raises(SystemExit) as exc:
            run(*argv, "--digits", "15")
        assert exc.value.code == 2
        monkeypatch.setenv("MBASYM_DIGITS", "15")
        assert run(*argv)[0] == cli.EXIT_USAGE

    @pytest.mark.parametrize("extra", [("--tol", "abc"), ("--tol", "-1"), ("--K", "-3")])
    def test_bad_flags(self, extra):
        with pytest.raises(SystemExit) as exc:
            run("eval", "--a", "6", "--b", "1", "--mu", "3", "--nu", "1/3", "--gamma", "1/2", *extra)
        assert exc.value.code == 2

    def test_K_out_of_range(self, capsys):
        code, text = run("eval", "--a", "6", "--b", "1", "--mu", "3", "--nu", "1/3", "--gamma", "1/2",
                         "--method", "thm1", "--K", "500")
        assert code == cli.EXIT_USAGE and text == ""
        assert "K=500" in capsys.readouterr().err

    def test_deterministic(self):
        argv = ("eval", "--a", "6", "--b", "2", "--mu", "3", "--nu", "1/3", "--gamma", "1/2")
        assert run(*argv) == run(*argv)


class TestTableAndVerify:
    def test_table_to_file(self, tmp_path):
        path = tmp_path / "t3.md"
        code, text = run("table", "--which", "3", "--format", "md", "--output", str(path))
        assert code == 0 and text == ""
        lines = path.read_text().splitlines()
        assert len(lines) == 2 + 9
        assert "1.947(-06)" in lines[2 + 5]

    def test_table_csv_stdout(self):
        code, text = run("table", "--which", "3")
        assert code == 0 and text.startswith("table,column,")

    def test_bad_table_flag(self):
        with pytest.raises(SystemExit) as exc:
            run("table", "--which", "4")
        assert exc.value.code == 2

    def test_verify_suite(self):
        code, text = run("verify", "--suite", "residues")
        assert code == cli.EXIT_OK
        lines = text.splitlines()
        assert lines[-1] == "6/6 checks passed"
        assert all(l.startswith("PASS") for l in lines[:-1])

    def test_verify_failure_exit_1(self, monkeypatch):
        from mbasym import verify

        def bad(seed=0):
            yield verify.Check("always fails", False, "a=1")
        monkeypatch.setitem(verify.SUITES, "residues", bad)
        code, text = run("verify", "--suite", "residues")
        assert code == cli.EXIT_FAIL
        assert text.startswith("FAIL  always fails: a=1")

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("digits = 25  # short\noracle_cap = 5000\n")
        _, text = run("--config", str(cfg), "eval", "--a", "8", "--b", "1", "--mu", "4", "--nu", "0",
                      "--gamma", "0", "--method", "thm3")
        assert len(field(text, "value").split("e")[0].replace("-", "").replace(".", "")) == 25

    def test_bad_config_exit_2(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("colour = blue\n")
        code, _ = run("--config", str(cfg), "verify", "--suite", "residues")
        assert code == cli.EXIT_USAGE
        assert "unknown key" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mbasym", "eval", "--a", "8"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert proc.stdout == "" and "usage:" in proc.stderr
