import io
import json
import os
import re
import subprocess
import sys

import jsonschema
import pytest
import sympy as sp

from stci.cli import (
    EXIT_INPUT,
    EXIT_IO,
    EXIT_NO_DECOMP,
    EXIT_NOT_POLY,
    EXIT_OK,
    EXIT_VERIFY,
    FamilySpec,
    InputError,
    main,
    parse_override,
    parse_range,
)

NUM = {"type": "string", "pattern": "^-?[0-9]+$"}
SYSTEM_SCHEMA = {
    "type": "object",
    "required": ["curve", "decompositions", "polynomials"],
    "properties": {
        "curve": {"type": "array", "items": NUM, "minItems": 2},
        "decompositions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["level", "positive", "signed", "flags"],
                "properties": {
                    "level": {"type": "integer"},
                    "positive": {"type": "object", "additionalProperties": NUM},
                    "signed": {"type": "object", "additionalProperties": NUM},
                },
            },
        },
        "polynomials": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "terms"],
                "properties": {
                    "name": {"type": "string", "pattern": "^F[0-9]+$"},
                    "terms": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["coeff", "exponents"],
                            "properties": {"coeff": NUM, "exponents": {"type": "array", "items": NUM}},
                        },
                    },
                },
            },
        },
    },
}


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


class TestDecompose:
    def test_four_level_curve(self):
        code, text = run("decompose", "1,2,3,5")
        assert code == EXIT_OK
        assert "(a,b,c)=(0,1,1)  (alpha,beta,gamma)=(0,2,3)" in text
        assert "(a,b,c)=(2,0,1)  (alpha,beta,gamma)=(1,0,2)" in text
        assert "sufficient=yes" in text and "sufficient=no" in text

    def test_gcd(self, capsys):
        code, _ = run("decompose", "2,4,6")
        assert code == EXIT_INPUT and "gcd is not 1" in capsys.readouterr().err

    def test_plane(self):
        code, text = run("decompose", "1,2")
        assert code == EXIT_OK and "no levels to decompose" in text

    def test_json(self):
        code, text = run("decompose", "1,2,3,5", "--format", "json")
        data = json.loads(text)
        assert code == EXIT_OK and len(data["levels"]["4"]) == 3

    @pytest.mark.parametrize("arg", ["1,x,3", "", "3,2,1", "4,5,6,7"])
    def test_bad_input(self, arg):
        assert run("decompose", arg)[0] == EXIT_INPUT


class TestBuild:
    def test_text_golden(self):
        code, text = run("build", "1,2,3", "--format", "text")
        assert code == EXIT_OK and text == "x1^2-x2*x0\nx2^3-2*x1*x2*x3+x3^2*x0\n"

    def test_latex(self):
        code, text = run("build", "1,2,3,5", "--format", "latex")
        lines = text.splitlines()
        assert code == EXIT_OK and len(lines) == 3
        assert lines[2] == "F_{3} = x_3^5-3x_1x_3^3x_4+3x_1^2x_3x_4^2-x_4^3x_0^2"

    def test_strict_ok(self):
        assert run("build", "1,2,3,4", "--policy", "strict")[0] == EXIT_OK

    def test_no_decomposition(self):
        assert run("build", "1,3,4")[0] == EXIT_NO_DECOMP
        assert run("build", "1,3,5,12")[0] == EXIT_NO_DECOMP
        assert run("build", "1,3,5,12", "--policy", "allow-direct")[0] == EXIT_OK

    def test_override(self):
        code, text = run("build", "1,2,3,8", "--use", "4:0,2,4", "--policy", "allow-direct")
        assert code == EXIT_OK
        assert text.splitlines()[-1] == "x3^8-3*x2^2*x3^4*x4*x0+3*x2^4*x4^2*x0^2-x4^3*x0^5"
        assert run("build", "1,2,3,8", "--use", "4:0,2,4")[0] == EXIT_NO_DECOMP

    def test_override_errors(self):
        assert run("build", "1,2,3,5", "--use", "4:0,2,3", "--policy", "allow-direct")[0] == EXIT_NOT_POLY
        assert run("build", "1,2,3,5", "--use", "4:1,1,1")[0] == EXIT_INPUT
        assert run("build", "1,2,3,5", "--use", "nonsense")[0] == EXIT_INPUT

    def test_json_schema(self):
        code, text = run("build", "2,3,7,35", "--format", "json")
        data = json.loads(text)
        jsonschema.validate(data, SYSTEM_SCHEMA)
        assert code == EXIT_OK and len(data["polynomials"]) == 3

    def test_deterministic(self):
        assert run("build", "2,3,7,35", "--format", "json") == run("build", "2,3,7,35", "--format", "json")


class TestVerify:
    def test_pass(self):
        code, text = run("verify", "1,2,3", "--primes", "5,7")
        assert code == EXIT_OK and "overall: PASS" in text

    def test_empirical_levels_marked(self):
        code, text = run("verify", "1,2,3,8", "--policy", "allow-direct", "--use", "4:0,2,4", "--primes", "5,7")
        assert code == EXIT_OK
        assert "empirical_levels: [4]" in text and "empirical" in text.split("notices:")[1]

    def test_not_prime(self, capsys):
        code, _ = run("verify", "1,2,3", "--primes", "4")
        assert code == EXIT_INPUT and "4 is not prime" in capsys.readouterr().err

    def test_bad_trials(self):
        assert run("verify", "1,2,3", "--trials", "0")[0] == EXIT_INPUT

    def test_json(self):
        code, text = run("verify", "1,2,3,5", "--primes", "5", "--format", "json")
        data = json.loads(text)
        jsonschema.validate(data, SYSTEM_SCHEMA)
        assert data["verification"]["overall"] == "PASS"

    def test_failure_exit(self, monkeypatch):
        import stci.cli as cli
        from stci.polyring import term

        real = cli._build

        def corrupted(config):
            s = real(config)
            return s.replace(1, s.polys[1] + term(4, 1, x1=3))

        monkeypatch.setattr(cli, "_build", corrupted)
        code, text = run("verify", "1,2,3", "--primes", "5")
        assert code == EXIT_VERIFY and "overall: FAIL" in text


class TestScan:
    def test_one_two_three_family(self):
        code, text = run("scan", "1,2,3,M", "--range", "4..12")
        rows = text.splitlines()
        assert code == EXIT_OK and len(rows) == 9
        assert rows[0].startswith("1,2,3,4 | 3:(1,0,2) 4:(0,1,2) |")
        assert rows[1].startswith("1,2,3,5 | 3:(1,0,2) 4:(1,0,2) |")
        for c in (2, 3, 4):
            assert f"4:(0,0,{c})" in rows[3 * c - 4]
        for c in (2, 3):
            assert f"4:(2,0,{c + 1})" in rows[3 * c - 3]

    @pytest.mark.parametrize("M", [4, 5, 9, 20])
    def test_singleton_matches_build_summary(self, M):
        scan = run("scan", "1,2,3,M", "--range", f"{M}..{M}")
        build = run("build", f"1,2,3,{M}", "--summary")
        assert scan == build

    def test_invalid_rows_skipped(self):
        code, text = run("scan", "2,4,M", "--range", "5..7")
        rows = text.splitlines()
        assert code == EXIT_OK and len(rows) == 3
        assert all("skipped" in r for r in rows)
        assert "gcd" in rows[1]

    def test_failed_rows(self):
        code, text = run("scan", "1,3,M", "--range", "4..5")
        assert code == EXIT_OK and "failed:" in text.splitlines()[0]

    def test_step_and_verify(self):
        code, text = run("scan", "2,3,M", "--range", "7..9", "--step", "2", "--verify", "--primes", "5")
        rows = text.splitlines()
        assert code == EXIT_OK and [r.split(" |")[0] for r in rows] == ["2,3,7", "2,3,9"]
        assert all(r.endswith("| PASS") for r in rows)

    @pytest.mark.parametrize("argv", [
        ("scan", "1,2,3", "--range", "4..5"),
        ("scan", "M,2,M", "--range", "4..5"),
        ("scan", "1,2,M", "--range", "5..4"),
        ("scan", "1,2,M", "--range", "3..5", "--step", "0"),
    ])
    def test_bad_family(self, argv):
        assert run(*argv)[0] == EXIT_INPUT

    def test_family_spec(self):
        assert FamilySpec(("1", "M"), 2, 6, 2).instances() == [(1, 2), (1, 4), (1, 6)]


class TestEmit:
    def test_json_file(self, tmp_path):
        path = tmp_path / "out.json"
        code, text = run("emit", "1,2,3", "--format", "json", "-o", str(path))
        data = json.loads(path.read_text())
        jsonschema.validate(data, SYSTEM_SCHEMA)
        assert code == EXIT_OK and text == "" and len(data["polynomials"]) == 2

    def test_big_integers_are_strings(self):
        code, text = run("emit", "1,60,3541", "--format", "json")
        data = json.loads(text)
        coeffs = [int(t["coeff"]) for t in data["polynomials"][1]["terms"]]
        assert code == EXIT_OK and max(abs(c) for c in coeffs) > 2 ** 53

    def _assignments(self, text, pattern):
        return dict(re.findall(pattern, text, re.M))

    def test_m2_parses(self):
        code, text = run("emit", "1,2,3,5", "--format", "m2")
        assert code == EXIT_OK and "R = QQ[x0,x1,x2,x3,x4];" in text
        assert "I = ideal(F1, F2, F3);" in text
        _, plain = run("build", "1,2,3,5")
        polys = self._assignments(text, r"^(F\d+) = (.*);$")
        xs = sp.symbols("x0:5")
        for (name, body), line in zip(sorted(polys.items()), plain.splitlines()):
            assert sp.expand(sp.sympify(body.replace("^", "**")) - sp.sympify(line.replace("^", "**"))) == 0
            assert sp.Poly(sp.sympify(body.replace("^", "**")), *xs).free_symbols <= set(xs)

    def test_singular_parses(self):
        code, text = run("emit", "2,3,7", "--format", "singular")
        assert code == EXIT_OK and "ring R = 0,(x0,x1,x2,x3),dp;" in text
        polys = self._assignments(text, r"^poly (F\d+) = (.*);$")
        assert set(polys) == {"F1", "F2"}
        for body in polys.values():
            sp.Poly(sp.sympify(body.replace("^", "**")), *sp.symbols("x0:4"))

    def test_text_plane(self):
        assert run("emit", "1,2", "--format", "text") == (EXIT_OK, "x1^2-x2*x0\n")

    def test_unwritable(self, tmp_path):
        assert run("emit", "1,2,3", "-o", str(tmp_path / "missing" / "x.txt"))[0] == EXIT_IO


class TestBatchAndConfig:
    def test_batch_file(self, tmp_path):
        batch = tmp_path / "curves.txt"
        batch.write_text("# two curves\n1,2,3\n\n1,2  # plane\n")
        code, text = run("build", f"@{batch}")
        assert code == EXIT_OK and text == "x1^2-x2*x0\nx2^3-2*x1*x2*x3+x3^2*x0\nx1^2-x2*x0\n"

    def test_missing_batch(self, tmp_path):
        assert run("build", f"@{tmp_path / 'nope'}")[0] == EXIT_IO

    def test_env_defaults(self, tmp_path, monkeypatch):
        cfg = tmp_path / "stci.json"
        cfg.write_text(json.dumps({"policy": "allow-direct", "format": "latex"}))
        monkeypatch.setenv("STCI_CONFIG", str(cfg))
        code, text = run("build", "1,3,5,12")
        assert code == EXIT_OK and text.startswith("F_{1} = ")

    def test_bad_env(self, tmp_path, monkeypatch):
        cfg = tmp_path / "stci.json"
        cfg.write_text("{not json")
        monkeypatch.setenv("STCI_CONFIG", str(cfg))
        assert run("build", "1,2,3")[0] == EXIT_INPUT

    def test_parsers(self):
        assert parse_range("4..12") == (4, 12)
        assert parse_override("4:0,2,4")[1].gamma == 4
        with pytest.raises(InputError):
            parse_range("4-12")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stci", "build", "1,2,3"], capture_output=True, text=True,
                          env={**os.environ, "STCI_CONFIG": ""})
    assert proc.returncode == 0 and proc.stdout == "x1^2-x2*x0\nx2^3-2*x1*x2*x3+x3^2*x0\n"
