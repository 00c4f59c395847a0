import json
import subprocess
import sys

import pytest

from fpti import fsing
from fpti.cli import main, parse_input
from fpti.errors import NotPrime, ParseError
from fpti.frobenius import fe_root
from fpti.groebner import Submodule, ideal
from fpti.homology import non_cm_locus

CUSP = "char: 2\nvars: x y\nideal:\n  y^2 + x^3\n"
NODE = "char: 2\nvars: x y\nideal: x*y\n"
PLANES = "char: 2\nvars: x y u v\nideal: x*u, x*v, y*u, y*v\n"


def invoke(capsys, tmp_path, text, *argv):
    path = tmp_path / "input.txt"
    path.write_text(text)
    code = main([*argv, "--input", str(path)])
    out = capsys.readouterr()
    return code, out.out, out.err


def as_json(capsys, tmp_path, text, *argv):
    code, out, _ = invoke(capsys, tmp_path, text, *argv, "--format", "json")
    assert code == 0
    return json.loads(out)


def test_parse_cusp_spec():
    spec = parse_input(CUSP)
    assert spec.char == 2 and spec.vars == ["x", "y"]
    assert spec.ideal == ["y^2 + x^3"]
    assert spec.order == "grevlex" and spec.c is None
    ctx, I, c = spec.build()
    assert I.equals(ideal(ctx, ["x^3 + y^2"]))


def test_parse_inline_generators_comments_and_c():
    spec = parse_input("# header\nchar: 3\nvars: x, y\norder: lex top\nideal: x^2, x*y  # two\nc: x + y\n")
    assert spec.ideal == ["x^2", "x*y"]
    assert (spec.order, spec.module_order) == ("lex", "top")
    assert spec.c == "x + y"


def test_parse_not_prime():
    spec = parse_input("char: 6\nvars: x\nideal: x\n")
    with pytest.raises(NotPrime):
        spec.build()


@pytest.mark.parametrize("text,line", [
    ("char: 2\nvars: x\nideal:\n", 3),
    ("char: 2\nvars: x\nideal: x\nbogus: 1\n", 4),
    ("char: two\nvars: x\nideal: x\n", 1),
    ("char: 2\nvars: x\nvars: y\nideal: x\n", 3),
    ("char: 2\nvars: x\norder: revlex\nideal: x\n", 3),
    ("char: 2\nvars: x\nideal x\n", 3),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_input(text)
    assert info.value.line == line


def test_parse_missing_key():
    with pytest.raises(ParseError):
        parse_input("char: 2\nideal: x\n")


def test_polynomial_error_points_at_source():
    spec = parse_input("char: 2\nvars: x y\nideal:\n  x + y\n  x + $\n")
    with pytest.raises(ParseError) as info:
        spec.build()
    assert info.value.line == 5
    assert info.value.column == 7


def test_tau_on_cusp(capsys, tmp_path):
    doc = as_json(capsys, tmp_path, CUSP, "tau")
    assert doc["schema"] == 1
    assert doc["command"] == "tau"
    assert doc["ring"] == {"char": 2, "vars": ["x", "y"], "order": "grevlex pot"}
    assert doc["result"]["generators"] == ["x", "y"]
    assert doc["result"]["c"] == "x^2"


def test_hsl_on_cusp(capsys, tmp_path):
    result = as_json(capsys, tmp_path, CUSP, "hsl", "-j", "1", "--emax", "5")["result"]
    assert result["eta"] == 1
    assert result["loci"] == [["x", "y"]]
    assert result["chain"] == [["1"], ["x", "y"], ["x", "y"]]


@pytest.mark.parametrize("argv,key,want", [
    (["gb"], "generators", ["x^3 + y^2"]),
    (["froot", "-e", "1"], "generators", ["x", "y"]),
    (["star", "--u", "y^2 + x^3"], "generators", ["x^3 + y^2"]),
    (["ext", "-i", "1"], "frobenius", [["x^3 + y^2"]]),
    (["sandwich"], "lower", ["x", "y"]),
    (["noncm"], "generators", ["1"]),
    (["finjective"], "generators", ["x", "y"]),
])
def test_commands_on_cusp(capsys, tmp_path, argv, key, want):
    assert as_json(capsys, tmp_path, CUSP, *argv)["result"][key] == want


def test_star_chain_from_cli(capsys, tmp_path):
    text = "char: 2\nvars: x y\nideal: y^2 + x^3, x^2\n"
    result = as_json(capsys, tmp_path, text, "star", "--u", "y^2 + x^3")["result"]
    assert result["generators"] == ["x", "y"]
    assert result["iterations"] == 3


def test_sandwich_on_planes(capsys, tmp_path):
    result = as_json(capsys, tmp_path, PLANES, "sandwich")["result"]
    assert result["upper"] == ["1"]
    assert result["exact"] is False


def test_text_output(capsys, tmp_path):
    code, out, _ = invoke(capsys, tmp_path, CUSP, "tau")
    assert code == 0
    assert "generators:\n  x\n  y\n" in out
    assert out.startswith("command: tau\n")


def test_exit_code_input_error(capsys, tmp_path):
    code, out, err = invoke(capsys, tmp_path, "char: 2\nvars: x\nideal:\n", "gb")
    assert code == 1 and out == "" and "error" in err
    code, _, _ = invoke(capsys, tmp_path, "char: 4\nvars: x\nideal: x\n", "gb")
    assert code == 1
    assert main(["gb", "--input", str(tmp_path / "missing.txt")]) == 1


def test_exit_code_no_test_element(capsys, tmp_path):
    code, _, err = invoke(capsys, tmp_path, NODE + "c: x\n", "tau")
    assert code == 2 and "error" in err
    code, _, _ = invoke(capsys, tmp_path, "char: 2\nvars: x y\nideal: x^2\n", "tau")
    assert code == 2


def test_exit_code_resource_cap(capsys, tmp_path):
    code, _, _ = invoke(capsys, tmp_path, CUSP, "tau", "--cap-iterations", "1")
    assert code == 3
    code, out, _ = invoke(capsys, tmp_path, CUSP, "hsl", "-j", "1", "--emax", "1")
    assert code == 3
    assert "chain:" in out


@pytest.mark.parametrize("argv", [["gb"], ["froot"], ["star", "--u", "x"], ["ext", "-i", "1"], ["tau"],
                                  ["sandwich"], ["hsl", "-j", "1"]])
def test_verify_flag(capsys, tmp_path, argv):
    doc = as_json(capsys, tmp_path, CUSP, *argv, "--verify")
    assert doc["result"]["verified"] is True


def test_determinism_byte_identical(capsys, tmp_path):
    for argv in (["tau"], ["hsl", "-j", "1"], ["sandwich"], ["gb", "--format", "json"]):
        first = invoke(capsys, tmp_path, NODE, *argv)
        second = invoke(capsys, tmp_path, NODE, *argv)
        assert first == second


ROUND_TRIP = [
    (CUSP, ["tau"], "generators", lambda I: fsing.global_pti_cm(I).Z),
    (PLANES, ["noncm"], "generators", non_cm_locus),
    (PLANES, ["sandwich"], "lower", lambda I: fsing.pti_sandwich(I).lower),
    (CUSP, ["froot", "-e", "2"], "generators", lambda I: fe_root(I, 2)),
]


@pytest.mark.parametrize("text,argv,key,compute", ROUND_TRIP)
def test_printed_ideals_round_trip(capsys, tmp_path, text, argv, key, compute):
    gens = as_json(capsys, tmp_path, text, *argv)["result"][key]
    ctx, I, _ = parse_input(text).build()
    printed = Submodule.ideal(ctx, [ctx.parse(g) for g in gens])
    assert printed.equals(compute(I))


def test_module_entry_point(tmp_path):
    path = tmp_path / "cusp.txt"
    path.write_text(CUSP)
    out = subprocess.run([sys.executable, "-m", "fpti", "tau", "--input", str(path)],
                         capture_output=True, text=True, check=True)
    assert "  x\n  y\n" in out.stdout


def test_stdin_input(monkeypatch, capsys):
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO(CUSP))
    assert main(["gb"]) == 0
    assert "x^3 + y^2" in capsys.readouterr().out
