import argparse
import json
import subprocess
import sys

import jsonschema
import pytest

from compop import __version__
from compop.cli import load_schema, parse_complex, parse_interval, run

SCHEMA = load_schema()

COMMANDS = [
    ["classify", "x^2+1"],
    ["classify", "involution[cos(x)/2]"],
    ["symbol-check", "sqrt(x^2+1)"],
    ["orbit", "sqrt(x^2+1)", "--horizon", "12", "--seminorm", "2", "--grid", "20:801"],
    ["cesaro", "-x", "--f", "odd_gaussian", "--horizon", "10", "--grid", "10:401"],
    ["phistar", "x+exp(-x^2)", "--x", "0", "--x", "-3"],
    ["eigen-sqrt", "--lambda", "0.3+0.4i", "--depth", "20"],
    ["resolvent", "x+1", "--lambda", "2", "--horizon", "40", "--grid", "15:601"],
    ["resolvent", "sqrt(x^2+1)", "--lambda", "i", "--grid", "15:301"],
    ["zak", "--x", "0.25", "--omega", "0.5"],
    ["zak", "--fourier", "--omega", "0.5"],
    ["translation-witness", "--omega", "0.25"],
    ["dilation-witness", "--a", "2", "--lambda", "1/2"],
    ["point-spectrum", "-x"],
    ["involution", "cos(x)/2", "--x", "1.5"],
]


def run_json(capsys, argv):
    code, _ = run(argv + ["--json"])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a))
def test_reports_validate(capsys, argv):
    code, rep, _ = run_json(capsys, argv)
    assert code == 0
    jsonschema.validate(rep, SCHEMA)
    assert rep["command"] == argv[0] and rep["version"] == __version__


@pytest.mark.parametrize("argv", COMMANDS[:4] + COMMANDS[6:8] + COMMANDS[12:], ids=lambda a: " ".join(a))
def test_reruns_are_byte_identical(capsys, argv):
    texts = []
    for _ in range(2):
        assert run(argv + ["--json"])[0] == 0
        rep = json.loads(capsys.readouterr().out)
        rep["timing_ms"] = 0
        texts.append(json.dumps(rep, sort_keys=True))
    assert texts[0] == texts[1]


def test_classify_example(capsys):
    _, rep, _ = run_json(capsys, ["classify", "x^2+1"])
    assert rep["outputs"]["power_bounded"] == "yes"
    assert "R2.even_no_fixed_points" in rep["citations"]


def test_negative_symbol_is_not_a_flag(capsys):
    _, rep, _ = run_json(capsys, ["classify", "-x+3"])
    assert rep["outputs"]["power_bounded"] == "yes"


def test_parse_error_exit(capsys):
    assert run(["classify", "zzz"])[0] == 1
    assert "column 1" in capsys.readouterr().err


def test_unknown_flag_exit(capsys):
    assert run(["classify", "x", "--bogus"])[0] == 1


@pytest.mark.parametrize("argv", [
    ["eigen-sqrt", "--lambda", "1"],
    ["resolvent", "x+1", "--lambda", "1"],
    ["classify", "exp(-x^2)"],
    ["involution", "sin(x)/2"],
])
def test_precondition_exit(capsys, argv):
    assert run(argv)[0] == 2
    assert capsys.readouterr().err.strip()


def test_eigen_out_and_csv(tmp_path, capsys):
    out, csv = tmp_path / "f.json", tmp_path / "f.csv"
    assert run(["eigen-sqrt", "--lambda", "0.5", "--depth", "80", "--out", str(out), "--csv", str(csv)])[0] == 0
    rep = json.loads(out.read_text())
    jsonschema.validate(rep, SCHEMA)
    o = rep["outputs"]
    assert o["residual"] <= 1e-8 and len(o["function"]["pieces"]) == 81
    assert csv.read_text().splitlines()[0] == "x,re,im"
    assert "residual" in capsys.readouterr().out


def test_table_output(capsys):
    assert run(["classify", "x+1"])[0] == 0
    text = capsys.readouterr().out
    assert "mean_ergodic" in text and "no" in text


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "compop.cli", "classify", "x", "--json"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["outputs"]["power_bounded"] == "yes"


def test_flag_parsers():
    assert parse_complex("0.3+0.4i") == 0.3 + 0.4j
    assert parse_complex("-i") == -1j
    assert parse_complex("1/2") == 0.5
    assert parse_interval("-1:2.5") == (-1.0, 2.5)
    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex("abc")
