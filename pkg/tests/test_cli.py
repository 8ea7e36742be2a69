import csv
import io
import json
import subprocess
import sys

import pytest

from conftest import fixture
from lazcad.cli import InputError, main, parse_input


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, text, name="in.txt"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_input():
    inp = parse_input("vars: u v\n# comment\npoly: u*v - 1  # trailing\npoly: v^2\nec: 2\n")
    assert inp.variables == ["u", "v"]
    assert [str(p) for p in inp.polynomials] == ["u*v - 1", "v^2"]
    assert inp.ec == [1]


@pytest.mark.parametrize("text, where", [
    ("vars: x y\npoly: x + * y\n", "in:2:11"),
    ("poly: x\n", "in:1:1"),
    ("vars: x\npoly: x\nec: 3\n", "in:3:1"),
    ("vars: x\nfoo: 1\n", "in:2:1"),
    ("vars: x y\npoly: x + w\n", "in:2:"),
])
def test_parse_errors_have_positions(text, where):
    with pytest.raises(InputError, match=where):
        parse_input(text, "in")


def test_project_multi_ec(capsys):
    code, out, _ = cli(capsys, "project", fixture("surface.txt"), "--operator", "multi-ec")
    assert code == 0
    assert "level 4 (z): {z - u^2, v^2*z - u*y}" in out
    assert "level 3 (y): {y - u*v^2}" in out
    assert "level 2 (v): {v}" in out and "level 1 (u): {u}" in out


def test_project_csv_and_json(capsys):
    code, out, _ = cli(capsys, "project", fixture("surface.txt"), "--operator", "lazard", "--ec-mode", "single",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and {r["level"]: r["polynomials"] for r in rows}["3"] == "2"
    code, out, _ = cli(capsys, "project", fixture("circle.txt"), "--format", "json")
    data = json.loads(out)
    assert data["levels"][1]["polys"] == ["x^2 - 1"]


def test_project_one_variable(capsys, tmp_path):
    code, out, _ = cli(capsys, "project", write(tmp_path, "vars: x\npoly: x^2 - 2\n"))
    assert code == 0 and "empty" in out


def test_malformed_expression(capsys, tmp_path):
    code, _, err = cli(capsys, "project", write(tmp_path, "vars: x y\npoly: x^^2\n"))
    assert code == 1 and "in.txt:2:" in err


def test_cad_circle(capsys, tmp_path):
    out_file = str(tmp_path / "cad.json")
    code, out, _ = cli(capsys, "cad", fixture("circle.txt"), "--verify", "5", "--out", out_file)
    assert code == 0
    assert "13 cells" in out and "0 violations" in out
    data = json.load(open(out_file))
    assert data["summary"]["total"] == 13 and data["verification"]["violations"] == []


def test_cad_not_well_oriented(capsys):
    code, _, err = cli(capsys, "cad", fixture("nullify.txt"), "--operator", "mccallum")
    assert code == 2 and "not well-oriented" in err and "cell" in err


def test_cad_deterministic(capsys):
    runs = [cli(capsys, "cad", fixture("circle.txt"), "--verify", "3", "--seed", "5", "--format", "json")[1]
            for _ in range(2)]
    assert runs[0] == runs[1]


def test_valuate(capsys):
    code, out, _ = cli(capsys, "valuate", fixture("residue.txt"), "--above", "0,1,0")
    assert code == 0 and out.strip() == "(0,0,1); w + 1"
    code, out, _ = cli(capsys, "valuate", fixture("residue.txt"), "--point", "0,1,0,1")
    assert out.strip() == "(0,0,1,0)"


def test_valuate_constant_zero_and_mismatch(capsys, tmp_path):
    code, out, _ = cli(capsys, "valuate", write(tmp_path, "vars: x y\npoly: 4\n"), "--point", "1,2")
    assert code == 0 and out.strip() == "(0,0)"
    code, _, err = cli(capsys, "valuate", write(tmp_path, "vars: x y\npoly: 0\n"), "--point", "1,2")
    assert code == 1 and "zero polynomial" in err
    code, _, err = cli(capsys, "valuate", fixture("residue.txt"), "--point", "1,2")
    assert code == 1 and "coordinates" in err


def test_residue_alias(capsys):
    code, out, _ = cli(capsys, "residue", fixture("residue.txt"), "--above", "0,1,0")
    assert out.strip() == "(0,0,1); w + 1"


def test_compare_surface(capsys):
    code, out, _ = cli(capsys, "compare", fixture("surface.txt"))
    rows = {(r["operator"], r["ec_mode"], r["level"]): r for r in csv.DictReader(io.StringIO(out))}
    assert code == 0
    assert rows[("lazard", "single", "3")]["polynomials"] == "2"
    assert rows[("brown_mccallum", "multi", "3")]["polynomials"] == "1"


def test_compare_records_failures(capsys):
    code, out, _ = cli(capsys, "compare", fixture("nullify.txt"), "--cells")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert any(r["operator"] == "mccallum" and r["status"].startswith("error") for r in rows)
    assert any(r["operator"] == "brown_mccallum" and r["status"] == "ok" for r in rows)


def test_compare_empty(capsys, tmp_path):
    code, _, _ = cli(capsys, "compare", write(tmp_path, "vars: x y\n"))
    assert code == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lazcad", "cad", fixture("circle.txt")], capture_output=True,
                          text=True)
    assert proc.returncode == 0 and "13 cells" in proc.stdout
