import json
from pathlib import Path

from koszulres.cli import main
from koszulres.exactfield import parse_ring_file, serialize_ring_file

DATA = Path(__file__).resolve().parents[1] / "src" / "koszulres" / "data"
CLASS_T = DATA / "classT_example.ring"
CI3 = DATA / "ci3_example.ring"
CI2 = DATA / "ci2_example.ring"


def run(*argv):
    return main(list(argv))


def test_betti_raw_class_t(capsys):
    assert run("betti", "--class-t", "4,6,3", "--n", "3", "--order", "7",
               "--no-timestamp") == 0
    out = capsys.readouterr().out
    assert "betti: 1,3,7,16,37,86,200,465" in out
    assert "b: 1,3,6,10,15,21" in out


def test_betti_raw_ci(capsys):
    assert run("betti", "--ci", "3", "--n", "3", "--order", "5",
               "--no-timestamp") == 0
    assert "betti: 1,3,6,10,15,21" in capsys.readouterr().out


def test_betti_order_zero(capsys):
    assert run("betti", "--class-t", "4,6,3", "--order", "0",
               "--no-timestamp") == 0
    assert "betti: 1\n" in capsys.readouterr().out


def test_betti_from_ring_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert run("betti", "--ring", str(CLASS_T), "--order", "8",
               "--no-timestamp", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["betti"] == [1, 3, 7, 16, 37, 86, 200, 465, 1081]
    assert doc["mode"] == "T"
    assert doc["sequences"]["l"][:6] == [1, 4, 13, 41, 129, 406]
    assert any("l'_5" in note for note in doc["notes"])
    # ring echo reparses to the same structure
    assert parse_ring_file(doc["ring"]) == parse_ring_file(CLASS_T.read_text())


def test_resolve_class_t(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert run("resolve", "--ring", str(CLASS_T), "--max-degree", "5",
               "--no-timestamp", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["ranks"] == [1, 3, 7, 16, 37, 86]
    assert doc["verification"]["passed"] is True
    assert doc["sign_regime"] == "diagonal (-1)^(deg1+deg2), phi +1"
    assert doc["schema_version"] == 1
    # block inventory names the tree monomials
    assert doc["blocks"][2] == [["1", 0, 1, 2], ["X[1,1]", 2, 4, 0]]


def test_resolve_ci(tmp_path):
    out = tmp_path / "ci.json"
    assert run("resolve", "--ring", str(CI2), "--no-timestamp",
               "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["ranks"] == [1, 2, 3, 4, 5, 6, 7]
    assert doc["mode"] == "CI"


def test_resolve_emit_matrices(tmp_path):
    out = tmp_path / "m.json"
    assert run("resolve", "--ring", str(CI2), "--max-degree", "3",
               "--emit-matrices", "--no-timestamp", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert set(doc["matrices"]) == {"d_1", "d_2", "d_3"}
    assert doc["matrices"]["d_1"]["entries"]["0,0"] == "x"


def test_verify_with_oracle(tmp_path):
    out = tmp_path / "o.json"
    assert run("verify", "--ring", str(CI3), "--max-degree", "5", "--oracle",
               "--no-timestamp", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    names = [s["name"] for s in doc["verification"]["sections"]]
    assert "oracle" in names


def test_deterministic_reports(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run("resolve", "--ring", str(CLASS_T), "--max-degree", "4",
                   "--no-timestamp", "--out", str(path)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_char_override(tmp_path):
    out = tmp_path / "p2.json"
    assert run("verify", "--ring", str(CLASS_T), "--max-degree", "4",
               "--char", "2", "--no-timestamp", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["characteristic"] == 2
    assert doc["verification"]["passed"] is True


def test_demo_classt(capsys):
    assert run("demo-classt", "--max-degree", "4", "--no-timestamp") == 0
    out = capsys.readouterr().out
    assert "b:   1,3,6,10,15,21" in out
    assert "y*z*e[1,2]" in out           # gamma_2 entry values
    assert "alpha_{2,2}" in out
    assert "suspected typo" in out


def test_demo_betti_through_465(capsys):
    assert run("demo-classt", "--no-timestamp") == 0
    out = capsys.readouterr().out
    assert "betti: 1,3,7,16,37,86,200,465" in out


# -- exit codes ---------------------------------------------------------------

def test_exit_code_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.ring"
    bad.write_text("characteristic = 7\nvariables = x, y\nideal = x^2\n")
    assert run("verify", "--ring", str(bad)) == 2
    assert "not Artinian" in capsys.readouterr().err


def test_exit_code_missing_file():
    assert run("verify", "--ring", "/nonexistent/r.ring") == 2


def test_exit_code_unknown_key(tmp_path):
    bad = tmp_path / "bad.ring"
    bad.write_text("characteristic = 7\nvariables = x\nideal = x^2\nzz = 1\n")
    assert run("verify", "--ring", str(bad)) == 2


def test_exit_code_class_failure(capsys):
    assert run("verify", "--ring", str(CLASS_T), "--mode", "CI",
               "--max-degree", "4") == 3
    assert "class verification failure" in capsys.readouterr().err


def test_exit_code_math_failure(tmp_path):
    assert run("verify", "--ring", str(CLASS_T), "--max-degree", "4",
               "--sign-flip", "--no-timestamp") == 4


def test_roundtrip_of_shipped_fixture():
    text = CLASS_T.read_text()
    assert serialize_ring_file(parse_ring_file(text)) == text
