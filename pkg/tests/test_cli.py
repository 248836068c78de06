import json
import subprocess
import sys

import pytest

from fcrystals.arith import FieldTower
from fcrystals.cli import run
from fcrystals.isocrystal import example_block
from fcrystals.serialize import isocrystal_to_json, to_plain

NEEDS_F4 = json.dumps({"field": {"p": 2, "m": 1}, "maps": [
    {"phi": [[[0], [0]], [[0], [0]]], "psi": [[[0], [1]], [[1], [1]]], "sigma": 1, "tau": 0}]})


def call(capsys, *argv):
    code = run(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_newton_example(capsys, tmp_path):
    code, out = call(capsys, "newton", "--example", "block")
    assert code == 0 and out == {"certified": True, "nu": ["3/2", "3/2", "1"]}
    path = tmp_path / "b.json"
    path.write_text(json.dumps(to_plain(isocrystal_to_json(example_block(1, FieldTower(2))))))
    code, out = call(capsys, "newton", "--b", f"@{path}")
    assert code == 0 and out == {"certified": True, "nu": ["3/2", "3/2", "1"]}
    code, out = call(capsys, "newton", "--example", "conjugate")
    assert code == 0 and out["nu"] == ["3/2", "3/2", "1"]


def test_newton_from_matrix_file(capsys, tmp_path):
    code, out = call(capsys, "construct", "--nu", "1/2,1/2", "--mu", "1,0")
    path = tmp_path / "b.json"
    path.write_text(json.dumps(out["isocrystal"]))
    code, out = call(capsys, "newton", "--b", f"@{path}")
    assert code == 0 and out["nu"] == ["1/2", "1/2"]


def test_construct_then_hodge_and_mazur(capsys, tmp_path):
    path = tmp_path / "w.json"
    assert run(["construct", "--nu", "1/2,1/2", "--mu", "1,0", "--output", str(path)]) == 0
    code, out = call(capsys, "hodge", "--witness", f"@{path}")
    assert code == 0 and out == {"mu": ["1", "0"], "matches_witness": True}
    code, out = call(capsys, "mazur", "--witness", f"@{path}")
    assert code == 0 and out["holds"] and out["nu"] == ["1/2", "1/2"]


def test_construct_gsp_reverifies(capsys, tmp_path):
    path = tmp_path / "w.json"
    assert run(["construct-gsp", "--nu", "1/2,1/2,1/2,1/2", "--mu", "1,1,0,0",
                "--output", str(path)]) == 0
    code, out = call(capsys, "hodge", "--witness", f"@{path}")
    assert code == 0 and out["mu"] == ["1", "1", "0", "0"]


def test_construct_violation_exit_1(capsys):
    code, out = call(capsys, "construct", "--nu", "1,0", "--mu", "1,1")
    assert code == 1 and out["status"] == "mazur-violation"


def test_chain_build_gsp(capsys):
    code, out = call(capsys, "chain-build", "--group", "gsp", "--n", "2", "--r", "4",
                     "--type", "0", "--nu", "1,1,1,1")
    assert code == 0 and out["group"] == "GSp" and out["chain"]["defect"] == 0
    code, out = call(capsys, "chain-build", "--group", "gsp", "--n", "2", "--r", "4",
                     "--type", "0", "--nu", "3/2,3/2,1/2,1/2")
    assert code == 1 and out["status"] == "mazur-violation"


def test_chain_build_then_extend(capsys, tmp_path):
    code, out = call(capsys, "chain-build", "--nu", "1/2,1/2", "--r", "1", "--type", "0")
    assert code == 0
    path = tmp_path / "c.json"
    path.write_text(json.dumps(out["chain"]))
    code, out = call(capsys, "chain-extend", "--nu", "1/2,1/2", "--r", "1",
                     "--chain", f"@{path}", "--type", "0,1")
    assert code == 0 and sorted(out["chain"]["lattices"]) == ["0", "1"]
    # the wrong r is rejected as a verified negative
    code, out = call(capsys, "chain-extend", "--nu", "1/2,1/2", "--r", "2",
                     "--chain", f"@{path}")
    assert code in (1, 2)


def test_incidence_and_budget(capsys):
    code, out = call(capsys, "incidence", "--diagram", NEEDS_F4, "--transcript")
    assert code == 0 and out["verified"] and out["extension_degree"] == 2
    assert out["transcript"][0]["step"] == "single space"
    code, out = call(capsys, "incidence", "--diagram", NEEDS_F4, "--m-max", "1")
    assert code == 3 and out["status"] == "budget"


def test_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("FCRYSTALS_BUDGET", "2,1")
    code, out = call(capsys, "incidence", "--diagram", NEEDS_F4)
    assert code == 3


def test_adm_and_perm(capsys):
    code, out = call(capsys, "adm", "--mu", "1,0", "--check-perm")
    assert code == 0 and out["size"] == 3 and out["equals_perm"]
    code, out = call(capsys, "adm", "--mu", "1,1,0,0", "--group", "gsp")
    assert code == 0 and out["size"] == 13


def test_graded_witness(capsys):
    code, out = call(capsys, "graded-witness", "--mus", "1,0;1,0", "--nu", "1,1")
    assert code == 0 and out["verified"] and len(out["graded_lattice"]) == 2
    code, out = call(capsys, "graded-witness", "--mus", "1,0;1,1", "--nu", "1,1")
    assert code == 1


def test_enumerate(capsys):
    code, out = call(capsys, "enumerate", "--nu", "1/2,1/2", "--a", "1")
    assert code == 0 and out["equal"] and out["predicted"] == [["1", "0"]]


@pytest.mark.parametrize("argv", [
    ["newton", "--b", "[[1,"],
    ["newton"],
    ["construct", "--nu", "1/2,0", "--mu", "1,0"],
    ["adm", "--mu", "1,0", "--group", "so"],
    ["bogus"],
])
def test_invalid_input_exit_2(capsys, argv):
    code = run(argv)
    assert code == 2


def test_malformed_json_is_position_annotated(capsys):
    code, out = call(capsys, "newton", "--b", '{"b": [1, }')
    assert code == 2 and "line 1, column" in out["reason"]


def test_byte_identical_output():
    argv = [sys.executable, "-m", "fcrystals", "chain-build", "--nu", "1/3,1/3,1/3",
            "--r", "1", "--type", "0,1,2", "--transcript"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
