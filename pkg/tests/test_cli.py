import json
import subprocess
import sys
from fractions import Fraction

import pytest

from orbiqc import cli
from orbiqc import serialize as ser
from orbiqc.jfunction import j_series
from orbiqc.ring import companion_matrix, multiplication_table, p_matrix
from orbiqc.sectors import Weights, sector_set


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    data = json.loads(out)
    assert data["schema"] == "orbiqc/1"
    return code, data


def test_ring_p1(capsys):
    code, data = run_json(capsys, "ring", "--weights", "1,1")
    assert code == 0
    assert data["matrix"] == [["0", "Q"], ["1", "0"]]
    assert data["top_relation"] == "P^2 = Q"


def test_ring_p112(capsys):
    code, data = run_json(capsys, "ring", "--weights", "1,1,2")
    assert data["matrix"][0][3] == "1/2*Q^(1/2)"
    assert data["top_relation"] == "P^4 = 1/4*Q"
    assert data["chen_ruan"]["3,3"] == ["0", "0", "1", "0"]


def test_ring_latex(capsys):
    code, out, _ = run(capsys, "ring", "--weights", "1,1", "--format", "latex")
    assert code == 0 and "\\begin{pmatrix}" in out and "0 & Q" in out


def test_ring_text_with_t(capsys):
    code, out, _ = run(capsys, "ring", "--weights", "1,1,2", "--with-t", "--table")
    assert "P^4 = 1/4*Qe^t" in out and "1_1/2 o 1_1/2 = " in out


def test_sectors(capsys):
    code, data = run_json(capsys, "sectors", "--weights", "1,1,2")
    assert data["F"] == [{"f": "0", "dim": 2, "age": "0"}, {"f": "1/2", "dim": 0, "age": "1"}]
    assert data["pairing"][0][2] == "1/2" and data["pairing"][3][3] == "1/2"
    code, data = run_json(capsys, "sectors", "--weights", "1,1")
    assert len(data["F"]) == 1 and data["F"][0]["dim"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["sectors", "--weights", "0,1"],
        ["sectors", "--weights", "1,a"],
        ["jfun", "--weights", "1,1", "--degree-max", "-1"],
        ["classify", "--weights", "1,1,1"],
        ["classify", "--reid-tai", "2-1,1"],
        ["verify", "--corpus", "huge"],
        ["bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_positive_weights_message(capsys):
    _, _, err = run(capsys, "sectors", "--weights", "0,1")
    assert "weights must be positive" in err


def test_jfun(capsys):
    code, out, _ = run(capsys, "jfun", "--weights", "1,1,2", "--degree-max", "1", "--verify-pf", "--derive-ring")
    assert code == 0
    assert "pf: PASS" in out and "ring from J: PASS" in out
    code, data = run_json(capsys, "jfun", "--weights", "1,1,2", "--degree-max", "1", "--verify-pf")
    assert [t["degree"] for t in data["terms"]] == ["0", "1/2", "1"]
    assert data["pf"]["passed"] is True


def test_classify_x7(capsys):
    code, data = run_json(capsys, "classify", "--weights", "1,1,1,1,1,2", "--degrees", "7")
    assert code == 0
    assert data["k_X"] == 0 and data["verdict_mirror"] is True and data["terminal"] is True
    assert data["k_f"]["1/2"] == -2


def test_classify_batch_and_reid_tai(tmp_path, capsys):
    csv = tmp_path / "cis.csv"
    csv.write_text("# CY threefolds\n1,1,1,1,1;5\n1,1,1,2;3\n")
    code, data = run_json(
        capsys, "classify", "--input", str(csv), "--reid-tai", "2:1,1,1", "--reid-tai", "3:1,2", "--jobs", "2"
    )
    assert [r["terminal"] for r in data["results"]] == [True, False]
    assert [r["terminal"] for r in data["reid_tai"]] == [True, False]
    js = tmp_path / "cis.json"
    js.write_text(json.dumps([{"weights": [1, 1, 1, 1, 2], "degrees": [6]}]))
    code, data = run_json(capsys, "classify", "--input", str(js))
    assert data["terminal"] is True


def test_ifun(capsys):
    code, data = run_json(capsys, "ifun", "--ci", "1,1,1,1,1;5", "--degree-max", "3")
    mirror = data["results"][0]["mirror"]
    assert mirror["F"] == "1 + 120*Q + 113400*Q^2 + 168168000*Q^3"
    code, data = run_json(capsys, "ifun", "--weights", "1,1,1,1,1", "--degrees", "4")
    assert data["results"][0]["mirror"]["s"] == "24*Q"
    code, data = run_json(capsys, "ifun", "--weights", "1,1", "--degrees", "3")
    assert "skipped" in data["results"][0]["mirror"]


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--corpus", "small", "--jobs", "2")
    assert code == 0 and "all invariants PASS" in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "check_weights", lambda w, cap, ring_axioms: [f"{w}: broken"])
    code, out, _ = run(capsys, "verify", "--corpus", "small")
    assert code == 1 and out.startswith("FAIL: P(1,1): broken")


def test_deterministic_output(capsys):
    outs = {run(capsys, "ring", "--weights", "1,2,3", "--format", "json")[1] for _ in range(3)}
    assert len(outs) == 1


def test_output_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "ring", "--weights", "1,1", "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["matrix"] == [["0", "Q"], ["1", "0"]]


@pytest.mark.parametrize("ws", [(1, 1), (1, 1, 2), (2, 3), (1, 2, 3)])
def test_json_round_trip(capsys, ws):
    w = Weights(ws)
    text = ",".join(map(str, ws))
    _, ring = run_json(capsys, "ring", "--weights", text)
    assert ser.matrix_from_json(ring["matrix"], w).entries == p_matrix(w).entries
    comp = ser.matrix_from_json(ring["companion"]["matrix"], w, ring["companion"]["basis_scale"])
    assert comp == companion_matrix(w)
    T = multiplication_table(w)
    for key, coords in ring["table"].items():
        a, b = map(int, key.split(","))
        assert ser.class_from_json(coords, w) == T.product(a, b)
    _, secs = run_json(capsys, "sectors", "--weights", text)
    assert [ser.sector_from_json(s, w) for s in secs["F"]] == sector_set(w)
    _, jf = run_json(capsys, "jfun", "--weights", text, "--degree-max", "2")
    J = ser.jseries_from_json(jf["terms"], w, Fraction(jf["degree_cap"]))
    assert J == j_series(w, 2)


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "orbiqc", "ring", "--weights", "1,1"], capture_output=True, text=True
    )
    assert res.returncode == 0 and "P^2 = Q" in res.stdout
