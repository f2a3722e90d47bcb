import io
import json
import subprocess
import sys

import pytest

from hpbergman import cli, maps
from hpbergman.core import Constant, MoebiusMap, SymbolPair, pair_to_json


def pair(f, g, ell=0):
    return pair_to_json(SymbolPair(ell, f, g))


def invoke(monkeypatch, capsys, argv, doc=None):
    if doc is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(doc)))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def test_classify_hermitian_case_II(monkeypatch, capsys):
    code, rep, err = invoke(monkeypatch, capsys, ["classify"], pair(Constant(3), MoebiusMap.affine(1, 1)))
    assert code == 0
    fams = [r["family"] for r in rep["result"]["reports"]]
    assert "HermitianII" in fams and "CaII" in fams
    assert any(s["conjugation"]["kind"] == "Ca" for s in rep["result"]["symmetries"])
    assert "HermitianII" in err


def test_classify_identity(monkeypatch, capsys):
    code, rep, _ = invoke(monkeypatch, capsys, ["classify"], pair(Constant(1), MoebiusMap(1, 0, 0, 1)))
    assert code == 0
    fams = {r["family"] for r in rep["result"]["reports"]}
    assert {"HermitianII", "UnitaryI", "CstarII", "CaII"} <= fams
    assert rep["result"]["interior_fixed_points"] == "all"


def test_classify_obstruction(monkeypatch, capsys):
    code, rep, _ = invoke(monkeypatch, capsys, ["classify"], pair(Constant(1), MoebiusMap.affine(0.5, 1)))
    res = rep["result"]
    assert code == 0 and res["obstruction"] == "NotComplexSymmetric"
    assert res["denjoy_wolff"]["point"] == pytest.approx([2, 0], abs=1e-9)


def test_verify_examples(monkeypatch, capsys):
    code, rep, _ = invoke(monkeypatch, capsys, ["verify", "-n", "5"], {"identity": "reproducing", "ell": 0})
    assert code == 0 and max(r["quad"] for r in rep["rows"]) <= 1e-6
    code, rep, _ = invoke(monkeypatch, capsys, ["verify", "-n", "4"],
                          {"identity": "adjoint_formula", "ell": 0, "mu": 2, "w0": [0, 1]})
    assert code == 0 and rep["verdicts"][0]["residual"] <= 1e-12
    assert rep["adjoint"]["scalar"] == pytest.approx(0.25)


def test_verify_negative_control(monkeypatch, capsys):
    doc = {"identity": "hermitian", "pair": pair(Constant(3 + 1j), MoebiusMap.affine(1, 1))}
    code, rep, _ = invoke(monkeypatch, capsys, ["verify", "-n", "3"], doc)
    assert code == 4
    assert rep["verdicts"][0]["residual"] > 0.1 and not rep["verdicts"][0]["passed"]


@pytest.mark.parametrize("doc", [
    {"identity": "unitary", "pair": pair(Constant(2), MoebiusMap.affine(2, 0))},
    {"identity": "c_selfadjoint", "pair": pair(Constant(1 + 1j), MoebiusMap.affine(1, 1j)), "conjugation": {"kind": "Ca", "a": 0}},
    {"identity": "laplace_isometry", "ell": 1},
])
def test_verify_tags(monkeypatch, capsys, doc):
    code, rep, _ = invoke(monkeypatch, capsys, ["verify", "-n", "3"], doc)
    assert code == 0 and all(v["passed"] for v in rep["verdicts"])


def test_denjoy_wolff(monkeypatch, capsys):
    doc = {"g": {"a": [0.5, 0], "b": [1, 0], "c": [0, 0], "d": [1, 0]}}
    code, rep, _ = invoke(monkeypatch, capsys, ["denjoy-wolff", "--start", "5+3i", "--trace"], doc)
    assert code == 0
    assert rep["result"]["point"] == pytest.approx([2, 0], abs=1e-10)
    assert rep["result"]["iterations"] <= 40 and len(rep["trace"]) == rep["result"]["iterations"] + 1
    doc = {"g": {"a": [1, 0], "b": [1, 0], "c": [0, 0], "d": [1, 0]}, "start": [1, 0]}
    code, rep, _ = invoke(monkeypatch, capsys, ["denjoy-wolff"], doc)
    assert code == 5 and rep["error"]["type"] == "Divergent"


def test_quad_and_laplace(monkeypatch, capsys):
    code, rep, _ = invoke(monkeypatch, capsys, ["quad"], {"ell": 0, "terms": [{"coeff": [1, 0], "point": [1, 0]}]})
    assert code == 0 and abs(rep["result"]["value"][0] - 0.25) <= 1e-8
    code, rep, _ = invoke(monkeypatch, capsys, ["laplace", "--z", "1", "--ell", "0", "-n", "3"])
    assert code == 0 and rep["verdicts"][0]["residual"] <= 1e-12
    assert rep["notes"]


def test_tight_quadrature_budget_exits_4(monkeypatch, capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"quadrature": {"rel_tol": 1e-15, "abs_floor": 0, "max_subdivisions": 16}}))
    doc = {"ell": 0, "terms": [{"coeff": [1, 0], "point": [0.05, 0]}]}
    code, rep, _ = invoke(monkeypatch, capsys, ["quad", "--config", str(cfg)], doc)
    assert code == 4 and rep["error"]["type"] == "ToleranceNotMet"
    assert rep["config"]["quadrature"]["max_subdivisions"] == 16


@pytest.mark.parametrize("text", ["not json", "[1, 2]", '{"ell": 0}', '{"ell": -1, "f": {"kind": "const", "c": 1}, "g": {"value": 1}}'])
def test_malformed_input_exits_2(monkeypatch, capsys, text):
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    assert cli.main(["classify"]) == 2
    rep = json.loads(capsys.readouterr().out)
    assert rep["exit_code"] == 2 and "error" in rep


def test_unknown_tag_exits_2(monkeypatch, capsys):
    code, _, _ = invoke(monkeypatch, capsys, ["verify"], {"identity": "nope"})
    assert code == 2


def test_internal_inconsistency_exits_3(monkeypatch, capsys):
    monkeypatch.setattr(maps, "grid_falsifier", lambda g, points=None: 1 + 0j)
    code, rep, _ = invoke(monkeypatch, capsys, ["classify"], pair(Constant(1), MoebiusMap.affine(1, 1)))
    assert code == 3 and rep["error"]["type"] == "InternalConsistencyError"


def test_reports_are_deterministic(monkeypatch, capsys, tmp_path):
    f = tmp_path / "in.json"
    f.write_text(json.dumps({"identity": "hermitian", "pair": pair(Constant(3), MoebiusMap.affine(1, 1))}))
    outs = []
    for _ in range(2):
        code, rep, _ = invoke(monkeypatch, capsys, ["verify", str(f), "-n", "3", "--seed", "17"])
        rep.pop("timing")
        outs.append(json.dumps(rep, sort_keys=True))
    assert outs[0] == outs[1]
    _, other, _ = invoke(monkeypatch, capsys, ["verify", str(f), "-n", "3", "--seed", "18"])
    assert other["rows"] != json.loads(outs[0])["rows"]


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "hpbergman", "laplace", "--z", "1", "--ell", "0", "-n", "2"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "ok"
    assert "isometry" in proc.stderr
