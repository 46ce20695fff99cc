import json
import subprocess
import sys

import pytest

from eisenstein.cli import main, poly_from_document, poly_to_document
from eisenstein.classify2 import gen_p2


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_doc(tmp_path, doc, name="f.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


X9P3 = {"schema": 1, "p": 3, "f": 1, "degree": 9, "coeffs": [0] * 8 + [3]}


def test_sigma(capsys):
    code, out, _ = run(capsys, "sigma", "--lambda", "3", "--ell", "3", "--method", "both")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1
    assert doc["value"] == doc["direct"] == doc["formula"] == "3"


def test_classify_x9_plus_3(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", "--input", write_doc(tmp_path, X9P3), "--json")
    th = json.loads(out)["theorem"]
    assert code == 0 and th["cyclic"] is False and th["first_failed"] == 1


def test_gen_then_classify(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--p", "3", "--f", "2", "--target", "cyclic", "--seed", "4")
    assert code == 0
    doc = json.loads(out)
    assert all(isinstance(c, str) for row in doc["coeffs"] for c in row)
    code, out, _ = run(capsys, "classify", "--input", write_doc(tmp_path, doc), "--json")
    res = json.loads(out)
    assert res["theorem"]["cyclic"] and res["classification"]["regime"] == "BreakPplus1"


def test_text_output(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", "--input", write_doc(tmp_path, X9P3))
    assert code == 0 and "cyclic=False" in out and "[FAIL] (1)" in out


def test_degree_p3_classify(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--p", "5", "--degree", "p3", "--target", "cyclic")
    path = write_doc(tmp_path, json.loads(out))
    code, out, _ = run(capsys, "classify", "--input", path, "--json")
    assert code == 0 and json.loads(out)["theorem"]["cyclic"] is True


def test_document_round_trip():
    f = gen_p2(5, 2, "cyclic", 1)
    assert poly_from_document(json.loads(json.dumps(poly_to_document(f)))) == f


def test_verify_degree_p2(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3", "--f", "1", "--degree", "p2", "--samples", "50", "--seed", "7")
    doc = json.loads(out)
    assert code == 0 and doc["agreement"] == "50/50" and doc["disagreements"] == []


def test_verify_is_deterministic(capsys):
    a = run(capsys, "verify", "--p", "3", "--samples", "6", "--seed", "2")[1]
    b = run(capsys, "verify", "--p", "3", "--samples", "6", "--seed", "2")[1]
    assert a == b


def test_oracle_report(capsys, tmp_path):
    code, out, _ = run(capsys, "oracle", "--input", write_doc(tmp_path, X9P3))
    rep = json.loads(out)["report"]
    assert code == 0 and rep["quotient_order"] == "1" and rep["is_cyclic_of_degree"] is False
    code, out, _ = run(capsys, "oracle", "--input", write_doc(tmp_path, X9P3), "--level", "4")
    assert json.loads(out)["report"]["level"] == 4


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--input", "/nonexistent/f.json"],
        ["sigma", "--lambda", "3,x", "--ell", "3"],
        ["sigma", "--lambda", "3", "--ell", "0"],
        ["verify", "--p", "3", "--degree", "p3"],
        ["gen", "--p", "3", "--target", "nonsense"],
        ["gen", "--p", "4"],
    ],
)
def test_invalid_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert json.loads(err)["error"]["type"] == "invalid_input"


def test_bad_documents(capsys, tmp_path):
    for doc in [{"p": 3, "degree": 10, "coeffs": [3] * 10}, {"p": 3, "degree": 9, "coeffs": [3] * 8},
                {"p": 3, "degree": 9, "coeffs": [1] * 9}, [1, 2]]:
        code, _, err = run(capsys, "classify", "--input", write_doc(tmp_path, doc))
        assert code == 2 and "error" in json.loads(err)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "classify", "--input", str(bad))[0] == 2


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "eisenstein", "sigma", "--lambda", "1,1", "--ell", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["value"] == "-2"
