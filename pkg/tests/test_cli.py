import json
import subprocess
import sys

import numpy as np
import pytest

from cubicalg import dumps_algebra, loads_algebra, make_open_peirce_algebra
from cubicalg.cli import main
from cubicalg.fileio import AlgebraFileError
from cubicalg.core import FormError


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path, capsys):
    def gen(name, *args):
        code, out = run(capsys, "generate", *args)
        assert code == 0
        p = tmp_path / name
        p.write_text(out)
        return p

    paths = {
        "ce": gen("ce.json", "counterexample", "--n", "2", "--a", "0.25"),
        "h2": gen("h2.json", "hadamard", "--n", "2"),
        "h3": gen("h3.json", "hadamard", "--n", "3"),
    }
    zero = tmp_path / "zero.json"
    zero.write_text('{"dim": 2, "cubic": []}')
    paths["zero"] = zero
    openp = tmp_path / "open.json"
    openp.write_text(dumps_algebra(make_open_peirce_algebra()))
    paths["open"] = openp
    return paths


# -- generate and the file format ----------------------------------------------

def test_generate_counterexample_content(capsys):
    _, out = run(capsys, "generate", "counterexample", "--n", "2", "--a", "0.25")
    doc = json.loads(out)
    assert doc["dim"] == 2
    assert doc["cubic"] == [{"i": 1, "j": 1, "k": 1, "value": 2}, {"i": 1, "j": 2, "k": 2, "value": 0.5}]
    assert doc["gram"] == [1, 0, 0, 1]


def test_generate_hadamard_is_diagonal(capsys):
    _, out = run(capsys, "generate", "hadamard", "--n", "3")
    assert [(r["i"], r["j"], r["k"]) for r in json.loads(out)["cubic"]] == [(1, 1, 1), (2, 2, 2), (3, 3, 3)]


def test_generate_random_deterministic_and_round_trip(capsys):
    _, a = run(capsys, "generate", "random", "--n", "3", "--seed", "7")
    _, b = run(capsys, "generate", "random", "--n", "3", "--seed", "7")
    assert a == b
    assert dumps_algebra(loads_algebra(a)) == a
    _, c = run(capsys, "generate", "counterexample", "--n", "5")
    assert dumps_algebra(loads_algebra(c)) == c


def test_generate_invalid_params(capsys):
    code, _ = run(capsys, "generate", "counterexample", "--n", "3", "--a", "0.2,0.2")
    assert code == 2


def test_round_trip_general_gram():
    text = '{"dim": 2, "cubic": [{"i": 1, "j": 1, "k": 2, "value": 0.1}], "gram": [2, 0.5, 0.5, 1]}'
    A = loads_algebra(text)
    once = dumps_algebra(A)
    assert dumps_algebra(loads_algebra(once)) == once


def test_product_layout_loads():
    text = json.dumps({"dim": 2, "product": [
        {"k": 1, "i": 1, "j": 1, "value": 2.0},
        {"k": 1, "i": 2, "j": 2, "value": 0.5},
        {"k": 2, "i": 1, "j": 2, "value": 0.5},
        {"k": 2, "i": 2, "j": 1, "value": 0.5},
    ]})
    A = loads_algebra(text)
    np.testing.assert_allclose(A.mul(np.eye(2)[0], np.eye(2)[1]), [0, 0.5])
    assert dumps_algebra(A).startswith('{\n  "dim": 2,\n  "cubic": [\n    {"i": 1, "j": 1, "k": 1, "value": 2}')


@pytest.mark.parametrize("text, msg", [
    ("{", "malformed"),
    ('{"dim": 2}', "exactly one"),
    ('{"dim": 2, "cubic": [], "product": []}', "exactly one"),
    ('{"dim": 0, "cubic": []}', "dim"),
    ('{"dim": 2, "cubic": [{"i": 1, "j": 1, "k": 3, "value": 1}]}', "outside"),
    ('{"dim": 2, "cubic": [{"i": 2, "j": 1, "k": 1, "value": 1}]}', "i <= j <= k"),
    ('{"dim": 2, "cubic": [{"i": 1, "j": 1, "k": 1, "value": "x"}]}', "real"),
    ('{"dim": 2, "cubic": [], "gram": [1, 0, 0]}', "gram"),
    ('{"dim": 2, "cubic": [], "extra": 1}', "unknown"),
])
def test_parse_errors(text, msg):
    with pytest.raises(AlgebraFileError, match=msg):
        loads_algebra(text)


def test_indefinite_gram_rejected():
    with pytest.raises(FormError, match="positive definite"):
        loads_algebra('{"dim": 2, "cubic": [], "gram": [1, 0, 0, -1]}')


# -- verbs ---------------------------------------------------------------------

def test_check_ok(capsys, files):
    code, rep = report(capsys, "check", files["h3"])
    assert code == 0 and rep["status"] == "ok"
    for v in rep["results"]["structure"].values():
        assert v["value"] <= 1e-10
    assert all(v["pass"] for k, v in rep["results"]["fd"].items() if k != "h")


def test_check_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "cubic": [], "gram": [1, 0, 0, -1]}')
    code, rep = report(capsys, "check", bad)
    assert code == 2 and rep["status"] == "error" and "form not positive definite" in rep["message"]
    both = tmp_path / "both.json"
    both.write_text('{"dim": 1, "cubic": [], "product": []}')
    code, rep = report(capsys, "check", both)
    assert code == 2 and "exactly one" in rep["message"]
    code, rep = report(capsys, "check", tmp_path / "missing.json")
    assert code == 2


def test_check_flags_noncommutative_product(capsys, tmp_path):
    p = tmp_path / "nc.json"
    p.write_text('{"dim": 2, "product": [{"k": 1, "i": 1, "j": 2, "value": 1}]}')
    code, rep = report(capsys, "check", p)
    assert code == 2 and not rep["results"]["structure"]["commutativity"]["pass"]


def test_idempotents_counterexample(capsys, files):
    code, rep = report(capsys, "idempotents", files["ce"])
    assert code == 0
    idem = rep["results"]["idempotents"]
    assert len(idem) == 1
    assert idem[0]["c"] == pytest.approx([0.5, 0.0], abs=1e-12)
    assert idem[0]["extremal"]


def test_idempotents_hadamard2(capsys, files):
    code, rep = report(capsys, "idempotents", files["h2"], "--restarts", "80")
    got = [(tuple(np.round(r["c"], 8) + 0.0), r["extremal"]) for r in rep["results"]["idempotents"]]
    assert sorted(got) == [((0.0, 1.0), True), ((1.0, 0.0), True), ((1.0, 1.0), False)]
    # sorted by decreasing f: the extremal ones first
    assert [e for _, e in got] == [True, True, False]


def test_idempotents_zero_algebra(capsys, files):
    code, rep = report(capsys, "idempotents", files["zero"])
    assert code == 0 and rep["results"]["idempotents"] == [] and rep["message"] == "u ≡ 0"


def test_peirce_verb(capsys, files):
    code, rep = report(capsys, "peirce", files["ce"], "--c", "0.5,0")
    assert code == 0 and rep["results"]["dim_v1"] == 1
    code, rep = report(capsys, "peirce", files["h3"], "--c", "1,1,1")
    assert rep["results"]["dim_v1"] == 3 and rep["results"]["v1_is_subalgebra"]
    code, rep = report(capsys, "peirce", files["ce"], "--c", "0.4,0")
    assert code == 2 and rep["results"]["residual"]["value"] == pytest.approx(0.08)
    assert "residual" in rep["message"] or "c^2 - c" in rep["message"]
    code, rep = report(capsys, "peirce", files["ce"], "--c", "0.5,0,0")
    assert code == 2


def test_decompose_verb(capsys, files):
    code, rep = report(capsys, "decompose", files["h3"], "--c", "1,1,1", "--restarts", "60")
    res = rep["results"]
    assert code == 0 and res["verdict"] == "decomposable"
    dec = res["decomposition"]
    assert all(dec[k]["pass"] for k in ("sum_defect", "c1_residual", "c2_residual", "c1c2"))
    code, rep = report(capsys, "decompose", files["ce"], "--c", "0.5,0")
    assert code == 0 and rep["results"]["verdict"] == "indecomposable"
    code, rep = report(capsys, "decompose", files["open"], "--c", "1,0,0")
    assert code == 1 and rep["status"] == "inconclusive" and rep["results"]["verdict"] == "inconclusive"


def test_fd_check_and_gap_demo(capsys, files):
    code, rep = report(capsys, "fd-check", files["ce"], "--point", "0.3,-0.7")
    assert code == 0 and rep["results"]["fd"]["f_hessian"]["pass"]
    code, rep = report(capsys, "gap-demo", files["ce"])
    assert code == 0 and rep["results"]["anti_collinear"]
    assert rep["results"]["odd_defect"]["pass"]
    code, rep = report(capsys, "gap-demo", files["zero"])
    assert code == 2


def test_bad_flags_are_input_errors(capsys, files):
    code, rep = report(capsys, "idempotents", files["ce"], "--restarts", "0")
    assert code == 2


def test_internal_failure_exit_code(capsys, files, monkeypatch):
    import cubicalg.cli as cli

    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "find_idempotents", boom)
    code, rep = report(capsys, "idempotents", files["ce"])
    assert code == 3 and rep["status"] == "error" and "internal" in rep["message"]


def test_module_entry_point(files):
    out = subprocess.run([sys.executable, "-m", "cubicalg", "peirce", str(files["h3"]), "--c", "1,0,0"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["results"]["dim_v1"] == 1
