import json

import pytest

from perikos import cli
from perikos.period_map import ProjPoint


def run(*argv):
    doc, code = cli.run(list(argv))
    return doc, code


def test_kottwitz_two_classes():
    doc, code = run("kottwitz", "--h", "2", "--d", "1")
    assert code == 0
    assert doc["result"]["count"] == 2
    assert [c["slopes"] for c in doc["result"]["classes"]] == [[[0, 1, 1], [1, 1, 1]], [[1, 2, 2]]]


def test_period_eval_origin():
    doc, code = run("period-eval", "--h", "2", "--p", "5", "--u", "[0]", "--prec", "6")
    assert code == 0
    assert doc["result"]["values"] == ["1", "0"]
    assert doc["provenance"]["n_max"] >= 1


def test_period_eval_unit_is_domain_error():
    doc, code = run("period-eval", "--h", "2", "--p", "5", "--u", "[1]")
    assert code == 2 and doc["status"] == "domain_error"


def test_unknown_field_is_schema_error(tmp_path):
    f = tmp_path / "job.json"
    f.write_text(json.dumps({"h": 2, "d": 1, "extra": 0}))
    doc, code = run("kottwitz", "--json", str(f))
    assert code == 4 and "extra" in doc["error"]["message"]


def test_unknown_flag_and_bad_types():
    assert run("kottwitz", "--h", "2", "--d", "1", "--nope", "1")[1] == 4
    assert run("kottwitz", "--h", "two", "--d", "1")[1] == 4
    assert run("fgl-check", "--h", "2", "--p", "4")[1] == 4
    assert run("newton", "--p", "3", "--matrix", "[[1,2]]")[1] == 4


def test_flags_override_json_file(tmp_path):
    f = tmp_path / "job.json"
    f.write_text(json.dumps({"h": 3, "d": 1}))
    doc, _ = run("kottwitz", "--json", str(f), "--h", "4")
    assert doc["result"]["count"] == 4


def test_env_default_precision(monkeypatch):
    monkeypatch.setenv("PERIKOS_DEFAULT_PREC", json.dumps({"p": 3, "prec": 5}))
    doc, code = run("period-eval", "--h", "2", "--u", "[3]")
    assert code == 0 and doc["input"]["p"] == 3 and doc["input"]["prec"] == 5
    monkeypatch.setenv("PERIKOS_DEFAULT_PREC", "{bad")
    assert run("period-eval", "--h", "2", "--u", "[3]")[1] == 4


def test_precision_failure_exit_code():
    u = json.dumps([{"type": "padic", "p": 3, "valuation": 1, "digits": [1], "prec": 3}])
    doc, code = run("period-eval", "--h", "2", "--p", "3", "--u", u, "--prec", "12")
    assert code == 3 and doc["status"] == "precision_error"


def test_hecke_rejection_exit_code():
    doc, code = run("hecke-check", "--E", "[[1,2,1]]", "--F", "[[0,1,3]]")
    assert code == 2 and doc["error"]["type"] == "RankMismatch"
    doc, code = run("hecke-check", "--E", "[[1,2,1]]", "--F", "[[0,1,2]]")
    assert code == 0 and doc["result"]["valid"]


def test_newton_reports_oracle_flag():
    doc, code = run("newton", "--p", "3", "--m", "2", "--matrix", "[[0,3],[1,0]]")
    assert code == 0
    assert doc["result"]["slopes"] == [[1, 2, 2]]
    assert doc["provenance"]["oracle_flags"]["charpoly_leibniz"]


def test_fgl_check_payload():
    doc, code = run("fgl-check", "--h", "2", "--p", "3", "--u", "[3]", "--associativity", "true")
    assert code == 0
    assert all(doc["result"]["axioms"].values())
    assert doc["result"]["height_mod_p"] == 2


def test_result_payload_roundtrip():
    doc, _ = run("period-eval", "--h", "3", "--p", "3", "--u", "[3, 9]", "--prec", "5")
    text = cli.dumps(doc)
    again = json.loads(text)
    P = ProjPoint.from_json(again["result"]["point"])
    assert P.to_json() == doc["result"]["point"]


@pytest.mark.parametrize("action", ["J", "GL", "Weil", "transition", "J-period"])
def test_act_variants(action):
    doc, code = run("act", "--action", action, "--h", "2", "--p", "3", "--prec", "5", "--n", "1")
    assert code == 0 and doc["result"]["action"] == action


def test_main_prints_sorted_json(capsys):
    code = cli.main(["bundles", "--h", "3"])
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert code == 0 and doc["result"]["count"] == 3
    assert list(doc) == sorted(doc)
