"""CLI surface: exit codes, canonical output, command behaviour."""

import json

import pytest

from hassecheck.cli import EX_OK, EX_OPERATIONAL, EX_USAGE, main
from hassecheck.matgrp import closure, identity, matrix


def run(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_usage_error_is_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == EX_USAGE


def test_enumerate_hasse_ell_2(capsys):
    rc, out, _ = run(capsys, ["enumerate-hasse", "--ell", "2"])
    assert rc == EX_OK
    doc = json.loads(out)
    assert doc["hasse_subgroups"] == []
    assert doc["subgroup_classes"] == 4
    assert doc["config"]["ell"] == 2


def test_check_group_trivial(tmp_path, capsys):
    path = tmp_path / "trivial.json"
    path.write_text(closure([identity(2, 7)]).to_json())
    rc, out, _ = run(capsys, ["check-group", "--file", str(path)])
    assert rc == EX_OK
    doc = json.loads(out)
    assert doc["result"]["is_hasse"] is False
    assert doc["result"]["global_fixed_point"] is not None


def test_check_group_d6(tmp_path, capsys):
    g = closure([matrix([[2, 0], [0, 1]], 7), matrix([[0, 1], [1, 0]], 7)])
    path = tmp_path / "d6.json"
    path.write_text(g.to_json())
    rc, out, _ = run(capsys, ["check-group", "--file", str(path)])
    assert json.loads(out)["result"]["is_hasse"] is True


def test_classify_pgl2_cli(tmp_path, capsys):
    g = closure([matrix([[2, 0], [0, 1]], 7), matrix([[0, 1], [1, 0]], 7)])
    path = tmp_path / "d6.json"
    path.write_text(g.to_json())
    rc, out, _ = run(capsys, ["classify-pgl2", "--file", str(path)])
    doc = json.loads(out)
    assert doc["classification"]["dickson_label"] == "dihedral(6)"
    assert doc["classification"]["sutherland"]["predicted_hasse"] is True


def test_verify_lemma31_cli(tmp_path, capsys):
    g = closure([matrix([[2, 0], [0, 1]], 7), matrix([[0, 1], [1, 0]], 7)])
    g2 = closure([matrix([[0, -3], [1, 1]], 7)])
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    p1.write_text(g.to_json())
    p2.write_text(g2.to_json())
    rc, out, _ = run(capsys, ["verify-lemma31", "--g", str(p1), "--g2", str(p2)])
    doc = json.loads(out)
    assert doc["predicted"] is True
    assert doc["brute_force"]["is_hasse"] is True
    assert doc["contract_holds"] is True


def test_analyze_fixture(capsys):
    rc, out, _ = run(capsys, ["analyze", "--label", "189.2.p.a", "--ell", "7", "--source", "fixtures"])
    assert rc == EX_OK
    doc = json.loads(out)
    assert doc["verdict"]["verdict"] == "hasse"
    assert doc["config"]["source"] == "fixtures"


def test_analyze_unknown_label_is_operational_error(capsys):
    rc, out, err = run(capsys, ["analyze", "--label", "11.2.a.a", "--ell", "7", "--source", "fixtures"])
    assert rc == EX_OPERATIONAL
    assert "NotFoundError" in err


def test_verdicts_never_affect_exit_code(capsys):
    rc, out, _ = run(capsys, ["analyze", "--label", "63.2.e.a", "--ell", "7", "--source", "fixtures"])
    assert rc == EX_OK
    assert json.loads(out)["verdict"]["verdict"] == "not_hasse"


def test_scan_json_byte_identical(capsys):
    argv = ["scan", "--ell", "7", "--level-max", "100", "--source", "fixtures",
            "--format", "json", "--jobs", "1"]
    rc1, out1, _ = run(capsys, argv)
    rc2, out2, _ = run(capsys, argv)
    assert rc1 == rc2 == EX_OK
    assert out1 == out2


def test_scan_table_format_with_reference(capsys):
    rc, out, _ = run(capsys, [
        "scan", "--ell", "7", "--level-max", "189", "--source", "fixtures",
        "--jobs", "1", "--check-reference",
    ])
    assert rc == EX_OK
    assert "reference discrepancies" in out
    assert "189.2.p.a" in out


def test_congruence_cli(capsys):
    rc, out, _ = run(capsys, [
        "congruence", "--f", "189.2.p.a", "--g", "189.2.p.a", "--ell", "7",
        "--source", "fixtures",
    ])
    assert rc == EX_OK
    assert json.loads(out)["result"]["congruent"] is True


def test_fetch_lists_candidates_from_fixtures(capsys):
    rc, out, _ = run(capsys, [
        "fetch", "--source", "fixtures", "--cm", "false", "--inner-twist-count", "1",
    ])
    assert rc == EX_OK
    labels = json.loads(out)["labels"]
    assert "7938.2.a.bj" in labels and len(labels) == 6
