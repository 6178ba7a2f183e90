import io
import json
import subprocess
import sys

import pytest

from drs import fixtures
from drs.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run
from drs.documents import parse_space, validate_report


def drs(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def drs_json(*argv):
    code, out, _ = drs(*argv, "--json")
    doc = json.loads(out)
    validate_report(doc)
    return code, doc


def test_approx_table():
    code, doc = drs_json("approx", "--space", "ex1.json", "--set", "e,c", "--op", "all")
    assert code == EXIT_OK
    v = doc["result"]["values"]
    assert v["l"] == [] and v["u"] == ["a", "b", "c", "e", "f"]
    assert v["tri_up"] == ["a", "b", "f"] and v["btri_up"] == ["a", "b"]
    assert v["u_i"] == v["u_s"] == ["c", "e", "f"] and v["ui_plus"] == ["a", "b"]


def test_lattice_cd_text():
    code, out, _ = drs("lattice", "--space", "ch3.json", "--op", "tri_up", "--cd")
    assert code == EXIT_OK
    assert "completely_distributive: true" in out


def test_groupoid_check_and_expect_hold():
    code, doc = drs_json("groupoid", "check", "--space", "ex1.json", "--table", "table1.json")
    assert code == EXIT_OK and doc["result"]["violations"] == [["b", "a"], ["b", "e"]]
    assert not doc["ok"]
    code, _, _ = drs("groupoid", "check", "--space", "EX1", "--table", "TABLE1", "--expect-hold")
    assert code == EXIT_FAIL


def test_text_and_json_verdicts_agree():
    args = ("audit", "--space", "TOY2", "--claims", "prop5.l=▽△,l-id,comp2")
    _, out, _ = drs(*args)
    _, doc = drs_json(*args)
    for r in doc["reports"]:
        line = next(l for l in out.splitlines() if l.startswith(r["claim"] + " "))
        assert r["verdict"] in line.split()


@pytest.mark.parametrize("argv,code", [
    (["classify", "--space", "EX1"], EXIT_OK),
    (["granules", "--space", "EX1"], EXIT_OK),
    (["groupoid", "build", "--space", "FORK"], EXIT_OK),
    (["groupoid", "bridge", "--space", "CH3", "--expect-hold"], EXIT_OK),
    (["algebra", "uua", "--space", "FORK", "--audit", "--expect-hold"], EXIT_OK),
    (["algebra", "ua", "--space", "EX1", "--audit", "--waive-hypothesis", "--expect-hold"], EXIT_FAIL),
    (["powgrp", "--space", "TOY2", "--audit", "--claims", "comp2.union", "--expect-hold"], EXIT_OK),
    (["powgrp", "--space", "TOY2", "--audit", "--claims", "comp2", "--expect-hold"], EXIT_FAIL),
    (["quotient", "--space", "TOY2", "--rpa-op", "union", "--set", "1", "--set", "2"], EXIT_OK),
    (["quotient", "--space", "EX1", "--audit", "--claims", "rep5", "--expect-hold"], EXIT_FAIL),
    (["lattice", "--space", "EX1", "--op", "△", "--cd", "--expect-hold"], EXIT_FAIL),
    (["lattice", "--space", "CH3", "--op", "tri_up", "--tr23", "--ei3", "--triagrp", "--expect-hold"], EXIT_OK),
    (["fca", "--space", "CH3", "--th40", "--expect-hold"], EXIT_OK),
    (["audit", "--space", "TOY2", "--claims", "prop5.l=▽△", "--expect-hold"], EXIT_FAIL),
    (["audit", "--space", "TOY2", "--claims", "u-mo", "--mode", "sampled", "--seed", "3"], EXIT_OK),
    (["export-dot", "--what", "lattice", "--space", "CH3"], EXIT_OK),
    (["bogus"], EXIT_USAGE),
    (["classify"], EXIT_USAGE),
    (["classify", "--space", "missing.json"], EXIT_USAGE),
    (["approx", "--space", "EX1", "--set", "z"], EXIT_USAGE),
    (["audit", "--space", "EX1", "--claims", "nope"], EXIT_USAGE),
    (["lattice", "--space", "EX1", "--op", "l"], EXIT_USAGE),
    (["lattice", "--space", "CH3", "--op", "tri_up", "--ei3", "--ei4"], EXIT_USAGE),
    (["groupoid", "build", "--space", "ID2"], EXIT_USAGE),
])
def test_exit_codes(argv, code):
    assert drs(*argv)[0] == code


def test_json_reports_validate():
    for argv in (["classify", "--space", "EX1"], ["powgrp", "--space", "CH3", "--audit"],
                 ["audit", "--space", "EX1", "--claims", "approx:l-union0,latfca:tr23,n-idemp"]):
        code, doc = drs_json(*argv)
        assert code == EXIT_OK and doc["command"] == argv[0]


def test_files_and_emit_round_trip(tmp_path):
    for name in fixtures.SPACE_FILES:
        for fmt in ("json", "edges"):
            code, out, _ = drs("emit", "--space", name, "--format", fmt)
            path = tmp_path / f"{name}.{fmt}"
            path.write_text(out)
            assert code == EXIT_OK and parse_space(path) == fixtures.space(name)
    bad = tmp_path / "bad.txt"
    bad.write_text("a b\na b\n")
    code, _, err = drs("classify", "--space", str(bad))
    assert code == EXIT_USAGE and "line 2" in err


def test_info_table_input(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"objects": ["x", "y"], "attributes": ["k"],
                             "values": {"k": {"x": 1, "y": 1}}}))
    code, doc = drs_json("classify", "--info-table", str(p), "--attributes", "k")
    assert code == EXIT_OK and doc["result"]["symmetric"] and doc["result"]["reflexive"]


def test_dot_is_deterministic():
    a = drs("export-dot", "--what", "space", "--space", "EX1")[1]
    assert a == drs("export-dot", "--what", "space", "--space", "EX1")[1]
    assert "e -> f;" in a


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "drs.cli", "classify", "--space", "TOY2", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["transitive"]
