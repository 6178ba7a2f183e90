import json

import pytest
from hypothesis import given, strategies as st

from drs import fixtures
from drs.documents import (DocumentError, emit_groupoid, emit_space, order_dot,
                           parse_groupoid, parse_info_table, parse_space, space_dot,
                           table_to_space, validate_report)
from drs.latfca import FiniteLattice, lattice_dot
from drs.magma import directoid_from_poset
from drs.relcore import classify

from .conftest import spaces


@pytest.mark.parametrize("name", sorted(fixtures.SPACE_FILES))
@pytest.mark.parametrize("fmt", ["json", "edges"])
def test_space_round_trip(name, fmt):
    s = fixtures.space(name)
    back = parse_space(emit_space(s, fmt), name=name)
    assert back == s and back.universe == s.universe


def test_groupoid_round_trip(table1):
    assert parse_groupoid(emit_groupoid(table1)) == table1


@given(spaces())
def test_random_round_trip(s):
    assert parse_space(emit_space(s, "json")) == s
    assert parse_space(emit_space(s, "edges")) == s


def test_edge_list_parsing():
    s = parse_space("a c\na e")
    assert s.relation == {("a", "c"), ("a", "e")} and s.universe == ("a", "c", "e")
    s = parse_space("# comment\nz\nx y  # trailing\n")
    assert s.universe == ("z", "x", "y") and s.relation == {("x", "y")}


def test_parse_errors():
    with pytest.raises(DocumentError) as err:
        parse_space("a b\nb c\na b\n")
    assert err.value.line == 3
    with pytest.raises(DocumentError, match="relation\\[1\\]"):
        parse_space('{"universe": ["a", "b"], "relation": [["a", "b"], ["a", "b"]]}')
    with pytest.raises(DocumentError):
        parse_space('{"universe": ["a"], "relation": [["a", "z"]]}')
    with pytest.raises(DocumentError):
        parse_space('{"universe": ["a"]}')
    with pytest.raises(DocumentError):
        parse_space("a b c")
    with pytest.raises(DocumentError):
        parse_space('{"universe": [')


def _table(values):
    return json.dumps({"objects": ["x", "y", "z"], "attributes": sorted(values), "values": values})


def test_info_tables():
    t = parse_info_table(_table({"colour": {"x": "red", "y": "red", "z": "blue"},
                                 "size": {"x": [1, 2], "y": [2, 1], "z": 1}}))
    assert not t.deterministic
    s = table_to_space(t, ["colour", "size"])
    assert s.has("x", "y") and s.has("y", "x") and not s.has("x", "z")
    assert classify(s).equivalence
    distinct = table_to_space(parse_info_table(_table({"k": {"x": 1, "y": 2, "z": 3}})), ["k"])
    assert distinct.relation == {(o, o) for o in "xyz"}
    with pytest.raises(DocumentError):
        table_to_space(t, [])
    with pytest.raises(DocumentError):
        table_to_space(t, ["weight"])
    with pytest.raises(DocumentError):
        parse_info_table(_table({"k": {"x": 1}}))


@given(st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=1, max_size=2))
def test_indiscernibility_is_an_equivalence(rows):
    values = {f"a{i}": dict(zip("xyz", row)) for i, row in enumerate(rows)}
    t = parse_info_table(_table(values))
    assert t.deterministic
    assert classify(table_to_space(t, list(values))).equivalence


def test_dot_exports(ex1):
    dot = space_dot(ex1)
    assert "  e -> f;" in dot and dot == space_dot(fixtures.space("EX1"))
    L = FiniteLattice((0, 1, 2, 3), ("1", "2"), "B4")
    ldot = lattice_dot(L)
    assert ldot.count("->") == 4 and ldot.count(";") - ldot.count("->") == 5  # 4 nodes + rankdir
    hasse = order_dot(directoid_from_poset(fixtures.space("CH3")))
    assert "1 -> 2;" in hasse and "1 -> 3;" not in hasse


def test_report_schema():
    validate_report({"command": "x", "ok": True, "result": {}})
    with pytest.raises(Exception):
        validate_report({"command": "x", "ok": True, "result": {},
                         "reports": [{"claim": "c", "verdict": "maybe", "witness": None,
                                      "sweepSize": 0, "seed": None}]})
