import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from drs import fixtures, gen, magma
from drs.magma import (FiniteGroupoid, NotUpDirected, PreconditionViolated, build_updg,
                       count_updg, directoid_check, directoid_from_poset, enumerate_updg,
                       eval_term, g_ideal_closure, holds_identity, induced_relations,
                       is_g_filter, is_g_ideal, is_tolerance_trivial, pawlak_audit,
                       pawlak_groupoid, realization_check, updg_stack)
from drs.relcore import FiniteRelationSpace, classify

from . import oracle
from .conftest import up_directed_spaces


def test_table1_is_not_idempotent(table1):
    ok, witness = holds_identity(table1, "aa = a")
    assert not ok and witness == {"a": "a"} and table1("a", "a") == "e"
    assert not directoid_check(table1)["dir1"]


def test_eval_term_follows_tree_shape(table1):
    # x(ab) with x=a, a=a, b=b: a·b = c, then a·c = c
    assert eval_term(table1, "x(ab)", {"x": "a", "a": "a", "b": "b"}) == "c"
    assert eval_term(table1, "(xa)b", {"x": "a", "a": "a", "b": "b"}) == table1(table1("a", "a"), "b")


def test_canonical_builds(ex1):
    G = build_updg(ex1)
    assert G("a", "c") == "c"
    assert G("f", "f") == "a" and G("f", "f") in {"a", "b"}
    assert build_updg(fixtures.space("FORK"))("1", "2") == "3"


def test_counts(ex1):
    assert count_updg(fixtures.space("TOY2")) == 1
    assert count_updg(fixtures.space("FORK")) == 1
    assert count_updg(ex1) == oracle.count_realizations(ex1) == 15552
    assert len(updg_stack(ex1)) == 15552


@given(up_directed_spaces(max_n=3))
def test_enumeration_matches_count_and_realizes(s):
    stream = list(enumerate_updg(s))
    assert len(stream) == count_updg(s) == oracle.count_realizations(s)
    assert len(set(stream)) == len(stream)
    for G in stream[:20]:
        assert realization_check(s, G) == oracle.realization_violations(s, G) == []
    assert np.array_equal(updg_stack(s), np.array([G.table for G in stream]))


def test_realization_errata(ex1, table1):
    assert realization_check(ex1, table1) == [("b", "a"), ("b", "e")]
    assert realization_check(fixtures.space("EX1-raw"), table1) == [("b", "a"), ("b", "e"), ("e", "b")]
    assert oracle.realization_violations(ex1, table1) == [("b", "a"), ("b", "e")]
    fork = fixtures.space("FORK")
    assert realization_check(fork, build_updg(fork)) == []


def test_non_realizable_raises():
    with pytest.raises(NotUpDirected):
        build_updg(fixtures.space("ID2"))


def test_induced_relations_round_trip():
    for s in fixtures.all_spaces():
        if not classify(s).up_directed:
            continue
        R, R_star = induced_relations(build_updg(s))
        assert R.relation == s.relation
        assert classify(R_star).up_directed


@given(st.integers(1, 3), st.data())
def test_star_relation_is_up_directed(n, data):
    table = [[data.draw(st.integers(0, n - 1)) for _ in range(n)] for _ in range(n)]
    G = FiniteGroupoid(gen.labels(n), table)
    assert classify(induced_relations(G)[1]).up_directed


def _verdicts(reports):
    return {r.claim: r.verdict for r in reports}


def test_bridge():
    assert set(_verdicts(magma.bridge_audit(fixtures.space("TOY2"))).values()) == {"holds_exhaustively"}
    ex1 = _verdicts(magma.bridge_audit(fixtures.space("EX1"), limit=200))
    assert ex1["reflexive<=>aa=a"] == "holds_exhaustively"
    assert all(not holds_identity(G, "aa = a")[0] for G in enumerate_updg(fixtures.space("EX1"), 50))
    ch3 = _verdicts(magma.bridge_audit(fixtures.space("CH3")))
    assert ch3["transitive<=>a((ab)c)=(ab)c"] == "holds_exhaustively"


def test_pawlak():
    part = FiniteRelationSpace.from_pairs("123", [(a, b) for a in "123" for b in "123"
                                                      if (a in "12") == (b in "12")])
    v = _verdicts(pawlak_audit(part))
    assert all(v[f"E{i}"] == "holds_exhaustively" for i in range(1, 6))
    assert pawlak_groupoid(fixtures.space("ID2"))("1", "2") == "2"
    ex1 = _verdicts(pawlak_audit(fixtures.space("EX1")))
    assert "fails" in ex1.values()


def test_directoids():
    ch3 = fixtures.space("CH3")
    D = directoid_from_poset(ch3)
    assert all(D(a, b) == max(a, b) for a, b in product("123", repeat=2))
    assert all(directoid_check(D)[k] for k in ("dir1", "dir2", "dir3", "dir4"))
    assert all(directoid_check(directoid_from_poset(fixtures.space("FORK")))[k]
               for k in ("dir1", "dir2", "dir3", "dir4"))
    with pytest.raises(PreconditionViolated):
        directoid_from_poset(fixtures.space("ID2"))


def test_g_ideals():
    G = pawlak_groupoid(fixtures.space("ID2"))
    assert g_ideal_closure(G, set()) == frozenset()
    assert g_ideal_closure(G, {"1", "2"}) == {"1", "2"}
    # 1·2 = 2 under ¬R12, so 2 is forced in by closure under the operation
    assert g_ideal_closure(G, {"1"}) == {"1", "2"}
    for s in ("12", ""):
        assert is_g_ideal(G, set(s)) == (g_ideal_closure(G, set(s)) == frozenset(s))
    assert is_g_filter(G, {"1", "2"})


def test_tolerances():
    one = FiniteGroupoid(("x",), [[0]])
    assert is_tolerance_trivial(one) == (True, None)
    B = build_updg(fixtures.space("FORK"))
    tols = magma.compatible_tolerances(B)
    full = frozenset(product("123", repeat=2))
    assert frozenset((x, x) for x in "123") in tols and full in tols
    ok, witness = is_tolerance_trivial(B)
    assert ok == oracle.is_tolerance_trivial(B.universe, lambda a, b: B.table[a][b])
    assert not ok and witness in tols


@given(st.integers(1, 3), st.data())
def test_tolerance_triviality_matches_oracle(n, data):
    table = [[data.draw(st.integers(0, n - 1)) for _ in range(n)] for _ in range(n)]
    G = FiniteGroupoid(gen.labels(n), table)
    assert is_tolerance_trivial(G)[0] == oracle.is_tolerance_trivial(G.universe, G.mul)


def test_random_realizations_are_valid():
    rng = random.Random(5)
    for _ in range(20):
        s = gen.random_space(5, rng, up_directed=True)
        G = build_updg(s)
        assert oracle.realization_violations(s, G) == []
