import pytest
from hypothesis import given

from drs import fixtures
from drs.relcore import (BoundExceeded, FiniteRelationSpace, SpaceError, SpaceMap, check_bound,
                         classify, granule_correspondence, morphism_check, nbd_closed_family,
                         neighborhood, reflexive_closure, upper_bounds)

from . import oracle
from .conftest import spaces

TABLE2 = {  # x: ([x], [x]_i, [x]_o)
    "a": ("cef", "cef", "cef"),
    "b": ("cef", "cf", "cf"),
    "c": ("ab", "abf", "ab"),
    "e": ("a", "abf", "a"),
    "f": ("abce", "ab", "ab"),
}


@pytest.mark.parametrize("x", sorted(TABLE2))
def test_table2_granules(ex1, x):
    plain, inverse, sym = (frozenset(s) for s in TABLE2[x])
    assert neighborhood(ex1, x, "plain") == plain
    assert neighborhood(ex1, x, "inverse") == inverse
    assert neighborhood(ex1, x, "symmetric") == sym


def test_classify_fixtures():
    p = classify(fixtures.space("EX1"))
    assert not p.reflexive and not p.antisymmetric
    # a and f share no successor, so EX1 is not up-directed; it is still realizable
    assert not p.up_directed and p.witnesses["up_directed"] == ("a", "f")
    assert p.realizable
    id2 = classify(fixtures.space("ID2"))
    # the identity on two points is an equivalence and a partial order, but 1 and 2 have no common successor
    assert id2.equivalence and id2.partial_order
    assert not id2.up_directed and not id2.realizable
    t = classify(fixtures.space("TOY2"))
    assert (t.up_directed, t.reflexive, t.antisymmetric, t.transitive, t.symmetric) == \
        (True, True, True, True, False)


@given(spaces())
def test_classify_matches_oracle(s):
    p = classify(s)
    assert p.up_directed == oracle.is_up_directed(s)
    assert p.reflexive == oracle.is_reflexive(s)
    assert p.antisymmetric == oracle.is_antisymmetric(s)
    assert p.transitive == oracle.is_transitive(s)
    assert p.symmetric == oracle.is_symmetric(s)
    for flag, witness in p.witnesses.items():
        assert not getattr(p, flag) and witness


@given(spaces())
def test_neighborhoods_match_oracle(s):
    for x in s.universe:
        assert neighborhood(s, x, "plain") == oracle.nbd(s, x)
        assert neighborhood(s, x, "inverse") == oracle.nbd_i(s, x)
        assert neighborhood(s, x, "symmetric") == oracle.nbd_o(s, x)


def test_upper_bounds(ex1):
    assert upper_bounds(ex1, "a", "b") == {"c", "f"}
    assert upper_bounds(fixtures.space("ID2"), "1", "1") == {"1"}
    assert upper_bounds(fixtures.space("FORK"), "1", "2") == {"3"}


def test_nbd_closed_family(ex1):
    assert set(nbd_closed_family(fixtures.space("ID2"))) == set(oracle.powerset("12"))
    fam = nbd_closed_family(ex1)
    assert frozenset() in fam and frozenset(ex1.universe) in fam
    fork = fixtures.space("FORK")
    expected = {A for A in oracle.powerset(fork.universe)
                if all(oracle.nbd(fork, x) <= A for x in A)}
    assert set(nbd_closed_family(fork)) == expected
    assert frozenset({"1", "2", "3"}) in expected and frozenset({"3"}) not in expected


def test_reflexive_closure(ex1):
    plus = reflexive_closure(ex1)
    assert {(x, x) for x in "abcef"} <= plus.relation
    assert classify(plus).reflexive
    id2 = fixtures.space("ID2")
    assert reflexive_closure(id2) == id2


def test_morphisms():
    ex1, toy, id2 = (fixtures.space(n) for n in ("EX1", "TOY2", "ID2"))
    assert morphism_check(SpaceMap(ex1, ex1, {x: x for x in ex1.universe}))[0] == "strong_morphism"
    assert morphism_check(SpaceMap(toy, id2, {"1": "1", "2": "1"}))[0] != "not_morphism"
    assert morphism_check(SpaceMap(id2, toy, {"1": "2", "2": "1"}))[0] != "not_morphism"
    verdict, witness = morphism_check(SpaceMap(toy, id2, {"1": "1", "2": "2"}))
    assert verdict == "not_morphism" and witness == ("1", "2")
    with pytest.raises(SpaceError):
        SpaceMap(toy, id2, {"1": "1"})


def test_granule_correspondence():
    id2, id3, ex1 = (fixtures.space(n) for n in ("ID2", "ID3", "EX1"))
    assert granule_correspondence(id2, id2)
    assert not granule_correspondence(id2, id3)
    assert granule_correspondence(ex1, ex1)


def test_validation_and_bounds():
    with pytest.raises(SpaceError):
        FiniteRelationSpace(("a",), frozenset({("a", "z")}))
    with pytest.raises(SpaceError):
        FiniteRelationSpace(("a", "a"), frozenset())
    big = FiniteRelationSpace(tuple(map(str, range(13))), frozenset())
    with pytest.raises(BoundExceeded):
        check_bound(big)
    with pytest.raises(SpaceError):
        fixtures.space("ID2").mask(["9"])
