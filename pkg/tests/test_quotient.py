import random

import pytest
from hypothesis import given, strategies as st

from drs import fixtures, gen, quotient
from drs.quotient import (DecompositionError, Quotient, RoughParthoodAlgebra, decompose,
                          rough_equal, rough_leq, rpa_apply)

from . import oracle
from .conftest import spaces, up_directed_spaces


def _oracle_classes(s, kind):
    key = {"standard": lambda A: (oracle.approx(s, A, "l"), oracle.approx(s, A, "u")),
           "l": lambda A: oracle.approx(s, A, "l"),
           "u": lambda A: oracle.approx(s, A, "u")}[kind]
    groups = {}
    for A in oracle.powerset(s.universe):
        groups.setdefault(key(A), set()).add(A)
    return {frozenset(g) for g in groups.values()}


@pytest.mark.parametrize("kind", quotient.KINDS)
@given(s=spaces(max_n=4))
def test_partition_matches_oracle(kind, s):
    got = {frozenset(c.member_sets()) for c in quotient.quotient(s, kind)}
    assert got == _oracle_classes(s, kind)


@given(spaces(max_n=4))
def test_standard_refines_l_and_u(s):
    for kind in ("l", "u"):
        coarse = quotient.quotient(s, kind)
        for c in quotient.quotient(s, "standard"):
            assert any(set(c.members) <= set(d.members) for d in coarse)


def test_rough_equality_examples(ex1):
    assert rough_equal(ex1, {"e", "c"}, {"e"})
    assert not rough_equal(fixtures.space("ID2"), {"1"}, {"2"})
    assert rough_leq(ex1, "ec", "ec", "both")
    q = Quotient(ex1)
    assert {frozenset("ec"), frozenset("e")} <= set(q.class_of("ec").member_sets())
    assert len(quotient.quotient(fixtures.space("ID2"))) == 4
    assert all(len(c.members) == 1 for c in quotient.quotient(fixtures.space("ID2")))


def test_decompose(ex1):
    cls = Quotient(ex1).class_of("ec")
    d = decompose(ex1, cls, "ec")
    assert (d.a_l, d.K) == (frozenset(), frozenset("ec"))
    assert d.checks["K^l=∅"] and d.checks["a_l^u∪K^u=a_u"]
    toy = fixtures.space("TOY2")
    c1 = Quotient(toy).class_of("1")
    d = decompose(toy, c1, "1")
    assert (d.a_l, d.K) == (frozenset("1"), frozenset())
    # the printed a_l ∪ K^u = a_u misses the outer u: {1} ≠ {1,2}
    assert not d.checks["a_l∪K^u=a_u"]
    with pytest.raises(DecompositionError):
        decompose(toy, c1, "2")


@given(spaces(max_n=4))
def test_decomposition_always_valid(s):
    q = Quotient(s)
    for c in q:
        for x in c.members:
            d = decompose(s, c, s.labels(x))
            assert oracle.approx(s, d.K, "l") == frozenset()
            assert d.a_l | d.K == s.labels(x)


def _oracle_breve(s, classes_of, op, *cls):
    """Lift an operation to classes: union (or intersection for star) over representatives."""
    if op == "star":
        out = frozenset(s.universe)
        for F in cls[0]:
            for H in cls[1]:
                out &= F & H
        return out
    fns = {"union": lambda F, H: F | H, "inter": lambda F, H: F & H}
    out = frozenset()
    if op in fns:
        for F in cls[0]:
            for H in cls[1]:
                out |= fns[op](F, H)
        return out
    un = {"neg": lambda F: frozenset(s.universe) - F, "L": lambda F: oracle.approx(s, F, "l"),
          "U": lambda F: oracle.approx(s, F, "u")}
    if op in un:
        for F in cls[0]:
            out |= un[op](F)
        return out
    whole = frozenset().union(*cls[0])
    return oracle.approx(s, whole, "l" if op == "bL" else "u")


@given(up_directed_spaces(max_n=3), st.data())
def test_rpa_ops_match_oracle(s, data):
    rpa = RoughParthoodAlgebra(s)
    classes = rpa.classes
    a = data.draw(st.sampled_from(classes))
    b = data.draw(st.sampled_from(classes))
    for op in ("union", "inter", "star"):
        want = _oracle_breve(s, None, op, a.member_sets(), b.member_sets())
        assert want in rpa.apply(op, a, b)
    for op in ("neg", "L", "U", "bL", "bU"):
        assert _oracle_breve(s, None, op, a.member_sets()) in rpa.apply(op, a)


def test_rpa_examples():
    id2 = fixtures.space("ID2")
    rpa = RoughParthoodAlgebra(id2)
    bot = rpa.apply("bot")
    assert rpa.apply("neg", bot) == rpa.apply("top") == rpa.quotient.class_of({"1", "2"})
    assert rpa_apply(id2, "¬", bot).members == (id2.full,)
    toy = fixtures.space("TOY2")
    r = RoughParthoodAlgebra(toy)
    a, b = r.quotient.class_of("1"), r.quotient.class_of("2")
    assert r.apply("L", a).a_l == a.a_l
    assert r.apply("union", a, b).a_u == a.a_u | b.a_u
    with pytest.raises(ValueError):
        RoughParthoodAlgebra(id2).apply("n", bot, bot)
    with pytest.raises(ValueError):
        r.apply("nope", a)


def _verdicts(reports):
    return {r.claim: r for r in reports}


def test_fixture_audits(ex1):
    toy = _verdicts(quotient.audit([fixtures.space("TOY2")], ["rep1", "rep1.converse"]))
    assert toy["rep1"].verdict == toy["rep1.converse"].verdict == "holds_exhaustively"
    assert _verdicts(quotient.audit([ex1], ["Uu"]))["Uu"].verdict == "holds_exhaustively"
    n = _verdicts(quotient.audit([ex1], ["n-idemp"]))["n-idemp"]
    assert n.verdict == "fails" and n.witness["a"]["member"] == ["a"]
    rep5 = _verdicts(quotient.audit([ex1], ["rep5"]))["rep5"]
    assert rep5.verdict == "fails"
    assert quotient.REGISTRY.recheck(RoughParthoodAlgebra(ex1), rep5)


def test_random_sweep_order_and_representation_claims():
    rng = random.Random(9)
    ids = quotient.ORDER_LAWS + quotient.REPRESENTATION_LAWS + ("cs1", "cs2", "prop8")
    for _ in range(4):
        s = gen.random_space(4, rng, reflexive=True, up_directed=True)
        assert all(r.holds for r in quotient.audit([s], ids))
