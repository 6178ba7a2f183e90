import random
from math import comb

import pytest

from drs import gen
from drs.relcore import classify

from . import oracle


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 27)])
def test_reflexive_antisymmetric_counts(n, count):
    rels = list(gen.reflexive_antisymmetric(n))
    assert len(rels) == count == 3 ** comb(n, 2)
    assert all(oracle.is_reflexive(s) and oracle.is_antisymmetric(s) for s in rels)


def test_enumeration_counts():
    assert len(list(gen.reflexive_relations(3))) == 2 ** 6
    assert len(list(gen.all_relations(2))) == 2 ** 4
    assert len(list(gen.posets(4))) == 219
    assert len(list(gen.equivalences(4))) == 15  # Bell number


@pytest.mark.parametrize("flags", [dict(reflexive=True, up_directed=True),
                                   dict(reflexive=True, antisymmetric=True, up_directed=True),
                                   dict(up_directed=True), dict(reflexive=True, antisymmetric=True)])
def test_random_space_flags(flags):
    rng = random.Random(0)
    for _ in range(25):
        s = gen.random_space(5, rng, **flags)
        p = classify(s)
        assert all(getattr(p, k) for k, v in flags.items() if v)


def test_seeded_and_isomorphism():
    assert gen.random_space(4, 3) == gen.random_space(4, 3)
    classes = gen.up_to_isomorphism(gen.posets(3))
    assert len(classes) == 5  # unlabeled posets on 3 points
