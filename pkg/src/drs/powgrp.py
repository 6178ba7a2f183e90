"""The groupoid lifted to subsets, and the split operations n, i1, i2, o1, o2, o."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .audit import Claim, ClaimRegistry, ClaimReport
from .magma import FiniteGroupoid, build_updg, realization_check
from .relcore import FiniteRelationSpace, bits, check_bound, classify

SPLIT_OPS = ("n", "i1", "i2", "o1", "o2", "o")


@dataclass
class LiftedProductContext:
    """A space together with one fixed realizing groupoid."""

    space: FiniteRelationSpace
    groupoid: FiniteGroupoid
    profile: object = field(init=False, repr=False)

    def __post_init__(self):
        bad = realization_check(self.space, self.groupoid)
        if bad:
            raise ValueError(f"groupoid does not realize the space; violating cells {bad}")
        self.profile = classify(self.space)

    @classmethod
    def canonical(cls, space: FiniteRelationSpace) -> "LiftedProductContext":
        return cls(space, build_updg(space))

    @cached_property
    def _rows(self) -> list[list[int]]:
        # rows[a][B] = {a·b : b ∈ B}, filled incrementally by lowest bit
        n, T = self.space.n, self.groupoid.table
        rows = []
        for a in range(n):
            r = [0] * (1 << n)
            for m in range(1, 1 << n):
                low = m & -m
                r[m] = r[m ^ low] | 1 << T[a][low.bit_length() - 1]
            rows.append(r)
        return rows

    def product(self, A: int, B: int) -> int:
        if self.space.n <= 12:
            rows = self._rows
            out = 0
            for a in bits(A):
                out |= rows[a][B]
            return out
        T = self.groupoid.table
        return sum_bits(1 << T[a][b] for a in bits(A) for b in bits(B))

    def split(self, which: str, A: int, B: int) -> int:
        s, T = self.space, self.groupoid.table
        if which == "o":
            return self.split("o1", A, B) & self.split("o2", A, B)
        out = 0
        for a in bits(A):
            for b in bits(B):
                if s.related(a, b):
                    if which == "n":
                        out |= 1 << b
                    continue
                c = T[a][b]
                inside = {"i1": A, "i2": B, "o1": A, "o2": B}.get(which)
                if inside is None:
                    if which != "n":
                        raise ValueError(f"unknown split operation {which!r}")
                    continue
                hit = bool(inside >> c & 1)
                if hit == which.startswith("i"):
                    out |= 1 << c
        return out


def sum_bits(it) -> int:
    out = 0
    for m in it:
        out |= m
    return out


def lift_product(ctx: LiftedProductContext, A: Iterable, B: Iterable) -> frozenset[str]:
    s = ctx.space
    return s.labels(ctx.product(s.mask(A), s.mask(B)))


def split_op(ctx: LiftedProductContext, which: str, A: Iterable, B: Iterable) -> frozenset[str]:
    """Split operations; cells with ``Rab`` (where ``ab = b`` is forced) feed only ``n``."""
    if which not in SPLIT_OPS:
        raise ValueError(f"unknown split operation {which!r}; choose from {SPLIT_OPS}")
    s = ctx.space
    return s.labels(ctx.split(which, s.mask(A), s.mask(B)))


# -- claims ---------------------------------------------------------------------

REGISTRY = ClaimRegistry("powgrp", lambda c: c.space.subsets())
claim = REGISTRY.add
PARTHOOD = ("up_directed", "reflexive", "antisymmetric")
NEEDS = ("realizable",)


def _sub(a, b):
    return a & ~b == 0


@claim("order-comp", arity=3, names=("A", "B", "C"), requires=NEEDS)
def _order_comp(c, a, b, x):
    return not _sub(a, b) or _sub(c.product(a, x), c.product(b, x))


@claim("bnd2", requires=NEEDS)
def _bnd2(c, a):
    full = c.space.full
    return c.product(0, a) == 0 == c.product(a, 0) and _sub(c.product(a, full), full) \
        and _sub(c.product(full, a), full)


@claim("comp2", arity=3, names=("A", "B", "H"), requires=NEEDS, expected_failure=True)
def _comp2(c, a, b, h):
    return (c.product(a | b, h) == c.product(a, h) | c.product(b, h)
            and c.product(a & b, h) == c.product(a, h) & c.product(b, h))


@claim("comp2.union", arity=3, names=("A", "B", "H"), requires=NEEDS)
def _comp2_union(c, a, b, h):
    return c.product(a | b, h) == c.product(a, h) | c.product(b, h)


@claim("comp2.meet-sub", arity=3, names=("A", "B", "H"), requires=NEEDS)
def _comp2_meet(c, a, b, h):
    return _sub(c.product(a & b, h), c.product(a, h) & c.product(b, h))


@claim("compl-remark", arity=2, names=("A", "H"), requires=NEEDS, expected_failure=True,
       description="A^c H = (AH)^c; expected to fail, the witness confirms the remark")
def _compl(c, a, h):
    full = c.space.full
    return c.product(full & ~a, h) == full & ~c.product(a, h)


def _containment(which, bound):
    def check(c, a, b):
        return _sub(c.split(which, a, b), bound(c.space.full, a, b))
    return check


for _id, _fn in (("n", lambda f, a, b: b), ("o1", lambda f, a, b: f & ~a),
                 ("o2", lambda f, a, b: f & ~b), ("i1", lambda f, a, b: a),
                 ("i2", lambda f, a, b: b), ("o", lambda f, a, b: f & ~(a | b))):
    REGISTRY.register(Claim(_id, _containment(_id, _fn), 2, ("A", "B"), PARTHOOD, requires=NEEDS))


def _subset_pair(check):
    def inner(c, a, b):
        return not _sub(b, a) or check(c, a, b)
    return inner


REGISTRY.register(Claim("cor.1", _subset_pair(lambda c, a, b: c.split("n", a, b) == b),
                        2, ("A", "B"), PARTHOOD, requires=NEEDS, description="B ⊆ A ⇒ n(A,B) = B"))
REGISTRY.register(Claim("cor.2", _subset_pair(
    lambda c, a, b: _sub(c.split("i2", a, b), c.split("i1", a, b)) and _sub(c.split("i1", a, b), a)),
    2, ("A", "B"), PARTHOOD, requires=NEEDS, description="B ⊆ A ⇒ i2 ⊆ i1 ⊆ A"))
REGISTRY.register(Claim("cor.3", _subset_pair(
    lambda c, a, b: _sub(c.split("o1", a, b), c.split("o2", a, b))),
    2, ("A", "B"), PARTHOOD, requires=NEEDS, description="B ⊆ A ⇒ o1 ⊆ o2"))
REGISTRY.register(Claim("summary", _subset_pair(
    lambda c, a, b: c.product(a, b) == b | c.split("i1", a, b) | c.split("o2", a, b)),
    2, ("A", "B"), PARTHOOD, requires=NEEDS, description="B ⊆ A ⇒ AB = B ∪ i1 ∪ o2"))


def _elements(c):
    return range(c.space.n)


def _render_element(c, i):
    return c.space.universe[i]


def _granule_claim(which, bound):
    def check(c, x, y):
        s = c.space
        ga, gb = s.pred[x], s.pred[y]
        return _sub(c.split(which, ga, gb), bound(s.full, ga, gb))
    return check


for _id, _fn in (("n", lambda f, a, b: b), ("i1", lambda f, a, b: a), ("i2", lambda f, a, b: b),
                 ("o1", lambda f, a, b: f & ~a), ("o2", lambda f, a, b: f & ~b)):
    REGISTRY.register(Claim(f"prop7.{_id}", _granule_claim(_id, _fn), 2, ("a", "b"), PARTHOOD,
                            domain=_elements, render=_render_element, requires=NEEDS))

COMPOSITION_LAWS = ("order-comp", "bnd2", "comp2")
OPERATOR_LAWS = ("n", "o1", "o2", "i1", "i2", "o")
OPERATOR_CONSEQUENCES = ("cor.1", "cor.2", "cor.3", "summary")


def audit(contexts: Iterable[LiftedProductContext], claim_ids: Iterable[str] | None = None,
          enforce_hypothesis: bool = True) -> list[ClaimReport]:
    claims = REGISTRY.resolve(claim_ids)
    reports = []
    for ctx in contexts:
        check_bound(ctx.space, 6)
        profile = ctx.profile if enforce_hypothesis else None
        for cl in claims:
            reports.append(REGISTRY.run(ctx, cl, space_name=ctx.space.name, profile=profile))
    return reports
