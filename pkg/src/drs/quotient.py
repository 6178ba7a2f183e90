"""Rough equalities, the quotient of the powerset, and the rough parthood algebra (RPA)."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .approx import Approximator
from .audit import Claim, ClaimRegistry, ClaimReport
from .relcore import FiniteRelationSpace, check_bound, classify

KINDS = ("standard", "l", "u")
QUOTIENT_BOUND = 6

BINARY_OPS = ("dot", "n", "i1", "i2", "o1", "o2", "o", "union", "inter", "star")
UNARY_OPS = ("neg", "L", "U", "bL", "bU")
NULLARY_OPS = ("bot", "top")
RPA_OPS = BINARY_OPS + UNARY_OPS + NULLARY_OPS
_OP_ALIASES = {"·": "dot", "∪": "union", "∩": "inter", "⊛": "star", "¬": "neg",
               "𝔏": "bL", "𝔘": "bU", "⊥": "bot", "⊤": "top", "cup": "union", "cap": "inter"}


def rpa_op_id(op: str) -> str:
    op = _OP_ALIASES.get(op, op)
    if op.startswith("breve_"):
        op = op[len("breve_"):]
    if op not in RPA_OPS:
        raise ValueError(f"unknown RPA operation {op!r}; choose from {RPA_OPS}")
    return op


def _sub(a: int, b: int) -> bool:
    return a & ~b == 0


def _key(space: FiniteRelationSpace, kind: str, ctx: Approximator, m: int):
    if kind == "standard":
        return ctx(m, "l"), ctx(m, "u")
    if kind == "l":
        return ctx(m, "l"), None
    if kind == "u":
        return None, ctx(m, "u")
    raise ValueError(f"unknown rough equality {kind!r}; choose from {KINDS}")


def rough_equal(space: FiniteRelationSpace, A: Iterable, B: Iterable, kind: str = "standard") -> bool:
    ctx = Approximator(space)
    return _key(space, kind, ctx, space.mask(A)) == _key(space, kind, ctx, space.mask(B))


def _leq(ctx: Approximator, a: int, b: int, kind: str) -> bool:
    if kind == "l":
        return _sub(ctx(a, "l"), ctx(b, "l"))
    if kind == "u":
        return _sub(ctx(a, "u"), ctx(b, "u"))
    if kind == "both":
        return _leq(ctx, a, b, "l") and _leq(ctx, a, b, "u")
    raise ValueError(f"unknown rough inequality {kind!r}; choose from l, u, both")


def rough_leq(space: FiniteRelationSpace, A: Iterable, B: Iterable, kind: str = "both") -> bool:
    return _leq(Approximator(space), space.mask(A), space.mask(B), kind)


@dataclass(frozen=True)
class RoughClass:
    """One block of the powerset under a rough equality.

    ``a_l``/``a_u`` are the shared approximations (``None`` when the kind
    does not fix them)."""

    members: tuple[int, ...]
    kind: str
    a_l: int | None
    a_u: int | None
    space: FiniteRelationSpace = field(compare=False, repr=False)

    def member_sets(self) -> list[frozenset[str]]:
        return [self.space.labels(m) for m in self.members]

    def __contains__(self, subset) -> bool:
        m = subset if isinstance(subset, int) else self.space.mask(subset)
        return m in self.members

    def to_json(self) -> dict:
        s = self.space
        return {"kind": self.kind, "members": [s.ordered(m) for m in self.members],
                "a_l": None if self.a_l is None else s.ordered(self.a_l),
                "a_u": None if self.a_u is None else s.ordered(self.a_u)}


class Quotient:
    """The partition of the powerset by one rough equality, in first-member order."""

    def __init__(self, space: FiniteRelationSpace, kind: str = "standard",
                 bound: int = QUOTIENT_BOUND, ctx: Approximator | None = None):
        check_bound(space, bound)
        self.space, self.kind = space, kind
        self.approx = ctx or Approximator(space)
        groups: dict = {}
        for m in space.subsets():
            groups.setdefault(_key(space, kind, self.approx, m), []).append(m)
        self.classes = [RoughClass(tuple(ms), kind, k[0], k[1], space) for k, ms in groups.items()]
        self._of = {m: i for i, c in enumerate(self.classes) for m in c.members}

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def index_of(self, subset) -> int:
        m = subset if isinstance(subset, int) else self.space.mask(subset)
        return self._of[m]

    def class_of(self, subset) -> RoughClass:
        return self.classes[self.index_of(subset)]


def quotient(space: FiniteRelationSpace, kind: str = "standard", bound: int = QUOTIENT_BOUND) -> list[RoughClass]:
    return Quotient(space, kind, bound).classes


@dataclass(frozen=True)
class Decomposition:
    a_l: frozenset[str]
    K: frozenset[str]
    checks: dict


class DecompositionError(ValueError):
    pass


def decompose(space: FiniteRelationSpace, cls: RoughClass, X: Iterable) -> Decomposition:
    """Split a member as ``X = a_l ∪ K`` with ``K = X \\ a_l``.

    ``checks`` records ``K^l = ∅``, the printed condition ``a_l ∪ K^u = a_u``
    and the derived one ``a_l^u ∪ K^u = a_u``. The first and third are
    required and raise when they fail."""
    if cls.kind != "standard":
        raise DecompositionError("decomposition needs a class of the standard rough equality")
    x = space.mask(X)
    if x not in cls.members:
        raise DecompositionError(f"{sorted(space.labels(x))} is not a member of the class")
    ctx = Approximator(space)
    k = x & ~cls.a_l
    checks = {"K^l=∅": ctx(k, "l") == 0,
              "a_l∪K^u=a_u": cls.a_l | ctx(k, "u") == cls.a_u,
              "a_l^u∪K^u=a_u": ctx(cls.a_l, "u") | ctx(k, "u") == cls.a_u}
    for name in ("K^l=∅", "a_l^u∪K^u=a_u"):
        if not checks[name]:
            raise DecompositionError(f"representation check {name} fails for {sorted(space.labels(x))}")
    return Decomposition(space.labels(cls.a_l), space.labels(k), checks)


class RoughParthoodAlgebra:
    """Operations on the standard quotient; groupoid-based ones use the
    canonical realization when the space admits one."""

    def __init__(self, space: FiniteRelationSpace, groupoid=None, bound: int = QUOTIENT_BOUND):
        self.space = space
        self.quotient = Quotient(space, "standard", bound)
        self.approx = self.quotient.approx
        self.profile = classify(space)
        self._lifted = None
        if groupoid is not None or self.profile.realizable:
            from .magma import build_updg
            from .powgrp import LiftedProductContext
            self._lifted = LiftedProductContext(space, groupoid or build_updg(space))
        self._cache: dict = {}

    @property
    def classes(self) -> list[RoughClass]:
        return self.quotient.classes

    @cached_property
    def indices(self) -> range:
        return range(len(self.quotient))

    def _base(self, op: str):
        full, ctx = self.space.full, self.approx
        if op in ("dot", "n", "i1", "i2", "o1", "o2", "o"):
            if self._lifted is None:
                raise ValueError(f"operation {op!r} needs a realizing groupoid; "
                                 f"{self.space.name or 'the space'} has none")
            lp = self._lifted
            return lp.product if op == "dot" else (lambda a, b, op=op: lp.split(op, a, b))
        return {"union": lambda a, b: a | b, "inter": lambda a, b: a & b,
                "neg": lambda a: full & ~a, "L": lambda a: ctx(a, "l"),
                "U": lambda a: ctx(a, "u")}[op]

    def apply_index(self, op: str, *args: int) -> int:
        op = rpa_op_id(op)
        key = (op, args)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        q, space = self.quotient, self.space
        members = [self.classes[i].members for i in args]
        if op == "bot":
            m = 0
        elif op == "top":
            m = space.full
        elif op == "star":
            m = space.full
            for f in members[0]:
                for h in members[1]:
                    m &= f & h
        elif op in ("bL", "bU"):
            u = 0
            for f in members[0]:
                u |= f
            m = self.approx(u, "l" if op == "bL" else "u")
        else:
            fn = self._base(op)
            m = 0
            if op in BINARY_OPS:
                for f in members[0]:
                    for h in members[1]:
                        m |= fn(f, h)
            else:
                for f in members[0]:
                    m |= fn(f)
        arity = 2 if op in BINARY_OPS else 1 if op in UNARY_OPS else 0
        if len(args) != arity:
            raise ValueError(f"{op} takes {arity} class argument(s)")
        out = q.index_of(m)
        self._cache[key] = out
        return out

    def apply(self, op: str, *classes: RoughClass) -> RoughClass:
        idx = []
        for c in classes:
            if c.space != self.space or c.kind != "standard":
                raise ValueError("class does not belong to this quotient")
            idx.append(self.quotient.index_of(c.members[0]))
        return self.classes[self.apply_index(op, *idx)]


def rpa_apply(space: FiniteRelationSpace, op: str, *classes: RoughClass, groupoid=None) -> RoughClass:
    return RoughParthoodAlgebra(space, groupoid).apply(op, *classes)


# -- claims -------------------------------------------------------------------------

def _classes(c: RoughParthoodAlgebra):
    return c.indices


def _render_class(c: RoughParthoodAlgebra, i):
    cls = c.classes[i]
    return {"a_l": c.space.ordered(cls.a_l), "a_u": c.space.ordered(cls.a_u),
            "member": c.space.ordered(cls.members[0])}


def _subsets(c: RoughParthoodAlgebra):
    return c.space.subsets()


REGISTRY = ClaimRegistry("quotient", _classes)


def _reg(claim_id, fn, arity, on="classes", hypothesis=(), requires=(), expected_failure=False,
         description=""):
    if on == "classes":
        REGISTRY.register(Claim(claim_id, fn, arity, ("a", "b", "c"), tuple(hypothesis),
                                domain=_classes, render=_render_class, description=description,
                                expected_failure=expected_failure, requires=tuple(requires)))
    else:
        REGISTRY.register(Claim(claim_id, fn, arity, ("A", "B", "C"), tuple(hypothesis),
                                domain=_subsets, description=description,
                                expected_failure=expected_failure, requires=tuple(requires)))


def _rl(c, a, b):
    """Rough inequality between subsets: X ⊑ Y iff X^l ⊆ Y^l and X^u ⊆ Y^u."""
    return _leq(c.approx, a, b, "both")


def _cls_leq(c, i, j):
    x, y = c.classes[i], c.classes[j]
    return _sub(x.a_l, y.a_l) and _sub(x.a_u, y.a_u)


def _A(c, op, *args):
    return c.classes[c.apply_index(op, *args)]


# rough inequalities on subsets
for _k in ("l", "u", "both"):
    _reg(f"quasi-order.{_k}",
         lambda c, a, b, x, k=_k: _leq(c.approx, a, a, k) and (
             not (_leq(c.approx, a, b, k) and _leq(c.approx, b, x, k)) or _leq(c.approx, a, x, k)),
         3, on="subsets")
    _reg(f"antisymmetry.{_k}",
         lambda c, a, b, k=_k: not (_leq(c.approx, a, b, k) and _leq(c.approx, b, a, k)) or a == b,
         2, on="subsets", expected_failure=True,
         description="witness search: rough inequalities need not be antisymmetric")
_reg("cs1", lambda c, a, b, x: not _leq(c.approx, a, b, "l") or _leq(c.approx, a & x, b & x, "l"),
     3, on="subsets")
_reg("cs2", lambda c, a, b, x: not _leq(c.approx, a, b, "u") or _leq(c.approx, a | x, b | x, "u"),
     3, on="subsets")


def _decomposition_ok(c, x):
    cls = c.quotient.class_of(x)
    k = x & ~cls.a_l
    ctx = c.approx
    return ctx(k, "l") == 0 and ctx(cls.a_l, "u") | ctx(k, "u") == cls.a_u


_reg("prop8", _decomposition_ok, 1, on="subsets",
     description="X = a_l ∪ K with K^l = ∅ and a_l^u ∪ K^u = a_u")
_reg("prop8.printed",
     lambda c, x: c.quotient.class_of(x).a_l | c.approx(x & ~c.quotient.class_of(x).a_l, "u")
     == c.quotient.class_of(x).a_u, 1, on="subsets", expected_failure=True,
     description="a_l ∪ K^u = a_u as printed")

# representatives
_reg("Uu", lambda c, a: _sub(c.classes[a].a_u, _A(c, "U", a).a_u), 1)
_reg("Ll", lambda c, a: c.classes[a].a_l == _A(c, "L", a).a_l and _sub(_A(c, "L", a).a_l, _A(c, "U", a).a_l), 1)
_reg("ujoins", lambda c, a, b: _A(c, "union", a, b).a_u == c.classes[a].a_u | c.classes[b].a_u, 2)
_reg("uc", lambda c, a: _sub(_A(c, "neg", a).a_u,
                             c.approx(c.space.full & ~c.classes[a].a_l, "u")), 1)
_reg("rep1", lambda c, a: _rl(c, c.classes[a].a_l, _A(c, "L", a).a_l)
     and _rl(c, _A(c, "L", a).a_l, _A(c, "L", a).a_u), 1)
_reg("rep1.converse", lambda c, a: _rl(c, _A(c, "L", a).a_l, c.classes[a].a_l), 1,
     hypothesis=("reflexive",))
_reg("rep2", lambda c, a: _rl(c, c.classes[a].a_u, _A(c, "U", a).a_u), 1)
_reg("rep3", lambda c, a, b: _sub(c.classes[a].a_l, _A(c, "union", a, b).a_l), 2)
_reg("rep4", lambda c, a, b: _sub(c.classes[a].a_u, _A(c, "union", a, b).a_u), 2)
_reg("rep5", lambda c, a, b: _sub(_A(c, "inter", a, b).a_l, c.classes[a].a_l), 2,
     expected_failure=True)
_reg("rep6", lambda c, a, b: _sub(_A(c, "inter", a, b).a_u, c.classes[a].a_u), 2,
     expected_failure=True)
_reg("bL=L", lambda c, a: c.apply_index("bL", a) == c.apply_index("L", a), 1)
_reg("U<=bU", lambda c, a: _sub(_A(c, "U", a).a_l, _A(c, "bU", a).a_l)
     and _sub(_A(c, "U", a).a_u, _A(c, "bU", a).a_u), 1)

# algebra laws
_reg("n-idemp", lambda c, a: c.apply_index("n", a, a) == a, 1, requires=("realizable",))
_reg("join-comm", lambda c, a, b: c.apply_index("union", a, b) == c.apply_index("union", b, a), 2)
_reg("meet-comm", lambda c, a, b: c.apply_index("inter", a, b) == c.apply_index("inter", b, a), 2)
_reg("join-explosion", lambda c, a: _cls_leq(c, a, c.apply_index("union", a, a)), 1)
_reg("meet-explosion", lambda c, a: _cls_leq(c, a, c.apply_index("inter", a, a)), 1)
_reg("star-comm", lambda c, a, b: c.apply_index("star", a, b) == c.apply_index("star", b, a), 2)
_reg("abs-fail", lambda c, a, b: _cls_leq(c, a, c.apply_index("inter", c.apply_index("union", a, b), a)), 2)

ORDER_LAWS = ("Uu", "Ll", "ujoins", "uc")
REPRESENTATION_LAWS = ("rep1", "rep1.converse", "rep2", "rep3", "rep4")
REPRESENTATION_GAPS = ("rep5", "rep6")
OPERATION_LAWS = ("n-idemp", "join-comm", "meet-comm", "join-explosion", "meet-explosion",
             "star-comm", "abs-fail")


def audit(spaces: Iterable[FiniteRelationSpace], claim_ids: Iterable[str] | None = None,
          enforce_hypothesis: bool = True) -> list[ClaimReport]:
    claims = REGISTRY.resolve(claim_ids)
    reports = []
    for space in spaces:
        ctx = RoughParthoodAlgebra(space)
        profile = ctx.profile if enforce_hypothesis else None
        for cl in claims:
            reports.append(REGISTRY.run(ctx, cl, space_name=space.name, profile=profile))
    return reports
