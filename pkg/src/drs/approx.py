"""Granular and pointwise approximation operators over a finite relation space."""
from __future__ import annotations

from typing import Iterable

from .audit import ClaimRegistry, ClaimReport
from .relcore import DEFAULT_BOUND, FiniteRelationSpace, bits, check_bound, classify

GRANULAR = ("l", "l_i", "u", "u_i", "l_s", "u_s", "tri_up", "btri_up")
POINTWISE = ("l_plus", "u_plus", "li_plus", "ui_plus", "tri_down", "btri_down")
OPERATORS = ("l", "u", "tri_down", "tri_up", "btri_down", "btri_up", "l_i", "u_i",
             "l_s", "u_s", "l_plus", "u_plus", "li_plus", "ui_plus")
LOWER_TYPE = ("l", "l_i", "l_s", "l_plus", "li_plus", "tri_down", "btri_down")

SYMBOLS = {"tri_up": "△", "tri_down": "▽", "btri_up": "▲", "btri_down": "▼"}
_ALIASES = {"△": "tri_up", "▽": "tri_down", "▲": "btri_up", "▼": "btri_down",
            "l+": "l_plus", "u+": "u_plus", "li+": "li_plus", "ui+": "ui_plus",
            "l_o": "l_s", "u_o": "u_s"}


def operator_id(op: str) -> str:
    op = _ALIASES.get(op, op)
    if op not in OPERATORS:
        raise ValueError(f"unknown approximation operator {op!r}")
    return op


def _union_where(granules, pick):
    out = 0
    for g in granules:
        if pick(g):
            out |= g
    return out


class Approximator:
    """Mask-level approximation operators of one space, with cached full tables."""

    def __init__(self, space: FiniteRelationSpace):
        self.space = space
        self.profile = classify(space)
        self._tables: dict[str, list[int]] = {}

    def apply(self, a: int, op: str) -> int:
        s = self.space
        if op == "l":
            return _union_where(s.pred, lambda g: g & ~a == 0)
        if op == "u":
            return _union_where(s.pred, lambda g: g & a)
        if op == "l_i":
            return _union_where(s.succ, lambda g: g & ~a == 0)
        if op == "u_i":
            return _union_where(s.succ, lambda g: g & a)
        if op == "l_s":
            return _union_where(s.sym, lambda g: g & ~a == 0)
        if op == "u_s":
            return _union_where(s.sym, lambda g: g & a)
        if op == "u_plus":
            return sum(1 << x for x in range(s.n) if s.pred[x] & a)
        if op == "l_plus":
            return sum(1 << x for x in range(s.n) if s.pred[x] & ~a == 0)
        if op == "ui_plus":
            return sum(1 << x for x in range(s.n) if s.succ[x] & a)
        if op == "li_plus":
            return sum(1 << x for x in range(s.n) if s.succ[x] & ~a == 0)
        if op == "tri_up":
            return _union_where((s.succ[x] for x in bits(a)), bool)
        if op == "tri_down":
            return sum(1 << x for x in bits(a) if s.succ[x] & ~a == 0)
        if op == "btri_up":
            return _union_where((s.pred[x] for x in bits(a)), bool)
        if op == "btri_down":
            return sum(1 << x for x in bits(a) if s.pred[x] & ~a == 0)
        raise ValueError(f"unknown approximation operator {op!r}")

    def table(self, op: str) -> list[int]:
        t = self._tables.get(op)
        if t is None:
            check_bound(self.space)
            t = [self.apply(a, op) for a in self.space.subsets()]
            self._tables[op] = t
        return t

    def __call__(self, a: int, *ops: str) -> int:
        """Apply ``ops`` left to right: ``ctx(a, 'tri_down', 'tri_up')`` is ``(a^▽)^△``."""
        if self.space.n > DEFAULT_BOUND:
            for op in ops:
                a = self.apply(a, op)
            return a
        for op in ops:
            a = self.table(op)[a]
        return a

    def image(self, op: str) -> list[int]:
        return sorted(set(self.table(op)))


def approximate(space: FiniteRelationSpace, subset: Iterable, op: str) -> frozenset[str]:
    op = operator_id(op)
    return space.labels(Approximator(space).apply(space.mask(subset), op))


def approximate_all(space: FiniteRelationSpace, subset: Iterable) -> dict[str, frozenset[str]]:
    ctx = Approximator(space)
    a = space.mask(subset)
    return {op: space.labels(ctx.apply(a, op)) for op in OPERATORS}


def definite_masks(space: FiniteRelationSpace, lower: str = "l", upper: str = "u") -> list[int]:
    ctx = Approximator(space)
    lo, up = ctx.table(operator_id(lower)), ctx.table(operator_id(upper))
    return [a for a in space.subsets() if lo[a] == a == up[a]]


def definite_sets(space: FiniteRelationSpace, op_pair=("l", "u")) -> list[frozenset[str]]:
    """Subsets fixed by both members of ``op_pair``."""
    return [space.labels(a) for a in definite_masks(space, *op_pair)]


# -- claims --------------------------------------------------------------

def _sub(a: int, b: int) -> bool:
    return a & ~b == 0


def _all_subsets(ctx: Approximator):
    return ctx.space.subsets()


REGISTRY = ClaimRegistry("approx", _all_subsets)
claim = REGISTRY.add

REFL = ("up_directed", "reflexive")
UPDIR = ("up_directed",)


@claim("l-id", hypothesis=REFL)
def _l_id(c, a):
    return c(a, "l", "l") == c(a, "l") and _sub(c(a, "l"), a)


@claim("u-wid", hypothesis=REFL)
def _u_wid(c, a):
    return _sub(a, c(a, "u")) and _sub(c(a, "u"), c(a, "u", "u"))


@claim("lu-inc", hypothesis=UPDIR)
def _lu_inc(c, a):
    return _sub(c(a, "l"), c(a, "l", "u")) and _sub(c(a, "l", "u"), c(a, "u"))


@claim("l-mo", arity=2, hypothesis=UPDIR)
def _l_mo(c, a, b):
    return not _sub(a, b) or _sub(c(a, "l"), c(b, "l"))


@claim("u-mo", arity=2, hypothesis=UPDIR)
def _u_mo(c, a, b):
    return not _sub(a, b) or _sub(c(a, "u"), c(b, "u"))


@claim("bnd", arity=0, hypothesis=REFL)
def _bnd(c):
    full = c.space.full
    return c(full, "u") == full == c(full, "l") and c(0, "l") == 0 == c(0, "u")


@claim("u-union", arity=2, hypothesis=UPDIR)
def _u_union(c, a, b):
    return c(a | b, "u") == c(a, "u") | c(b, "u")


@claim("l-union", arity=2, hypothesis=UPDIR)
def _l_union(c, a, b):
    return _sub(c(a, "l") | c(b, "l"), c(a | b, "l"))


@claim("l-union0", arity=2, hypothesis=REFL, expected_failure=True)
def _l_union0(c, a, b):
    return a & b or c(a, "l") | c(b, "l") == c(a | b, "l")


@claim("l-cap", arity=2, hypothesis=UPDIR)
def _l_cap(c, a, b):
    return _sub(c(a & b, "l"), c(a, "l") & c(b, "l"))


@claim("u-cap", arity=2, hypothesis=UPDIR)
def _u_cap(c, a, b):
    return _sub(c(a & b, "u"), c(a, "u") & c(b, "u"))


@claim("l-id0", hypothesis=UPDIR)
def _l_id0(c, a):
    return _l_id(c, a)


@claim("u-wid0", hypothesis=UPDIR)
def _u_wid0(c, a):
    return _sub(c(a, "u"), c(a, "u", "u"))


@claim("bnd0", arity=0, hypothesis=UPDIR)
def _bnd0(c):
    full = c.space.full
    return c(full, "l") == c(full, "u") and c(0, "l") == 0 == c(0, "u")


def _literal_tri_up(c, a):
    s = c.space
    return sum(1 << x for x in range(s.n) if any(s.related(y, x) for y in bits(a)))


def _literal_btri_up(c, a):
    s = c.space
    return sum(1 << x for x in range(s.n) if any(s.related(x, y) for y in bits(a)))


@claim("prop4.△-formula")
def _p4_tri(c, a):
    return c(a, "tri_up") == _literal_tri_up(c, a)


@claim("prop4.△⊆u+")
def _p4_tri_uplus(c, a):
    return _sub(c(a, "tri_up"), c(a, "u_plus"))


@claim("prop4.u+⊆u_i", expected_failure=True)
def _p4_uplus_ui(c, a):
    return _sub(c(a, "u_plus"), c(a, "u_i"))


@claim("prop4.▲-formula")
def _p4_btri(c, a):
    return c(a, "btri_up") == _literal_btri_up(c, a)


@claim("prop4.▲⊆u", expected_failure=True)
def _p4_btri_u(c, a):
    return _sub(c(a, "btri_up"), c(a, "u"))


def _composition_claims():
    # Superscripts compose left to right; "@rtl" variants apply the
    # rightmost operator first.
    pairs = {"l=▽△": ("l", "tri_down", "tri_up"), "l_i=▼▲": ("l_i", "btri_down", "btri_up"),
             "u=△▲": ("u", "tri_up", "btri_up"), "u_i=▲△": ("u_i", "btri_up", "tri_up")}
    for tag, (lhs, first, second) in pairs.items():
        expected = tag.startswith("l")

        def ltr(c, a, lhs=lhs, first=first, second=second):
            return c(a, lhs) == c(a, first, second)

        def rtl(c, a, lhs=lhs, first=first, second=second):
            return c(a, lhs) == c(a, second, first)

        REGISTRY.add(f"prop5.{tag}", hypothesis=("reflexive",), expected_failure=expected)(ltr)
        REGISTRY.add(f"prop5.{tag}@rtl", hypothesis=("reflexive",), expected_failure=expected)(rtl)


_composition_claims()


@claim("prop5.△⊆u+⊆u_i", hypothesis=("reflexive",))
def _p5_chain(c, a):
    return _sub(c(a, "tri_up"), c(a, "u_plus")) and _sub(c(a, "u_plus"), c(a, "u_i"))


@claim("prop5.A⊆▲⊆u", hypothesis=("reflexive",))
def _p5_btri_chain(c, a):
    return _sub(a, c(a, "btri_up")) and _sub(c(a, "btri_up"), c(a, "u"))


@claim("prop5.▽⊆A⊆△", hypothesis=("reflexive",))
def _p5_tri_sandwich(c, a):
    return _sub(c(a, "tri_down"), a) and _sub(a, c(a, "tri_up"))


@claim("prop5.▼⊆A⊆▲", hypothesis=("reflexive",))
def _p5_btri_sandwich(c, a):
    return _sub(c(a, "btri_down"), a) and _sub(a, c(a, "btri_up"))


@claim("prop5.△c=c▽", hypothesis=("reflexive",), expected_failure=True)
def _p5_tri_compl(c, a):
    full = c.space.full
    return full & ~c(a, "tri_up") == c(full & ~a, "tri_down")


@claim("prop5.▲c=c▼", hypothesis=("reflexive",), expected_failure=True)
def _p5_btri_compl(c, a):
    full = c.space.full
    return full & ~c(a, "btri_up") == c(full & ~a, "btri_down")


REFLEXIVE_LAWS = ("l-id", "u-wid", "lu-inc", "l-mo", "u-mo", "bnd", "u-union", "l-union",
            "l-union0", "l-cap", "u-cap")
REFLEXIVE_LAWS_PROVABLE = tuple(c for c in REFLEXIVE_LAWS if c != "l-union0")
GENERAL_LAWS = ("l-id0", "u-wid0", "lu-inc", "l-mo", "u-mo", "bnd0", "u-union", "l-union",
            "l-cap", "u-cap")


def audit(spaces: Iterable[FiniteRelationSpace], claim_ids: Iterable[str] | None = None,
          mode: str = "exhaustive", samples: int = 2000, seed: int = 0,
          enforce_hypothesis: bool = True) -> list[ClaimReport]:
    """Evaluate approximation claims over every space; reports in claim order per space."""
    claims = REGISTRY.resolve(claim_ids)
    reports = []
    for space in spaces:
        ctx = Approximator(space)
        if mode == "exhaustive":
            check_bound(space)
        profile = ctx.profile if enforce_hypothesis else None
        for cl in claims:
            reports.append(REGISTRY.run(ctx, cl, mode=mode, samples=samples, seed=seed,
                                        space_name=space.name, profile=profile))
    return reports
