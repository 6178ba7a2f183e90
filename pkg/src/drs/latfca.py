"""Lattices of local approximations, distributivity criteria and the
formal-context view of a relation."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .approx import Approximator, operator_id
from .audit import ClaimRegistry, ClaimReport
from .relcore import FiniteRelationSpace, bits, check_bound, classify

LATTICE_OPS = ("tri_up", "tri_down", "btri_up", "btri_down")


class NotALattice(ValueError):
    pass


def _key(m: int):
    return (bin(m).count("1"), m)


def covers(leq: Sequence[Sequence[bool]]) -> list[tuple[int, int]]:
    """Covering pairs (transitive reduction) of a finite partial order given as a matrix."""
    n = len(leq)
    out = []
    for a, b in product(range(n), repeat=2):
        if a != b and leq[a][b] and not any(
                c not in (a, b) and leq[a][c] and leq[c][b] for c in range(n)):
            out.append((a, b))
    return out


@dataclass(eq=False)
class FiniteLattice:
    """A family of subsets ordered by inclusion, with joins and meets computed
    as genuine least upper / greatest lower bounds inside the family."""

    elements: tuple[int, ...]
    universe: tuple[str, ...]
    name: str | None = None
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.elements = tuple(sorted(set(self.elements), key=_key))
        self.index = {m: i for i, m in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return len(self.elements)

    @cached_property
    def leq(self) -> np.ndarray:
        return np.array([[a & ~b == 0 for b in self.elements] for a in self.elements], dtype=bool)

    def _bound(self, i: int, j: int, upper: bool) -> int:
        L = self.leq
        if upper:
            cand = np.flatnonzero(L[i] & L[j])
            best = [c for c in cand if L[c, cand].all()]
        else:
            cand = np.flatnonzero(L[:, i] & L[:, j])
            best = [c for c in cand if L[cand, c].all()]
        if len(best) != 1:
            kind = "join" if upper else "meet"
            raise NotALattice(f"no {kind} for {self.labels(self.elements[i])} and "
                              f"{self.labels(self.elements[j])}")
        return int(best[0])

    @cached_property
    def join_table(self) -> np.ndarray:
        k = self.size
        return np.array([[self._bound(i, j, True) for j in range(k)] for i in range(k)], dtype=np.int64)

    @cached_property
    def meet_table(self) -> np.ndarray:
        k = self.size
        return np.array([[self._bound(i, j, False) for j in range(k)] for i in range(k)], dtype=np.int64)

    def join(self, a: int, b: int) -> int:
        return self.elements[self.join_table[self.index[a], self.index[b]]]

    def meet(self, a: int, b: int) -> int:
        return self.elements[self.meet_table[self.index[a], self.index[b]]]

    @property
    def bottom(self) -> int:
        return self.elements[int(np.flatnonzero(self.leq.all(axis=1))[0])]

    @property
    def top(self) -> int:
        return self.elements[int(np.flatnonzero(self.leq.all(axis=0))[0])]

    def labels(self, m: int) -> list[str]:
        return [self.universe[i] for i in bits(m)]

    def check_axioms(self) -> dict[str, bool]:
        J, M = self.join_table, self.meet_table
        k = np.arange(self.size)
        a, b, c = np.ix_(k, k, k)
        return {
            "idempotent": bool((J[k, k] == k).all() and (M[k, k] == k).all()),
            "commutative": bool((J == J.T).all() and (M == M.T).all()),
            "associative": bool((J[J[a, b], c] == J[a, J[b, c]]).all()
                                and (M[M[a, b], c] == M[a, M[b, c]]).all()),
            "absorption": bool((J[k[:, None], M] == k[:, None]).all()
                               and (M[k[:, None], J] == k[:, None]).all()),
        }

    def covers(self) -> list[tuple[int, int]]:
        return [(self.elements[a], self.elements[b]) for a, b in covers(self.leq.tolist())]

    def to_json(self) -> dict:
        return {"name": self.name, "elements": [self.labels(m) for m in self.elements],
                "covers": [[self.labels(a), self.labels(b)] for a, b in self.covers()]}


def distributivity(L: FiniteLattice) -> tuple[bool, tuple | None]:
    """Exhaustive ``x∧(y∨z) = (x∧y)∨(x∧z)``; witness is the least failing triple."""
    J, M = L.join_table, L.meet_table
    k = np.arange(L.size)
    x, y, z = np.ix_(k, k, k)
    bad = M[x, J[y, z]] != J[M[x, y], M[x, z]]
    if not bad.any():
        return True, None
    i, j, l = np.unravel_index(int(np.argmax(bad.reshape(-1))), bad.shape)
    return False, tuple(L.elements[t] for t in (i, j, l))


def is_completely_distributive(L: FiniteLattice) -> tuple[bool, dict | None]:
    """For finite lattices complete distributivity is plain distributivity."""
    ok, triple = distributivity(L)
    if ok:
        return True, None
    return False, dict(zip("xyz", (L.labels(m) for m in triple)))


def cji(L: FiniteLattice) -> list[int]:
    """Completely join-irreducible elements: not the join of everything strictly below."""
    out = []
    for m in L.elements:
        below = [e for e in L.elements if e != m and e & ~m == 0]
        acc = L.bottom
        for e in below:
            acc = L.join(acc, e)
        if acc != m:
            out.append(m)
    return out


def is_spatial(L: FiniteLattice) -> bool:
    irreducible = cji(L)
    for m in L.elements:
        acc = L.bottom
        for e in irreducible:
            if e & ~m == 0:
                acc = L.join(acc, e)
        if acc != m:
            return False
    return True


def image_lattice(space: FiniteRelationSpace, op: str, ctx: Approximator | None = None) -> FiniteLattice:
    check_bound(space)
    op = operator_id(op)
    if op not in LATTICE_OPS:
        raise ValueError(f"image lattices are built for {LATTICE_OPS}, not {op!r}")
    ctx = ctx or Approximator(space)
    tag = {"tri_up": "△", "tri_down": "▽", "btri_up": "▲", "btri_down": "▼"}[op]
    return FiniteLattice(tuple(set(ctx.table(op))), space.universe,
                         f"{space.name or 'S'}^{tag}")


PRINTED_MEET = {"tri_up": ("btri_down", "tri_up"), "btri_up": ("tri_down", "btri_up")}
# Swapping the pointwise operator gives the union of the granules inside A∩B
# whenever R is reflexive.
ALT_MEET = {"tri_up": ("tri_down", "tri_up"), "btri_up": ("btri_down", "btri_up")}


def printed_meet(space: FiniteRelationSpace, op: str, ctx: Approximator | None = None,
                 formula: dict = PRINTED_MEET) -> Callable[[int, int], int]:
    """The meet formula as printed: (A∩B) followed by the two listed operators, left to right."""
    ctx = ctx or Approximator(space)
    first, second = formula[operator_id(op)]
    return lambda a, b: ctx(a & b, first, second)


def dual_iso_check(space: FiniteRelationSpace, ctx: Approximator | None = None) -> dict:
    """Does complementation map one image family onto the other (reversing ⊆)?

    Reports the two pairings of the duality results (△/▽, ▲/▼) and, for
    comparison, the crossed pairings △/▼ and ▲/▽."""
    ctx = ctx or Approximator(space)
    full = space.full
    fam = {op: set(ctx.table(op)) for op in LATTICE_OPS}
    out = {}
    for a, b in (("tri_up", "tri_down"), ("btri_up", "btri_down"),
                 ("tri_up", "btri_down"), ("btri_up", "tri_down")):
        image = {full & ~m for m in fam[a]}
        missing = sorted(image - fam[b], key=_key)
        extra = sorted(fam[b] - image, key=_key)
        out[f"{a}/{b}"] = {
            "holds": not missing and not extra,
            "complement_outside": space.ordered(missing[0]) if missing else None,
            "not_a_complement": space.ordered(extra[0]) if extra else None,
        }
    return out


# -- first-order criteria -----------------------------------------------------------

def tr23_condition(space: FiniteRelationSpace) -> tuple[bool, dict]:
    """``Rab ⇒ ∃n,h: Ran ∧ Rhb ∧ ∀x (Rxn ⇒ [h]_i ⊆ [x]_i)``; returns the first
    ``(n, h)`` per pair in lexicographic order, or the failing pair."""
    n, succ, pred, U = space.n, space.succ, space.pred, space.universe
    chosen = {}
    for a, b in product(range(n), repeat=2):
        if not space.related(a, b):
            continue
        found = None
        for x_n, h in product(range(n), repeat=2):
            if space.related(a, x_n) and space.related(h, b) and all(
                    succ[h] & ~succ[x] == 0 for x in bits(pred[x_n])):
                found = (U[x_n], U[h])
                break
        if found is None:
            return False, {"a": U[a], "b": U[b]}
        chosen[(U[a], U[b])] = found
    return True, chosen


def ei_condition(space: FiniteRelationSpace, which: str = "ei3",
                 ctx: Approximator | None = None) -> tuple[bool, dict | None]:
    """For every completely join-irreducible granule ``g = [s]_i`` (ei3) or
    ``[s]`` (ei4): ``g`` is not covered by the granules not containing it."""
    if which not in ("ei3", "ei4"):
        raise ValueError("which must be 'ei3' or 'ei4'")
    op = "tri_up" if which == "ei3" else "btri_up"
    L = image_lattice(space, op, ctx)
    if not is_spatial(L):
        raise ValueError(f"the {op} lattice is not spatial; {which} is not applicable")
    granules = space.succ if which == "ei3" else space.pred
    irreducible = set(cji(L))
    for s in range(space.n):
        g = granules[s]
        if g not in irreducible:
            continue
        cover = 0
        for x in granules:
            if g & ~x:
                cover |= x
        if g & ~cover == 0:
            return False, {"s": space.universe[s], "granule": space.ordered(g)}
    return True, None


def triagrp_condition(space: FiniteRelationSpace, G) -> tuple[bool, dict | None]:
    """``ab = b ⇒ ∃n,h ∀k,s: an = n ∧ hb = b ∧ (kn = n ⇒ (hs = s ⇒ ks = s))``."""
    from .magma import realization_check
    bad = realization_check(space, G)
    if bad:
        raise ValueError(f"groupoid does not realize the space; violating cells {bad}")
    T, n, U = G.table, G.n, G.universe
    for a, b in product(range(n), repeat=2):
        if T[a][b] != b:
            continue
        ok = any(T[a][x] == x and T[h][b] == b and all(
                     T[k][x] != x or T[h][s] != s or T[k][s] == s
                     for k, s in product(range(n), repeat=2))
                 for x, h in product(range(n), repeat=2))
        if not ok:
            return False, {"a": U[a], "b": U[b]}
    return True, None


# -- formal concept analysis ------------------------------------------------------

@dataclass(frozen=True)
class FormalContext:
    """Objects and attributes are both the universe; ``rows[g]`` is the mask of
    attributes ``m`` with ``g I m``."""

    universe: tuple[str, ...]
    rows: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.universe)

    @cached_property
    def cols(self) -> tuple[int, ...]:
        return tuple(sum(1 << g for g in range(self.n) if self.rows[g] >> m & 1)
                     for m in range(self.n))

    def incidence(self) -> list[tuple[str, str]]:
        U = self.universe
        return [(U[g], U[m]) for g in range(self.n) for m in bits(self.rows[g])]


def context_of(space: FiniteRelationSpace) -> FormalContext:
    """``I = (S × S) \\ R``."""
    full = space.full
    return FormalContext(space.universe, tuple(full & ~s for s in space.succ))


def _derive(ctx: FormalContext, m: int, side: str) -> int:
    table = ctx.rows if side == "objects" else ctx.cols
    out = (1 << ctx.n) - 1
    for x in bits(m):
        out &= table[x]
    return out


def derive(ctx: FormalContext, X: Iterable, side: str = "objects") -> frozenset[str]:
    """``X^I``: common attributes of objects ``X`` (or common objects of attributes)."""
    if side not in ("objects", "attributes"):
        raise ValueError("side must be 'objects' or 'attributes'")
    index = {x: i for i, x in enumerate(ctx.universe)}
    m = 0
    for x in X:
        m |= 1 << index[str(x)]
    r = _derive(ctx, m, side)
    return frozenset(ctx.universe[i] for i in bits(r))


def concept_masks(ctx: FormalContext) -> list[tuple[int, int]]:
    check_bound(FiniteRelationSpace(ctx.universe, frozenset()), 12)
    seen = {}
    for y in range(1 << ctx.n):
        extent = _derive(ctx, y, "attributes")
        if extent not in seen:
            seen[extent] = _derive(ctx, extent, "objects")
    return sorted(seen.items(), key=lambda p: _key(p[0]))


def concepts(ctx: FormalContext) -> list[tuple[frozenset[str], frozenset[str]]]:
    U = ctx.universe
    lab = lambda m: frozenset(U[i] for i in bits(m))
    return [(lab(e), lab(i)) for e, i in concept_masks(ctx)]


def concept_lattice(ctx: FormalContext) -> FiniteLattice:
    """Concepts ordered by extent inclusion (elements are the extents)."""
    return FiniteLattice(tuple(e for e, _ in concept_masks(ctx)), ctx.universe, "concepts")


def th40_condition(ctx: FormalContext) -> tuple[bool, dict | None]:
    """For every ``(g, m) ∉ I`` some ``h, n`` have ``(g, n) ∉ I``, ``(h, m) ∉ I``
    and ``h ∈ {k}^II`` for all ``k ∉ {n}^I``."""
    n, U = ctx.n, ctx.universe
    closure = [_derive(ctx, ctx.rows[k], "attributes") for k in range(n)]  # {k}^II
    for g, m in product(range(n), repeat=2):
        if ctx.rows[g] >> m & 1:
            continue
        ok = False
        for x_n, h in product(range(n), repeat=2):
            if ctx.rows[g] >> x_n & 1 or ctx.rows[h] >> m & 1:
                continue
            outside = ((1 << n) - 1) & ~ctx.cols[x_n]
            if all(closure[k] >> h & 1 for k in bits(outside)):
                ok = True
                break
        if not ok:
            return False, {"g": U[g], "m": U[m]}
    return True, None


def lattice_dot(L: FiniteLattice) -> str:
    from .documents import digraph_dot, set_label
    names = [set_label(L.labels(m)) for m in L.elements]
    pos = L.index
    edges = [(names[pos[a]], names[pos[b]]) for a, b in L.covers()]
    return digraph_dot(L.name or "lattice", names, edges, rankdir="BT")


# -- audit ------------------------------------------------------------------------

class LatticeContext:
    """Everything the lattice claims need about one space, computed lazily."""

    def __init__(self, space: FiniteRelationSpace):
        self.space = space
        self.approx = Approximator(space)
        self.profile = classify(space)
        self._lat: dict = {}
        self._cd: dict = {}

    def lattice(self, op: str) -> FiniteLattice:
        if op not in self._lat:
            self._lat[op] = image_lattice(self.space, op, self.approx)
        return self._lat[op]

    def cd(self, op: str) -> bool:
        if op not in self._cd:
            L = self.concepts if op == "concepts" else self.lattice(op)
            self._cd[op] = is_completely_distributive(L)[0]
        return self._cd[op]

    @cached_property
    def context(self) -> FormalContext:
        return context_of(self.space)

    @cached_property
    def concepts(self) -> FiniteLattice:
        return concept_lattice(self.context)


REGISTRY = ClaimRegistry("latfca", lambda c: [()])
claim = REGISTRY.add
REFL_ANTI = ("reflexive", "antisymmetric")


def _agreement(name_a: str, a: bool, name_b: str, b: bool):
    return a == b, {name_a: a, name_b: b}


@claim("cor2.6(i)", arity=0, hypothesis=REFL_ANTI)
def _cor26i(c):
    return _agreement("cd_tri_up", c.cd("tri_up"), "transitive", c.profile.transitive)


@claim("cor2.6(ii)", arity=0, hypothesis=REFL_ANTI)
def _cor26ii(c):
    return _agreement("cd_tri_up", c.cd("tri_up"), "cd_btri_up", c.cd("btri_up"))


def _lub_glb_check(c, op, formula=PRINTED_MEET):
    L = c.lattice(op)
    meet = printed_meet(c.space, op, c.approx, formula)
    for a, b in product(L.elements, repeat=2):
        if a | b != L.join(a, b):
            return False, {"A": L.labels(a), "B": L.labels(b), "failing": "join"}
        if meet(a, b) != L.meet(a, b):
            return False, {"A": L.labels(a), "B": L.labels(b), "failing": "printed meet",
                           "printed": L.labels(meet(a, b)), "glb": L.labels(L.meet(a, b))}
    return True, None


@claim("tr1", arity=0, expected_failure=True)
def _tr1(c):
    return _lub_glb_check(c, "tri_up")


@claim("tr1.bt", arity=0, expected_failure=True)
def _tr1_bt(c):
    return _lub_glb_check(c, "btri_up")


@claim("tr1.alt", arity=0, hypothesis=("reflexive",))
def _tr1_alt(c):
    return _lub_glb_check(c, "tri_up", ALT_MEET)


@claim("tr1.bt.alt", arity=0, hypothesis=("reflexive",))
def _tr1_bt_alt(c):
    return _lub_glb_check(c, "btri_up", ALT_MEET)


@claim("tr2", arity=0, expected_failure=True)
def _tr2(c):
    r = dual_iso_check(c.space, c.approx)["tri_up/tri_down"]
    return r["holds"], r


@claim("tr3", arity=0, expected_failure=True)
def _tr3(c):
    r = dual_iso_check(c.space, c.approx)["btri_up/btri_down"]
    return r["holds"], r


@claim("tr2.cross", arity=0, hypothesis=("reflexive",))
def _tr2_cross(c):
    r = dual_iso_check(c.space, c.approx)["tri_up/btri_down"]
    return r["holds"], r


@claim("tr3.cross", arity=0, hypothesis=("reflexive",))
def _tr3_cross(c):
    r = dual_iso_check(c.space, c.approx)["btri_up/tri_down"]
    return r["holds"], r


@claim("tr23", arity=0)
def _tr23(c):
    return _agreement("tr23", tr23_condition(c.space)[0], "cd_tri_up", c.cd("tri_up"))


@claim("tr24", arity=0)
def _tr24(c):
    if not is_spatial(c.lattice("tri_up")):
        return True, None
    return _agreement("ei3", ei_condition(c.space, "ei3", c.approx)[0], "cd_tri_up", c.cd("tri_up"))


@claim("cor2.5", arity=0)
def _cor25(c):
    if not is_spatial(c.lattice("btri_up")):
        return True, None
    return _agreement("ei4", ei_condition(c.space, "ei4", c.approx)[0], "cd_btri_up", c.cd("btri_up"))


@claim("th40", arity=0)
def _th40(c):
    return _agreement("th40", th40_condition(c.context)[0], "cd_concepts", c.cd("concepts"))


@claim("fca-cd", arity=0)
def _fca_cd(c):
    return _agreement("cd_concepts", c.cd("concepts"), "cd_tri_up", c.cd("tri_up"))


@claim("triagrp", arity=0, requires=("realizable",))
def _triagrp(c):
    from .magma import build_updg
    G = build_updg(c.space)
    return _agreement("triagrp", triagrp_condition(c.space, G)[0], "tr23", tr23_condition(c.space)[0])


def audit(spaces: Iterable[FiniteRelationSpace], claim_ids: Iterable[str] | None = None,
          enforce_hypothesis: bool = True) -> list[ClaimReport]:
    claims = REGISTRY.resolve(claim_ids)
    reports = []
    for space in spaces:
        ctx = LatticeContext(space)
        profile = ctx.profile if enforce_hypothesis else None
        for cl in claims:
            reports.append(REGISTRY.run(ctx, cl, space_name=space.name, profile=profile))
    return reports
