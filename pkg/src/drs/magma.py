"""Finite groupoids built from relations: up-directed realizations, the
equivalence groupoid, directoids, g-ideals and compatible tolerances."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import combinations, islice, product
from operator import mul as _mul
from typing import Callable, Iterator, Sequence

import numpy as np

from .audit import FAILS, HOLDS, ClaimReport
from .relcore import (BoundExceeded, FiniteRelationSpace, SpaceError, bits,
                      classify)
from .terms import Identity, Term, TermError, Var, parse_identity

Chooser = Callable[[int, int, int], int]


class NotUpDirected(ValueError):
    def __init__(self, pair):
        super().__init__(f"U_R{pair} is empty; the relation is not up-directed")
        self.pair = pair


class PreconditionViolated(ValueError):
    def __init__(self, flag: str, witness=None):
        super().__init__(f"precondition failed: relation is not {flag} (witness {witness})")
        self.flag = flag
        self.witness = witness


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """A total binary operation on ``universe``; ``table[a][b]`` is the index of ``a·b``."""

    universe: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "table", tuple(tuple(int(v) for v in row) for row in self.table))
        n = len(self.universe)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError(f"table must be {n}x{n}")
        if any(not 0 <= v < n for row in self.table for v in row):
            raise ValueError("table cell outside the universe (operation must be total)")

    def __eq__(self, other):
        return (isinstance(other, FiniteGroupoid) and self.universe == other.universe
                and self.table == other.table)

    def __hash__(self):
        return hash((self.universe, self.table))

    @property
    def n(self) -> int:
        return len(self.universe)

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.table, dtype=np.int64).reshape(self.n, self.n)
        a.flags.writeable = False
        return a

    @cached_property
    def index(self):
        return {x: i for i, x in enumerate(self.universe)}

    def idx(self, label) -> int:
        try:
            return self.index[str(label)]
        except KeyError:
            raise SpaceError(f"unknown element {label!r}") from None

    def __call__(self, a, b) -> str:
        """Product of two labels."""
        return self.universe[self.table[self.idx(a)][self.idx(b)]]

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<FiniteGroupoid{tag} n={self.n}>"


# -- terms and identities --------------------------------------------------

def eval_term(G: FiniteGroupoid, term: Term | str, assignment) -> str:
    if isinstance(term, str):
        from .terms import parse_word
        term = parse_word(term)

    def ev(t):
        if isinstance(t, Var):
            try:
                return G.idx(assignment[t.name])
            except KeyError:
                raise TermError(f"unbound variable {t.name!r}") from None
        left, right = (ev(a) for a in t.args)
        return G.table[left][right]

    return G.universe[ev(term)]


def _eval_stack(stack: np.ndarray, term: Term, env: dict) -> np.ndarray:
    """Vectorized evaluation over a stack of tables ``(k, n, n)`` and index grids."""
    if isinstance(term, Var):
        return env[term.name]
    left = _eval_stack(stack, term.args[0], env)
    right = _eval_stack(stack, term.args[1], env)
    return stack[env["__g"], left, right]


def _identity_failures(stack: np.ndarray, identity: Identity) -> np.ndarray:
    """Boolean array ``(k, n, ..., n)``: True where an assignment refutes ``identity``."""
    names = identity.variables()
    k, n = stack.shape[0], stack.shape[1]
    nv = len(names)
    env = {}
    for pos, name in enumerate(names):
        shape = [1] * (nv + 1)
        shape[pos + 1] = n
        env[name] = np.arange(n).reshape(shape)
    env["__g"] = np.arange(k).reshape([k] + [1] * nv)
    lhs = _eval_stack(stack, identity.lhs, env)
    rhs = _eval_stack(stack, identity.rhs, env)
    full = (k,) + (n,) * nv
    return np.broadcast_to(lhs != rhs, full)


def as_identity(identity: Identity | str) -> Identity:
    return parse_identity(identity) if isinstance(identity, str) else identity


def holds_identity(G: FiniteGroupoid, identity: Identity | str) -> tuple[bool, dict | None]:
    """Exhaustive check over all assignments; witness is the least failing
    assignment with variables in alphabetical order."""
    identity = as_identity(identity)
    bad = _identity_failures(G.array[None], identity)[0]
    if not bad.any():
        return True, None
    pos = np.unravel_index(int(np.argmax(bad.reshape(-1))), bad.shape)
    names = identity.variables()
    return False, {name: G.universe[int(i)] for name, i in zip(names, pos)}


def holds_identity_all(groupoids: Sequence[FiniteGroupoid] | np.ndarray,
                       identity: Identity | str) -> np.ndarray:
    """Per-groupoid verdicts for many groupoids on one universe size."""
    identity = as_identity(identity)
    stack = groupoids if isinstance(groupoids, np.ndarray) else np.stack([g.array for g in groupoids])
    bad = _identity_failures(stack, identity)
    return ~bad.reshape(bad.shape[0], -1).any(axis=1)


# -- groupoids of an up-directed relation -----------------------------------

def canonical_chooser(a: int, b: int, candidates: int) -> int:
    """Least candidate in universe order."""
    return (candidates & -candidates).bit_length() - 1


def _free_cells(space: FiniteRelationSpace) -> list[tuple[int, int, int]]:
    cells = []
    for a, b in product(range(space.n), repeat=2):
        if space.related(a, b):
            continue
        u = space.succ[a] & space.succ[b]
        if not u:
            raise NotUpDirected((space.universe[a], space.universe[b]))
        cells.append((a, b, u))
    return cells


def _forced_table(space: FiniteRelationSpace) -> list[list[int]]:
    return [[b if space.related(a, b) else -1 for b in range(space.n)] for a in range(space.n)]


def build_updg(space: FiniteRelationSpace, chooser: Chooser = canonical_chooser) -> FiniteGroupoid:
    """``ab = b`` when ``Rab``, otherwise the chooser's pick from ``U_R(a, b)``."""
    table = _forced_table(space)
    for a, b, u in _free_cells(space):
        c = chooser(a, b, u)
        if not u >> c & 1:
            raise ValueError(f"chooser picked {c} outside U_R({a}, {b})")
        table[a][b] = c
    return FiniteGroupoid(space.universe, table, space.name and f"B({space.name})")


def count_updg(space: FiniteRelationSpace) -> int:
    return reduce(_mul, (bin(u).count("1") for _, _, u in _free_cells(space)), 1)


def enumerate_updg(space: FiniteRelationSpace, limit: int | None = None) -> Iterator[FiniteGroupoid]:
    """All realizations, free cells in row-major order, choices in universe order."""
    cells = _free_cells(space)
    base = _forced_table(space)
    options = [list(bits(u)) for _, _, u in cells]
    for choice in islice(product(*options), limit):
        table = [row[:] for row in base]
        for (a, b, _), c in zip(cells, choice):
            table[a][b] = c
        yield FiniteGroupoid(space.universe, table)


def updg_stack(space: FiniteRelationSpace, limit: int | None = None) -> np.ndarray:
    """All realizations stacked as a ``(k, n, n)`` array (same order as the stream)."""
    cells = _free_cells(space)
    base = np.array(_forced_table(space), dtype=np.int64).reshape(space.n, space.n)
    options = [list(bits(u)) for _, _, u in cells]
    choices = np.array(list(islice(product(*options), limit)), dtype=np.int64)
    stack = np.repeat(base[None], len(choices), axis=0)
    for col, (a, b, _) in enumerate(cells):
        stack[:, a, b] = choices[:, col]
    return stack


def realization_check(space: FiniteRelationSpace, G: FiniteGroupoid) -> list[tuple[str, str]]:
    """Cells of ``G`` that no chooser could produce for ``space``."""
    if tuple(space.universe) != tuple(G.universe):
        raise SpaceError("universe mismatch between space and groupoid")
    bad = []
    for a, b in product(range(space.n), repeat=2):
        c = G.table[a][b]
        if space.related(a, b):
            ok = c == b
        else:
            ok = bool((space.succ[a] & space.succ[b]) >> c & 1)
        if not ok:
            bad.append((space.universe[a], space.universe[b]))
    return bad


def induced_relations(G: FiniteGroupoid) -> tuple[FiniteRelationSpace, FiniteRelationSpace]:
    """``(R_A, R_A*)`` with ``R_A = {(a, b) : ab = b}`` and ``R_A*`` the pairs ``(a, ab), (b, ab)``."""
    U, n = G.universe, G.n
    plain = {(U[a], U[b]) for a, b in product(range(n), repeat=2) if G.table[a][b] == b}
    star = set()
    for a, b in product(range(n), repeat=2):
        c = G.table[a][b]
        star.add((U[a], U[c]))
        star.add((U[b], U[c]))
    return FiniteRelationSpace(U, frozenset(plain)), FiniteRelationSpace(U, frozenset(star))


# -- Bridge between relation properties and identities ------

BRIDGE = (
    ("reflexive<=>aa=a", "reflexive", "aa = a", "iff"),
    ("symmetric<=>(ab)a=a", "symmetric", "(ab)a = a", "iff"),
    ("transitive<=>a((ab)c)=(ab)c", "transitive", "a((ab)c) = (ab)c", "iff"),
    ("ab=ba=>antisymmetric", "antisymmetric", "ab = ba", "implies"),
    ("(ab)a=ab=>antisymmetric", "antisymmetric", "(ab)a = ab", "implies"),
    ("(ab)c=a(bc)=>transitive", "transitive", "(ab)c = a(bc)", "implies"),
)


def bridge_audit(space: FiniteRelationSpace, limit: int | None = None) -> list[ClaimReport]:
    """Check the six relation/identity correspondences on every realization
    (or the first ``limit`` of them), plus preservation of forced cells under
    the identity morphism."""
    profile = classify(space)
    if not profile.realizable:
        raise NotUpDirected(profile.witnesses["realizable"])
    stack = updg_stack(space, limit)
    reports = []
    for claim_id, flag, text, kind in BRIDGE:
        sat = holds_identity_all(stack, text)
        prop = getattr(profile, flag)
        ok = sat == prop if kind == "iff" else (~sat | prop)
        if ok.all():
            reports.append(ClaimReport(claim_id, HOLDS, space.name, ("realizable",), None, len(stack)))
        else:
            k = int(np.argmin(ok))
            reports.append(ClaimReport(
                claim_id, FAILS, space.name, ("realizable",),
                {"groupoid_index": k, "table": stack[k].tolist(), "relation_has_property": prop,
                 "identity_holds": bool(sat[k])}, len(stack)))
    reports.append(morphism_preservation(space, space))
    return reports


def morphism_preservation(source: FiniteRelationSpace, target: FiniteRelationSpace,
                          assignment: dict | None = None) -> ClaimReport:
    """A relational morphism ``f`` maps forced products: ``Rab`` gives
    ``f(ab) = f(b) = f(a)f(b)`` in any realization of the target."""
    from .relcore import SpaceMap, morphism_check
    assignment = assignment or {x: x for x in source.universe}
    verdict, witness = morphism_check(SpaceMap(source, target, assignment))
    if verdict == "not_morphism":
        return ClaimReport("morphism-preservation", "not_applicable", source.name,
                           note=f"not a relational morphism at {witness}")
    gs, gt = build_updg(source), build_updg(target)
    count = 0
    for a, b in source.sorted_pairs():
        count += 1
        fa, fb = assignment[a], assignment[b]
        if assignment[gs(a, b)] != gt(fa, fb):
            return ClaimReport("morphism-preservation", FAILS, source.name, ("up_directed",),
                               {"a": a, "b": b}, count)
    return ClaimReport("morphism-preservation", HOLDS, source.name, ("up_directed",), None, count)


# -- the equivalence groupoid (a·b = a if Rab else b) ------------------------

PAWLAK_AXIOMS = (
    ("E1", "xx = x"),
    ("E2", "x(az) = (xa)(xz)"),
    ("E3", "xax = x"),
    ("E4", "azxauz = auz"),
    ("E5", "u(azxa)z = uaz"),
)

PAWLAK_CONSEQUENCES = (
    ("C1", "x(ax) = x"), ("C2", "x(xa) = xa"), ("C3", "(xa)a = xa"),
    ("C4", "x(xaz) = x(az)"), ("C5", "(xz)(az) = xz"), ("C6", "(xa)(zx) = xazx"),
    ("C7", "xazxa = xa"), ("C8", "xazaz = xaz"), ("C9", "xcazaxa = xaza"),
    ("C10", "(xazx)(za) = x(za)"), ("C11", "x(az)a = xaza"), ("C12", "(xaz)(ax) = (xza)(zx)"),
    ("C13", "xazxz = xzaz"),
)
# C9 as listed fails on equivalences; without the stray c it holds.
PAWLAK_VARIANTS = (("C9.no-c", "xazaxa = xaza"),)


def pawlak_groupoid(space: FiniteRelationSpace) -> FiniteGroupoid:
    n = space.n
    table = [[a if space.related(a, b) else b for b in range(n)] for a in range(n)]
    return FiniteGroupoid(space.universe, table, space.name and f"P({space.name})")


def _cancellation_claim(G: FiniteGroupoid) -> tuple[bool, dict | None]:
    # For every e: (for all a, x: ex = ea -> x = a) iff (for all x: xe = e).
    T, n = G.table, G.n
    for e in range(n):
        left = all(T[e][x] != T[e][a] or x == a for a in range(n) for x in range(n))
        right = all(T[x][e] == e for x in range(n))
        if left != right:
            return False, {"e": G.universe[e], "left_cancellative": left, "absorbing_right": right}
    return True, None


def pawlak_audit(space: FiniteRelationSpace) -> list[ClaimReport]:
    G = pawlak_groupoid(space)
    reports = []
    for claim_id, text in PAWLAK_AXIOMS + PAWLAK_CONSEQUENCES + PAWLAK_VARIANTS:
        ident = parse_identity(text, claim_id)
        ok, witness = holds_identity(G, ident)
        reports.append(ClaimReport(claim_id, HOLDS if ok else FAILS, space.name, ("equivalence",),
                                   witness, G.n ** len(ident.variables()), note=text))
    ok, witness = _cancellation_claim(G)
    reports.append(ClaimReport("C14", HOLDS if ok else FAILS, space.name, ("equivalence",),
                               witness, G.n ** 3,
                               note="(forall a,x)(ex = ea -> x = a) iff (forall x) xe = e"))
    return reports


# -- directoids -------------------------------------------------------------

DIRECTOID_AXIOMS = (("dir1", "aa = a"), ("dir2", "(ab)a = ab"), ("dir3", "b(ab) = ab"),
                    ("dir4", "a((ab)c) = (ab)c"))


def directoid_check(G: FiniteGroupoid) -> dict:
    out: dict = {}
    for name, text in DIRECTOID_AXIOMS:
        ok, witness = holds_identity(G, text)
        out[name] = ok
        if not ok:
            out[f"{name}_witness"] = witness
    if all(out[name] for name, _ in DIRECTOID_AXIOMS):
        U, T = G.universe, G.table
        out["order"] = sorted((U[a], U[b]) for a, b in product(range(G.n), repeat=2)
                              if T[a][b] == b and T[b][a] == b)
    return out


def directoid_from_poset(space: FiniteRelationSpace, chooser: Chooser = canonical_chooser) -> FiniteGroupoid:
    """Join directoid on an up-directed poset: the larger element when
    comparable, otherwise the chooser's pick of a common upper bound."""
    profile = classify(space)
    for flag in ("reflexive", "antisymmetric", "transitive", "up_directed"):
        if not getattr(profile, flag):
            raise PreconditionViolated(flag, profile.witnesses.get(flag))
    n = space.n
    table = [[0] * n for _ in range(n)]
    for a, b in product(range(n), repeat=2):
        if space.related(a, b):
            table[a][b] = b
        elif space.related(b, a):
            table[a][b] = a
        else:
            table[a][b] = chooser(a, b, space.succ[a] & space.succ[b])
    return FiniteGroupoid(space.universe, table, space.name and f"D({space.name})")


# -- g-ideals and g-filters ---------------------------------------------------

def _subgroupoid_closure(G: FiniteGroupoid, m: int) -> int:
    T = G.table
    while True:
        grown = m
        for a in bits(m):
            for b in bits(m):
                grown |= 1 << T[a][b]
        if grown == m:
            return m
        m = grown


def _g_ideal_mask(G: FiniteGroupoid, m: int) -> int:
    T, n = G.table, G.n
    while True:
        m = _subgroupoid_closure(G, m)
        grown = m
        for a in range(n):
            if any(T[a][b] == b for b in bits(m)):
                grown |= 1 << a
        if grown == m:
            return m
        m = grown


def _mask_of(G: FiniteGroupoid, labels) -> int:
    m = 0
    for x in labels:
        m |= 1 << G.idx(x)
    return m


def _labels_of(G: FiniteGroupoid, m: int) -> frozenset[str]:
    return frozenset(G.universe[i] for i in bits(m))


def g_ideal_closure(G: FiniteGroupoid, subset) -> frozenset[str]:
    """Least g-ideal containing the subgroupoid generated by ``subset``."""
    return _labels_of(G, _g_ideal_mask(G, _mask_of(G, subset)))


def _is_subgroupoid(G, m):
    return all(m >> G.table[a][b] & 1 for a in bits(m) for b in bits(m))


def is_g_ideal(G: FiniteGroupoid, subset) -> bool:
    m = _mask_of(G, subset)
    T = G.table
    return _is_subgroupoid(G, m) and all(
        m >> a & 1 for a in range(G.n) for b in bits(m) if T[a][b] == b)


def is_g_filter(G: FiniteGroupoid, subset) -> bool:
    m = _mask_of(G, subset)
    T = G.table
    return _is_subgroupoid(G, m) and all(
        m >> b & 1 for a in bits(m) for b in range(G.n) if T[a][b] == b)


def enumerate_g_ideals(G: FiniteGroupoid, bound: int | None = None) -> list[dict]:
    """Every g-ideal, flagged ``principal`` when it is generated by one element."""
    if G.n > (bound or 12):
        raise BoundExceeded(f"groupoid has {G.n} elements; enumeration capped at {bound or 12}")
    principal = {_g_ideal_mask(G, 1 << i) for i in range(G.n)}
    out = []
    for m in range(1 << G.n):
        if _g_ideal_mask(G, m) == m:
            out.append({"members": sorted(_labels_of(G, m), key=G.idx),
                        "principal": m in principal, "finitely_generated": True})
    return out


# -- compatible tolerances ----------------------------------------------------

TOLERANCE_BOUND = 5


def _tolerance_pairs(n: int, chosen) -> set[tuple[int, int]]:
    pairs = {(a, a) for a in range(n)}
    for a, b in chosen:
        pairs.add((a, b))
        pairs.add((b, a))
    return pairs


def _compatible(T, pairs) -> bool:
    return all((T[a][c], T[b][d]) in pairs for a, b in pairs for c, d in pairs)


def _transitive(pairs) -> bool:
    return all((a, d) in pairs for a, b in pairs for c, d in pairs if b == c)


def compatible_tolerances(G: FiniteGroupoid) -> list[frozenset[tuple[str, str]]]:
    """All reflexive symmetric relations ``T`` with ``aTb, cTd => (ac)T(bd)``."""
    if G.n > TOLERANCE_BOUND:
        raise BoundExceeded(f"tolerance sweep is capped at {TOLERANCE_BOUND} elements")
    U = G.universe
    return [frozenset((U[a], U[b]) for a, b in pairs) for pairs in _compatible_pair_sets(G)]


def _compatible_pair_sets(G: FiniteGroupoid):
    off = list(combinations(range(G.n), 2))
    for r in range(len(off) + 1):
        for chosen in combinations(off, r):
            pairs = _tolerance_pairs(G.n, chosen)
            if _compatible(G.table, pairs):
                yield pairs


def is_tolerance_trivial(G: FiniteGroupoid) -> tuple[bool, frozenset | None]:
    """True when every compatible tolerance is transitive (hence a congruence)."""
    if G.n > TOLERANCE_BOUND:
        raise BoundExceeded(f"tolerance sweep is capped at {TOLERANCE_BOUND} elements")
    U = G.universe
    for pairs in _compatible_pair_sets(G):
        if not _transitive(pairs):
            return False, frozenset((U[a], U[b]) for a, b in pairs)
    return True, None
