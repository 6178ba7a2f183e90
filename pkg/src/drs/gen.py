"""Generators for small relation spaces: random draws and exhaustive families."""
from __future__ import annotations

import random
from itertools import combinations, permutations, product
from typing import Iterator

from .relcore import FiniteRelationSpace, bits, classify


def labels(n: int) -> tuple[str, ...]:
    return tuple(str(i + 1) for i in range(n))


def _space(n: int, succ: list[int], name: str | None = None) -> FiniteRelationSpace:
    return FiniteRelationSpace.from_successor_masks(labels(n), succ, name)


def _make_up_directed(n: int, succ: list[int], rng: random.Random) -> list[int]:
    # Adding edges never destroys a common successor, so this terminates.
    while True:
        bad = [(a, b) for a, b in product(range(n), repeat=2) if not succ[a] & succ[b]]
        if not bad:
            return succ
        a, b = rng.choice(bad)
        x = rng.randrange(n)
        succ[a] |= 1 << x
        succ[b] |= 1 << x


def random_space(n: int, rng: random.Random | int = 0, density: float = 0.4, *,
                 reflexive: bool = False, up_directed: bool = False,
                 antisymmetric: bool = False, name: str | None = None) -> FiniteRelationSpace:
    """Random relation; requested properties are imposed by construction.

    ``antisymmetric`` together with ``up_directed`` is realized by drawing an
    antisymmetric relation and adding a top element related from everywhere.
    """
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    succ = [0] * n
    for a, b in product(range(n), repeat=2):
        if a == b:
            if reflexive or rng.random() < density:
                succ[a] |= 1 << b
        elif antisymmetric:
            if a < b:
                pick = rng.random()
                if pick < density / 2:
                    succ[a] |= 1 << b
                elif pick < density:
                    succ[b] |= 1 << a
        elif rng.random() < density:
            succ[a] |= 1 << b
    if up_directed:
        if antisymmetric:
            top = rng.randrange(n)
            succ[top] &= 1 << top
            for a in range(n):
                succ[a] |= 1 << top
        else:
            succ = _make_up_directed(n, succ, rng)
    return _space(n, succ, name)


def all_relations(n: int) -> Iterator[FiniteRelationSpace]:
    cells = list(product(range(n), repeat=2))
    for mask in range(1 << len(cells)):
        succ = [0] * n
        for k in bits(mask):
            a, b = cells[k]
            succ[a] |= 1 << b
        yield _space(n, succ)


def reflexive_relations(n: int) -> Iterator[FiniteRelationSpace]:
    """All ``2^(n^2 - n)`` reflexive relations."""
    off = [(a, b) for a, b in product(range(n), repeat=2) if a != b]
    diag = [1 << a for a in range(n)]
    for mask in range(1 << len(off)):
        succ = diag[:]
        for k in bits(mask):
            a, b = off[k]
            succ[a] |= 1 << b
        yield _space(n, succ)


def reflexive_antisymmetric(n: int) -> Iterator[FiniteRelationSpace]:
    """All ``3^(n(n-1)/2)`` reflexive antisymmetric relations."""
    pairs = list(combinations(range(n), 2))
    for choice in product((0, 1, 2), repeat=len(pairs)):
        succ = [1 << a for a in range(n)]
        for (a, b), c in zip(pairs, choice):
            if c == 1:
                succ[a] |= 1 << b
            elif c == 2:
                succ[b] |= 1 << a
        yield _space(n, succ)


def posets(n: int) -> Iterator[FiniteRelationSpace]:
    """Labeled partial orders (1, 1, 3, 19, 219, ... of them)."""
    for space in reflexive_antisymmetric(n):
        if classify(space).transitive:
            yield space


def equivalences(n: int) -> Iterator[FiniteRelationSpace]:
    """One equivalence per set partition of the universe."""
    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in partitions(rest):
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
            yield [[first]] + part

    for blocks in partitions(list(range(n))):
        succ = [0] * n
        for block in blocks:
            m = sum(1 << x for x in block)
            for x in block:
                succ[x] = m
        yield _space(n, succ)


def canonical_form(space: FiniteRelationSpace) -> tuple:
    """Lexicographically least successor-matrix over all relabellings."""
    n, succ = space.n, space.succ
    best = None
    for perm in permutations(range(n)):
        inv = [0] * n
        for new, old in enumerate(perm):
            inv[old] = new
        rows = tuple(sum(1 << inv[y] for y in bits(succ[old])) for old in perm)
        if best is None or rows < best:
            best = rows
    return best


def up_to_isomorphism(spaces) -> list[FiniteRelationSpace]:
    seen: dict[tuple, FiniteRelationSpace] = {}
    for s in spaces:
        seen.setdefault((s.n, canonical_form(s)), s)
    return list(seen.values())
