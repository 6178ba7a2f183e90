"""Finite relational spaces, their classification and neighbourhood granules.

Subsets of a universe are carried around internally as integer bitmasks
(bit ``i`` set iff ``universe[i]`` is a member); the public helpers convert
to and from ``frozenset`` of labels at the edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_BOUND = 12


class SpaceError(ValueError):
    """Malformed space or a label that is not in the universe."""


class BoundExceeded(ValueError):
    """A family-valued computation was asked for on a universe that is too large."""


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class FiniteRelationSpace:
    """A finite universe with one binary relation, ``Rab`` read as ``(a, b) in relation``.

    The universe order is fixed at construction and is the tie-breaking order
    used by every "least element" choice downstream.
    """

    universe: tuple[str, ...]
    relation: frozenset[tuple[str, str]]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "relation", frozenset(tuple(p) for p in self.relation))
        if len(set(self.universe)) != len(self.universe):
            raise SpaceError(f"duplicate labels in universe {self.universe!r}")
        known = set(self.universe)
        for a, b in self.relation:
            if a not in known or b not in known:
                raise SpaceError(f"pair ({a!r}, {b!r}) references a label outside the universe")

    @classmethod
    def from_pairs(cls, universe: Iterable, pairs: Iterable[Sequence], name: str | None = None):
        return cls(tuple(str(x) for x in universe), frozenset((str(a), str(b)) for a, b in pairs), name)

    @classmethod
    def from_matrix(cls, universe: Iterable, matrix: Sequence[Sequence[bool]], name: str | None = None):
        universe = tuple(str(x) for x in universe)
        pairs = {(universe[i], universe[j])
                 for i, row in enumerate(matrix) for j, v in enumerate(row) if v}
        return cls(universe, frozenset(pairs), name)

    @classmethod
    def from_successor_masks(cls, universe: Sequence[str], succ: Sequence[int], name: str | None = None):
        pairs = {(universe[i], universe[j]) for i, m in enumerate(succ) for j in bits(m)}
        return cls(tuple(universe), frozenset(pairs), name)

    # -- indexing ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.universe)

    @cached_property
    def index(self) -> Mapping[str, int]:
        return {x: i for i, x in enumerate(self.universe)}

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def idx(self, label) -> int:
        try:
            return self.index[str(label)]
        except KeyError:
            raise SpaceError(f"unknown element {label!r}") from None

    def mask(self, labels: Iterable) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.idx(x)
        return m

    def labels(self, mask: int) -> frozenset[str]:
        return frozenset(self.universe[i] for i in bits(mask))

    def ordered(self, mask: int) -> list[str]:
        """Labels of ``mask`` in universe order."""
        return [self.universe[i] for i in bits(mask)]

    def subsets(self) -> range:
        return range(1 << self.n)

    # -- relation as bitmasks ---------------------------------------------

    @cached_property
    def succ(self) -> tuple[int, ...]:
        """``succ[i]`` is the inverse neighbourhood ``[i]_i = {x : R i x}``."""
        out = [0] * self.n
        for a, b in self.relation:
            out[self.index[a]] |= 1 << self.index[b]
        return tuple(out)

    @cached_property
    def pred(self) -> tuple[int, ...]:
        """``pred[i]`` is the neighbourhood ``[i] = {x : R x i}``."""
        out = [0] * self.n
        for a, b in self.relation:
            out[self.index[b]] |= 1 << self.index[a]
        return tuple(out)

    @cached_property
    def sym(self) -> tuple[int, ...]:
        return tuple(p & s for p, s in zip(self.pred, self.succ))

    def related(self, i: int, j: int) -> bool:
        return bool(self.succ[i] >> j & 1)

    def has(self, a, b) -> bool:
        return self.related(self.idx(a), self.idx(b))

    def matrix(self) -> list[list[bool]]:
        return [[self.related(i, j) for j in range(self.n)] for i in range(self.n)]

    def sorted_pairs(self) -> list[tuple[str, str]]:
        ix = self.index
        return sorted(self.relation, key=lambda p: (ix[p[0]], ix[p[1]]))

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<FiniteRelationSpace{tag} n={self.n} |R|={len(self.relation)}>"


@dataclass(frozen=True)
class RelationProfile:
    up_directed: bool
    reflexive: bool
    antisymmetric: bool
    transitive: bool
    symmetric: bool
    realizable: bool = True
    witnesses: Mapping[str, tuple] = field(default_factory=dict)

    @property
    def parthood(self) -> bool:
        return self.up_directed and self.reflexive and self.antisymmetric

    @property
    def equivalence(self) -> bool:
        return self.reflexive and self.symmetric and self.transitive

    @property
    def partial_order(self) -> bool:
        return self.reflexive and self.antisymmetric and self.transitive

    def flags(self) -> dict[str, bool]:
        return {k: getattr(self, k) for k in PROFILE_FLAGS}


PROFILE_FLAGS = ("up_directed", "reflexive", "antisymmetric", "transitive", "symmetric", "realizable")


def _first(it):
    return next(iter(it), None)


def classify(space: FiniteRelationSpace) -> RelationProfile:
    n, succ, lab = space.n, space.succ, space.universe
    rel = space.related
    found = {
        "up_directed": _first((lab[a], lab[b]) for a, b in product(range(n), repeat=2)
                              if not succ[a] & succ[b]),
        "reflexive": _first((lab[a],) for a in range(n) if not rel(a, a)),
        "antisymmetric": _first((lab[a], lab[b]) for a, b in product(range(n), repeat=2)
                                if a != b and rel(a, b) and rel(b, a)),
        "transitive": _first((lab[a], lab[b], lab[c]) for a, b, c in product(range(n), repeat=3)
                             if rel(a, b) and rel(b, c) and not rel(a, c)),
        "symmetric": _first((lab[a], lab[b]) for a, b in product(range(n), repeat=2)
                            if rel(a, b) and not rel(b, a)),
        # weaker than up-directed: only pairs outside R need a common successor
        "realizable": _first((lab[a], lab[b]) for a, b in product(range(n), repeat=2)
                             if not rel(a, b) and not succ[a] & succ[b]),
    }
    witnesses = {k: w for k, w in found.items() if w is not None}
    return RelationProfile(**{k: w is None for k, w in found.items()}, witnesses=witnesses)


def upper_bounds(space: FiniteRelationSpace, a, b) -> frozenset[str]:
    """``U_R(a, b) = {x : Rax and Rbx}``."""
    return space.labels(space.succ[space.idx(a)] & space.succ[space.idx(b)])


NEIGHBORHOOD_KINDS = ("plain", "inverse", "symmetric")


def neighborhood(space: FiniteRelationSpace, x, kind: str = "plain") -> frozenset[str]:
    i = space.idx(x)
    if kind == "plain":
        return space.labels(space.pred[i])
    if kind == "inverse":
        return space.labels(space.succ[i])
    if kind == "symmetric":
        return space.labels(space.sym[i])
    raise ValueError(f"unknown neighbourhood kind {kind!r}")


def check_bound(space: FiniteRelationSpace, bound: int | None = None):
    bound = DEFAULT_BOUND if bound is None else bound
    if space.n > bound:
        raise BoundExceeded(f"universe has {space.n} elements; exhaustive enumeration is capped at {bound}")


def nbd_closed_masks(space: FiniteRelationSpace, bound: int | None = None) -> list[int]:
    check_bound(space, bound)
    pred = space.pred
    return [m for m in space.subsets()
            if all(pred[i] & ~m == 0 for i in bits(m))]


def nbd_closed_family(space: FiniteRelationSpace, bound: int | None = None) -> list[frozenset[str]]:
    """All ``A`` with ``[x] <= A`` for every ``x`` in ``A``."""
    return [space.labels(m) for m in nbd_closed_masks(space, bound)]


def reflexive_closure(space: FiniteRelationSpace) -> FiniteRelationSpace:
    diag = {(x, x) for x in space.universe}
    name = f"{space.name}+" if space.name else None
    return FiniteRelationSpace(space.universe, space.relation | diag, name)


@dataclass(frozen=True)
class SpaceMap:
    source: FiniteRelationSpace
    target: FiniteRelationSpace
    assignment: Mapping[str, str]

    def __post_init__(self):
        missing = [x for x in self.source.universe if x not in self.assignment]
        if missing:
            raise SpaceError(f"assignment is not total; missing {missing}")
        for x, y in self.assignment.items():
            self.source.idx(x)
            self.target.idx(y)


def morphism_check(fmap: SpaceMap) -> tuple[str, tuple | None]:
    """Classify ``fmap`` as ``not_morphism``, ``morphism`` or ``strong_morphism``.

    A morphism sends every ``R``-pair to a ``Q``-pair. It is strong when every
    ``Q``-pair ``(c, e)`` is the image of some ``R``-pair ``(a, b)``. The
    witness is the offending pair in either failure case.
    """
    src, tgt, f = fmap.source, fmap.target, fmap.assignment
    for a, b in src.sorted_pairs():
        if not tgt.has(f[a], f[b]):
            return "not_morphism", (a, b)
    images = {(f[a], f[b]) for a, b in src.relation}
    for c, e in tgt.sorted_pairs():
        if (c, e) not in images:
            return "morphism", (c, e)
    return "strong_morphism", None


def granule_correspondence(space1: FiniteRelationSpace, space2: FiniteRelationSpace) -> bool:
    """Equal number of distinct plain granules ``[x]`` on both sides."""
    return len(set(space1.pred)) == len(set(space2.pred))
